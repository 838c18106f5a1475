"""Target contrastive pessimistic (TCP) estimation for discriminant analysis.

The estimator solves ``min_theta max_q  R(theta | Z, q) - R(theta_S | Z, q)``
where ``R`` is the ridge-regularized soft-label risk, ``theta_S`` the source
model and ``q`` ranges over row-stochastic labelings of the target samples.
For fixed ``q`` the closed-form :func:`tcpda.da.estimate` is the exact
minimizer over ``theta``, so the iteration alternates that block step with a
projected gradient ascent step on ``q``.
"""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field

import numpy as np

from . import da
from .exceptions import ConfigurationError, DivergedOptimizationError, InvalidInputError
from .simplex import project_rows

log = logging.getLogger(__name__)

# Floor on the ridge for QDA so starved classes keep invertible covariances.
MIN_QDA_LAMBDA = 1e-12


@dataclass(frozen=True)
class TCPConfig:
    """Hyperparameters of :func:`fit`.

    ``base_rate`` is a per-sample learning rate: at iteration ``t`` the
    labeling moves by ``base_rate / (t + 1)`` times ``m * grad_q``, which
    undoes the ``1/m`` factor in the gradient so the step does not shrink
    with the number of target samples.
    """

    lam: float = 1.0
    max_iters: int = 500
    base_rate: float = 1.0
    tolerance: float = 1e-9
    q_init: str = "source_posterior"

    def __post_init__(self):
        if not self.lam >= 0:
            raise ConfigurationError(f"lam must be nonnegative, got {self.lam!r}")
        if int(self.max_iters) != self.max_iters or self.max_iters < 0:
            raise ConfigurationError(f"max_iters must be a nonnegative integer, got {self.max_iters!r}")
        if not self.base_rate > 0:
            raise ConfigurationError(f"base_rate must be positive, got {self.base_rate!r}")
        if not self.tolerance >= 0:
            raise ConfigurationError(f"tolerance must be nonnegative, got {self.tolerance!r}")
        if self.q_init not in ("source_posterior", "uniform"):
            raise ConfigurationError(f"unknown q_init {self.q_init!r}")

    def learning_rate(self, t: int) -> float:
        return self.base_rate / (t + 1)


@dataclass(frozen=True, eq=False)
class TCPResult:
    params: da.DAParams
    worst_case_labels: np.ndarray
    tcp_risk_trace: list
    iterations: int
    converged: bool
    config: TCPConfig = field(default_factory=TCPConfig)

    @property
    def tcp_risk(self) -> float:
        return self.tcp_risk_trace[-1]

    def to_dict(self) -> dict:
        out = self.params.to_dict()
        out.update(
            q_star=self.worst_case_labels.tolist(),
            trace=list(self.tcp_risk_trace),
            iterations=self.iterations,
            converged=self.converged,
            config=asdict(self.config),
        )
        return out

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, d: dict) -> "TCPResult":
        return cls(
            params=da.DAParams.from_dict(d),
            worst_case_labels=np.asarray(d["q_star"], dtype=float),
            tcp_risk_trace=[float(v) for v in d["trace"]],
            iterations=int(d["iterations"]),
            converged=bool(d["converged"]),
            config=TCPConfig(**d.get("config", {})),
        )

    @classmethod
    def from_json(cls, text: str) -> "TCPResult":
        return cls.from_dict(json.loads(text))


def _check_pair(theta: da.DAParams, theta_s: da.DAParams):
    if theta.n_classes != theta_s.n_classes or theta.dim != theta_s.dim:
        raise InvalidInputError(
            f"model structure mismatch: K={theta.n_classes}, D={theta.dim} "
            f"vs source K={theta_s.n_classes}, D={theta_s.dim}"
        )
    if theta.shared_covariance != theta_s.shared_covariance:
        raise InvalidInputError("cannot contrast an LDA model with a QDA model")


def sample_contrast(theta: da.DAParams, theta_s: da.DAParams, Z) -> np.ndarray:
    """Per-sample, per-class loss of ``theta`` minus that of ``theta_s``.

    Entry ``(j, k)`` is ``-log[N(z_j | theta_k) / N(z_j | theta_S_k)]`` plus the
    difference of the two ridge penalties for class ``k``. The TCP risk is
    ``mean_j sum_k q_jk * C_jk``.
    """
    _check_pair(theta, theta_s)
    C = theta_s.log_densities(Z) - theta.log_densities(Z)
    C += 0.5 * (theta.regularization * theta.precision_traces() - theta_s.regularization * theta_s.precision_traces())
    return C


def tcp_risk(theta: da.DAParams, theta_s: da.DAParams, Z, q) -> float:
    """Regularized target risk of ``theta`` minus that of the source model, under labeling ``q``."""
    _check_pair(theta, theta_s)
    return da.regularized_risk(theta, Z, q) - da.regularized_risk(theta_s, Z, q)


def grad_q(theta: da.DAParams, theta_s: da.DAParams, Z) -> np.ndarray:
    """Gradient of :func:`tcp_risk` with respect to ``q``; it does not depend on ``q``."""
    C = sample_contrast(theta, theta_s, Z)
    return C / C.shape[0]


def worst_case_risk(theta: da.DAParams, theta_s: da.DAParams, Z) -> float:
    """``max_q tcp_risk(theta, theta_s, Z, q)``, attained at simplex vertices.

    A value ``<= 0`` certifies that ``theta`` is no worse than the source
    model under every labeling of ``Z``, the true one included.
    """
    return float(sample_contrast(theta, theta_s, Z).max(axis=1).mean())


def fit(theta_s: da.DAParams, Z, config: TCPConfig | None = None, callback=None) -> TCPResult:
    """Adapt a source model to unlabeled target samples ``Z``.

    Each iteration re-estimates ``theta`` from the current labeling (the exact
    minimizer for that labeling), evaluates the TCP risk, and takes a
    projected gradient ascent step on the labeling. Iteration stops once the
    TCP risk changes by less than ``config.tolerance`` or after
    ``config.max_iters`` ascent steps; the trace then holds at most
    ``max_iters + 1`` values and the returned model is the one estimated from
    the returned labeling.

    ``callback(t, theta, q, value)``, if given, is called once per
    evaluated iterate.
    """
    config = config or TCPConfig()
    Z = da._as_matrix(Z, theta_s.dim)
    m = Z.shape[0]
    if m < 1:
        raise InvalidInputError("need at least one target sample")
    lam = config.lam
    shared = theta_s.shared_covariance
    if not shared:
        lam = max(lam, MIN_QDA_LAMBDA)
    if lam != theta_s.regularization:
        log.warning(
            "TCP ridge %g differs from the source model's %g; the risk guarantee assumes they match",
            lam,
            theta_s.regularization,
        )

    if config.q_init == "uniform":
        q = np.full((m, theta_s.n_classes), 1.0 / theta_s.n_classes)
    else:
        q = da.posterior(theta_s, Z)

    source_log_dens = theta_s.log_densities(Z)
    source_pen = 0.5 * theta_s.regularization * theta_s.precision_traces()

    trace = []
    converged = False
    t = 0
    while True:
        theta = da.estimate(Z, q, lam, shared)
        C = source_log_dens - theta.log_densities(Z)
        C += 0.5 * theta.regularization * theta.precision_traces() - source_pen
        if not np.all(np.isfinite(C)):
            raise DivergedOptimizationError(f"TCP risk became non-finite at iteration {t}", t, trace)
        value = float(np.sum(np.where(q > 0, q * C, 0.0)) / m)
        if not np.isfinite(value):
            raise DivergedOptimizationError(f"TCP risk became non-finite at iteration {t}", t, trace)
        trace.append(value)
        log.debug("iter %d  tcp risk %.12g", t, value)
        if callback is not None:
            callback(t, theta, q, value)
        if t > 0 and abs(trace[-1] - trace[-2]) < config.tolerance:
            converged = True
            break
        if t >= config.max_iters:
            break
        q = project_rows(q + config.learning_rate(t) * C)
        t += 1

    return TCPResult(theta, q, trace, t, converged, config)
