"""Discriminant analysis with soft labels.

Parameters are estimated in closed form from a label matrix ``q`` whose rows
live on the probability simplex; hard labels are the one-hot special case.
The covariance ridge ``lam * I`` is exactly what minimizes the
negative log-likelihood plus the penalty ``(lam / 2) * trace(inv(Sigma_k))``
per unit of class weight, so :func:`regularized_risk` is the objective that
:func:`estimate` minimizes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.special import softmax

from .exceptions import ConfigurationError, EstimationError, InvalidInputError
from .gaussian import LOG_2PI, ClassParams, _regularize_eig

EMPTY_CLASS_WEIGHT = 1e-12
PRIOR_SUM_TOL = 1e-10
ROW_SUM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class DAParams:
    """Per-class Gaussian parameters of an LDA (shared) or QDA model."""

    classes: tuple
    shared_covariance: bool
    regularization: float

    def __post_init__(self):
        classes = tuple(self.classes)
        if not classes:
            raise InvalidInputError("a model needs at least one class")
        D = classes[0].dim
        if any(c.dim != D for c in classes):
            raise InvalidInputError("all classes must have the same dimension")
        total = sum(c.prior for c in classes)
        if abs(total - 1.0) > PRIOR_SUM_TOL:
            raise InvalidInputError(f"priors sum to {total!r}, expected 1")
        if self.shared_covariance:
            ref = classes[0].covariance
            if any(not np.array_equal(c.covariance, ref) for c in classes[1:]):
                raise InvalidInputError("shared-covariance model has differing class covariances")
        object.__setattr__(self, "classes", classes)
        object.__setattr__(self, "shared_covariance", bool(self.shared_covariance))
        object.__setattr__(self, "regularization", float(self.regularization))

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    @property
    def dim(self) -> int:
        return self.classes[0].dim

    @property
    def priors(self) -> np.ndarray:
        return np.array([c.prior for c in self.classes])

    @property
    def means(self) -> np.ndarray:
        return np.stack([c.mean for c in self.classes])

    @cached_property
    def _stacked(self):
        whiteners, consts = [], []
        for k, c in enumerate(self.classes):
            try:
                whiteners.append(c.whitener)
                consts.append(c.log_prior - 0.5 * (c.dim * LOG_2PI + c.log_det))
            except EstimationError as err:
                raise EstimationError(f"class {k}: {err}", class_index=k) from None
        return self.means, np.stack(whiteners), np.array(consts)

    def log_densities(self, X) -> np.ndarray:
        """``(n, K)`` matrix of ``log(pi_k N(x_j | mu_k, Sigma_k))``."""
        X = _as_matrix(X, self.dim)
        means, whiteners, consts = self._stacked
        W = (X[None, :, :] - means[:, None, :]) @ np.swapaxes(whiteners, 1, 2)
        return consts - 0.5 * np.einsum("knd,knd->nk", W, W)

    def precision_traces(self) -> np.ndarray:
        return np.array([c.precision_trace for c in self.classes])

    def to_dict(self) -> dict:
        return {
            "shared_covariance": self.shared_covariance,
            "lambda": self.regularization,
            "classes": [c.to_dict() for c in self.classes],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DAParams":
        try:
            classes = tuple(ClassParams.from_dict(c) for c in d["classes"])
            return cls(classes, bool(d["shared_covariance"]), float(d["lambda"]))
        except (KeyError, TypeError) as err:
            raise InvalidInputError(f"malformed model document: {err}") from None

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> "DAParams":
        return cls.from_dict(json.loads(text))


def _as_matrix(X, dim=None) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None] if dim == 1 else X[None, :]
    if X.ndim != 2:
        raise InvalidInputError(f"expected a 2-d data matrix, got {X.ndim} dimensions")
    if dim is not None and X.shape[1] != dim:
        raise InvalidInputError(f"expected {dim} features, got {X.shape[1]}")
    if not np.all(np.isfinite(X)):
        raise InvalidInputError("data matrix contains non-finite values")
    return X


def check_label_matrix(q, m=None, tol=ROW_SUM_TOL) -> np.ndarray:
    """Validate a row-stochastic label matrix and return it as a float array."""
    q = np.asarray(q, dtype=float)
    if q.ndim != 2:
        raise InvalidInputError("label matrix must be 2-d (samples x classes)")
    if m is not None and q.shape[0] != m:
        raise InvalidInputError(f"label matrix has {q.shape[0]} rows, data has {m}")
    if not np.all(np.isfinite(q)) or q.min(initial=0.0) < -tol or q.max(initial=0.0) > 1 + tol:
        raise InvalidInputError("label matrix entries must lie in [0, 1]")
    if np.max(np.abs(q.sum(axis=1) - 1.0), initial=0.0) > tol:
        raise InvalidInputError("label matrix rows must sum to 1")
    return q


def one_hot(labels, n_classes=None) -> np.ndarray:
    """Encode integer class indices as a one-hot label matrix."""
    labels = np.asarray(labels)
    if labels.ndim != 1 or (labels.size and labels.min() < 0):
        raise InvalidInputError("labels must be a vector of nonnegative class indices")
    K = int(labels.max()) + 1 if n_classes is None else int(n_classes)
    if labels.size and labels.max() >= K:
        raise InvalidInputError(f"label {labels.max()} out of range for {K} classes")
    out = np.zeros((labels.size, K))
    out[np.arange(labels.size), labels] = 1.0
    return out


def estimate(Z, q, lam=1.0, shared=False) -> DAParams:
    """Weighted maximum-likelihood estimate of a discriminant analysis model.

    Parameters
    ----------
    Z : array_like of shape (m, D)
        Samples.
    q : array_like of shape (m, K)
        Row-stochastic (soft) labels.
    lam : float
        Ridge added to every covariance after clipping negative eigenvalues.
    shared : bool
        Pool the class covariances as ``sum_k pi_k Sigma_k`` (LDA) instead of
        keeping one per class (QDA).

    Returns
    -------
    DAParams

    Notes
    -----
    Covariances use the population (``1 / sum_j q_jk``) normalization. A
    class whose total weight falls below ``1e-12`` gets the global sample
    mean and covariance ``lam * I`` so that an adversarial labeling that
    starves a class does not abort the optimization.
    """
    Z = _as_matrix(Z)
    m, D = Z.shape
    if m < 1:
        raise InvalidInputError("need at least one sample")
    if not lam >= 0:
        raise ConfigurationError(f"regularization must be nonnegative, got {lam!r}")
    q = check_label_matrix(q, m)
    K = q.shape[1]

    weights = q.sum(axis=0)
    priors = weights / m
    priors = priors / priors.sum()
    global_mean = Z.mean(axis=0)
    empty = weights < EMPTY_CLASS_WEIGHT
    safe_w = np.where(empty, 1.0, weights)
    means = (q.T @ Z) / safe_w[:, None]
    means[empty] = global_mean

    scatter = np.empty((K, D, D))
    for k in range(K):
        R = Z - means[k]
        scatter[k] = (q[:, k, None] * R).T @ R / safe_w[k]
    scatter[empty] = 0.0
    covs, evals, evecs = _regularize_eig(scatter, lam)

    if shared:
        # Pooling already-ridged class covariances leaves exactly one lam * I
        # on the diagonal (priors sum to 1); the final pass only re-symmetrizes.
        pooled, w, V = _regularize_eig(np.tensordot(priors, covs, axes=1), 0.0)
        covs, evals, evecs = [pooled] * K, [w] * K, [V] * K

    for arr in (means, *covs):
        arr.setflags(write=False)
    classes = tuple(ClassParams._from_eig(priors[k], means[k], covs[k], evals[k], evecs[k]) for k in range(K))
    return DAParams(classes, shared, lam)


def risk(params: DAParams, Z, q) -> float:
    """Average soft-labelled negative log-likelihood ``-(1/m) sum_jk q_jk log N(z_j | theta_k)``."""
    Z = _as_matrix(Z, params.dim)
    q = np.asarray(q, dtype=float)
    if q.shape != (Z.shape[0], params.n_classes):
        raise InvalidInputError(f"label matrix shape {q.shape} does not match ({Z.shape[0]}, {params.n_classes})")
    L = params.log_densities(Z)
    # 0 * log(0) contributes nothing.
    terms = np.where(q > 0, q * L, 0.0)
    return float(-terms.sum() / Z.shape[0])


def ridge_penalty(params: DAParams, q) -> float:
    """``(lam / 2) * sum_k pi_k(q) * trace(inv(Sigma_k))`` with ``pi_k(q)`` the mean of column k."""
    q = np.asarray(q, dtype=float)
    if q.ndim != 2 or q.shape[1] != params.n_classes:
        raise InvalidInputError("label matrix does not match the number of classes")
    lam = params.regularization
    if lam == 0.0:
        return 0.0
    return float(0.5 * lam * q.mean(axis=0) @ params.precision_traces())


def regularized_risk(params: DAParams, Z, q) -> float:
    """:func:`risk` plus :func:`ridge_penalty`; minimized exactly by :func:`estimate`."""
    return risk(params, Z, q) + ridge_penalty(params, q)


def posterior(params: DAParams, X) -> np.ndarray:
    """Class posterior probabilities, one row per sample."""
    return softmax(params.log_densities(X), axis=1)


def predict(params: DAParams, X) -> np.ndarray:
    """Most probable class per row; ties go to the lowest index."""
    return np.argmax(params.log_densities(X), axis=1)
