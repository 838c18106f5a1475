"""Prior-weighted Gaussian log-densities and eigenvalue-clipped covariance estimates."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.linalg import solve_triangular

from .exceptions import ConfigurationError, EstimationError, InvalidInputError

LOG_2PI = np.log(2.0 * np.pi)

# Determinant floor; anything below is treated as singular.
MIN_DETERMINANT = 1e-300
SYMMETRY_TOL = 1e-10
_TINY = np.finfo(float).tiny


def _regularize_eig(S, lam):
    S = np.asarray(S, dtype=float)
    if S.ndim < 2 or S.shape[-1] != S.shape[-2]:
        raise InvalidInputError(f"expected a square matrix, got shape {S.shape}")
    S = 0.5 * (S + np.swapaxes(S, -1, -2))
    w, V = np.linalg.eigh(S)
    w = np.maximum(w, 0.0) + lam
    out = (V * w[..., None, :]) @ np.swapaxes(V, -1, -2)
    out = 0.5 * (out + np.swapaxes(out, -1, -2))
    return out, w, V


def regularize_covariance(S, lam):
    """Clip negative eigenvalues of ``S`` to zero and add ``lam * I``.

    Parameters
    ----------
    S : array_like of shape (D, D) or (..., D, D)
        Symmetric (or nearly symmetric) matrix, or a stack of them. Each is
        symmetrized as ``(S + S.T) / 2`` before the eigendecomposition.
    lam : float
        Nonnegative ridge added to every eigenvalue after clipping.

    Returns
    -------
    ndarray, same shape as ``S``
        Positive semi-definite matrix whose eigenvalues are all ``>= lam``.
        Strictly positive definite whenever ``lam > 0``.
    """
    if not lam >= 0:
        raise ConfigurationError(f"regularization must be nonnegative, got {lam!r}")
    return _regularize_eig(S, lam)[0]


@dataclass(frozen=True, eq=False)
class ClassParams:
    """Prior, mean and covariance of one Gaussian class.

    A whitening factor of the covariance (Cholesky, or the eigendecomposition
    left over from regularization) is cached on first use, so repeated
    density evaluations cost ``O(D^2)`` per point.
    """

    prior: float
    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        mean = np.atleast_1d(np.array(self.mean, dtype=float))
        cov = np.atleast_2d(np.array(self.covariance, dtype=float))
        if mean.ndim != 1:
            raise InvalidInputError("mean must be a vector")
        D = mean.shape[0]
        if cov.shape != (D, D):
            raise InvalidInputError(f"covariance shape {cov.shape} does not match mean dimension {D}")
        if not np.all(np.isfinite(mean)) or not np.all(np.isfinite(cov)):
            raise InvalidInputError("class parameters must be finite")
        if np.max(np.abs(cov - cov.T), initial=0.0) > SYMMETRY_TOL:
            raise InvalidInputError("covariance is not symmetric")
        prior = float(self.prior)
        if not 0.0 <= prior <= 1.0:
            raise InvalidInputError(f"prior must lie in [0, 1], got {prior}")
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "prior", prior)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", cov)

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    @classmethod
    def _from_eig(cls, prior, mean, covariance, evals, evecs) -> "ClassParams":
        # Trusted constructor for estimates: the covariance was just rebuilt
        # from (evals, evecs), so reuse that factorization instead of
        # validating and factorizing again.
        self = object.__new__(cls)
        object.__setattr__(self, "prior", float(prior))
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", covariance)
        if evals.min() > 0:
            logdet = float(np.sum(np.log(evals)))
            if logdet >= np.log(MIN_DETERMINANT):
                self.__dict__["whitener"] = evecs.T / np.sqrt(evals)[:, None]
                self.__dict__["log_det"] = logdet
                self.__dict__["precision_trace"] = float(np.sum(1.0 / evals))
        return self

    def _factorize(self):
        try:
            L = np.linalg.cholesky(self.covariance)
        except np.linalg.LinAlgError:
            raise EstimationError("covariance is not positive definite") from None
        logdet = 2.0 * np.sum(np.log(np.diag(L)))
        if not logdet >= np.log(MIN_DETERMINANT):
            raise EstimationError(f"covariance determinant underflows (log|S| = {logdet:.1f})")
        return L, float(logdet)

    @cached_property
    def log_det(self) -> float:
        return self._factorize()[1]

    @cached_property
    def whitener(self) -> np.ndarray:
        """Matrix ``W`` with ``W.T @ W = inv(covariance)``; ``(x - mean) @ W.T`` is white."""
        L = self._factorize()[0]
        return solve_triangular(L, np.eye(self.dim), lower=True, check_finite=False)

    @cached_property
    def precision_trace(self) -> float:
        """``trace(inv(covariance))``, used by the ridge penalty."""
        return float(np.sum(self.whitener**2))

    @cached_property
    def log_prior(self) -> float:
        # A starved class keeps prior 0; floor it so log-densities stay finite.
        return float(np.log(max(self.prior, _TINY)))

    def log_density(self, X) -> np.ndarray:
        """Vectorized ``log(prior * N(x | mean, covariance))`` over the rows of ``X``."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.dim:
            raise InvalidInputError(f"expected {self.dim} features, got {X.shape[1]}")
        W = (X - self.mean) @ self.whitener.T
        maha = np.einsum("ij,ij->i", W, W)
        return self.log_prior - 0.5 * (self.dim * LOG_2PI + self.log_det + maha)

    def to_dict(self) -> dict:
        return {
            "prior": self.prior,
            "mean": self.mean.tolist(),
            "covariance": self.covariance.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ClassParams":
        return cls(d["prior"], np.asarray(d["mean"], dtype=float), np.asarray(d["covariance"], dtype=float))


def log_density(x, params: ClassParams) -> float:
    """Log of the prior-weighted Gaussian density of a single point ``x``."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise InvalidInputError("x must be a single D-vector; use ClassParams.log_density for batches")
    return float(params.log_density(x[None, :])[0])
