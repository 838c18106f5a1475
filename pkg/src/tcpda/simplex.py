"""Euclidean projection onto the probability simplex."""

import numpy as np

from .exceptions import InvalidInputError


def project_rows(V) -> np.ndarray:
    """Project every row of ``V`` onto ``{b : b >= 0, sum(b) = 1}``.

    Sort-based thresholding: with ``u`` the row sorted in decreasing order,
    ``rho`` is the largest index with ``u_rho - (cumsum(u)_rho - 1) / rho > 0``
    and the projection is ``max(v - tau, 0)`` for
    ``tau = (cumsum(u)_rho - 1) / rho``.
    """
    V = np.asarray(V, dtype=float)
    if V.ndim != 2 or V.shape[1] < 1:
        raise InvalidInputError(f"expected an (m, K) matrix with K >= 1, got shape {V.shape}")
    if not np.all(np.isfinite(V)):
        raise InvalidInputError("cannot project non-finite values onto the simplex")
    m, K = V.shape
    U = -np.sort(-V, axis=1)
    css = np.cumsum(U, axis=1) - 1.0
    ranks = np.arange(1, K + 1)
    active = U - css / ranks > 0
    # Index of the last True in each row; the first entry is always active.
    rho = K - np.argmax(active[:, ::-1], axis=1)
    tau = css[np.arange(m), rho - 1] / rho
    return np.maximum(V - tau[:, None], 0.0)


def project(v) -> np.ndarray:
    """Project a single vector onto the probability simplex."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise InvalidInputError("project expects a 1-d vector")
    return project_rows(v[None, :])[0]
