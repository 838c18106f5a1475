"""Synthetic Gaussian domain-shift problems for tests and demos."""

import numpy as np
import pandas as pd


def gaussian_classes(rng, n, means, cov=None, priors=None):
    """Draw ``n`` labelled samples from a Gaussian mixture, one component per class."""
    means = np.atleast_2d(np.asarray(means, dtype=float))
    K, D = means.shape
    priors = np.full(K, 1.0 / K) if priors is None else np.asarray(priors, dtype=float)
    cov = np.eye(D) if cov is None else np.asarray(cov, dtype=float)
    labels = rng.choice(K, size=n, p=priors)
    chol = np.linalg.cholesky(cov)
    X = means[labels] + rng.standard_normal((n, D)) @ chol.T
    return X, labels


def shifted_pair(rng, D=2, n=200, m=150, separation=1.5, shift_scale=1.0):
    """Binary source/target problem whose target class means are shifted.

    Returns ``(X, y, Z, u)``: labelled source samples and the target samples
    with their (normally hidden) labels.
    """
    means = np.stack([np.zeros(D), np.full(D, separation)])
    X, y = gaussian_classes(rng, n, means)
    shift = shift_scale * rng.standard_normal(D)
    Z, u = gaussian_classes(rng, m, means + shift)
    return X, y, Z, u


def domain_frame(rng, names=("north", "south", "east"), n=120, D=3, separation=1.5, shift_scale=1.0):
    """Tabular multi-domain data set in the layout expected by :func:`tcpda.data.load_csv`."""
    base = np.stack([np.zeros(D), np.full(D, separation)])
    frames = []
    for name in names:
        scale = 1.0 + 0.3 * rng.random(D)
        means = base + shift_scale * rng.standard_normal(D)
        X, y = gaussian_classes(rng, n, means, cov=np.diag(scale**2))
        f = pd.DataFrame(X, columns=[f"x{i}" for i in range(D)])
        f["label"] = np.where(y == 1, "yes", "no")
        f["domain"] = name
        frames.append(f)
    return pd.concat(frames, ignore_index=True)
