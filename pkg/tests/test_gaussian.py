import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.stats import ortho_group

from tcpda.exceptions import ConfigurationError, EstimationError, InvalidInputError
from tcpda.gaussian import ClassParams, log_density, regularize_covariance

from conftest import random_spd


def scalar_log_density(x, prior, mean, cov):
    """Term-by-term evaluation with plain Python loops (2x2 only)."""
    (a, b), (c, d) = cov
    det = a * d - b * c
    inv = [[d / det, -b / det], [-c / det, a / det]]
    diff = [x[0] - mean[0], x[1] - mean[1]]
    quad_form = sum(diff[i] * inv[i][j] * diff[j] for i in range(2) for j in range(2))
    return math.log(prior) - math.log(2 * math.pi) - 0.5 * math.log(det) - 0.5 * quad_form


def test_standard_normal_at_mean():
    p = ClassParams(1.0, [0.0], [[1.0]])
    assert log_density([0.0], p) == pytest.approx(-0.918939, abs=1e-6)


def test_prior_scales_density():
    p = ClassParams(0.5, [0.0], [[1.0]])
    assert log_density([0.0], p) == pytest.approx(-1.612086, abs=1e-6)


def test_two_dimensional_matches_scalar_formula():
    p = ClassParams(1.0, [1.0, 2.0], np.eye(2))
    expected = scalar_log_density([2.0, 2.0], 1.0, [1.0, 2.0], [[1.0, 0.0], [0.0, 1.0]])
    assert log_density([2.0, 2.0], p) == pytest.approx(expected, abs=1e-12)


def test_random_2d_matches_scalar_formula(rng):
    for _ in range(20):
        cov = random_spd(rng, 2)
        mean = rng.standard_normal(2)
        x = rng.standard_normal(2)
        prior = rng.uniform(0.05, 1.0)
        p = ClassParams(prior, mean, cov)
        assert log_density(x, p) == pytest.approx(scalar_log_density(x, prior, mean, cov.tolist()), abs=1e-10)


def test_batched_equals_pointwise(rng):
    p = ClassParams(0.3, rng.standard_normal(3), random_spd(rng, 3))
    X = rng.standard_normal((7, 3))
    batch = p.log_density(X)
    assert np.allclose(batch, [log_density(x, p) for x in X], atol=1e-13)


@pytest.mark.parametrize("prior,mean,var", [(1.0, 0.0, 1.0), (0.3, 1.5, 0.2), (0.7, -2.0, 4.0)])
def test_density_integrates_to_prior(prior, mean, var):
    p = ClassParams(prior, [mean], [[var]])
    total, _ = quad(lambda x: math.exp(log_density([x], p)), -np.inf, np.inf)
    assert total == pytest.approx(prior, abs=1e-4)


def test_rotation_invariance(rng):
    D = 4
    p = ClassParams(0.4, rng.standard_normal(D), random_spd(rng, D))
    R = ortho_group.rvs(D, random_state=1)
    rotated = ClassParams(0.4, R @ p.mean, R @ p.covariance @ R.T)
    x = rng.standard_normal(D)
    assert log_density(R @ x, rotated) == pytest.approx(log_density(x, p), abs=1e-8)


def test_singular_covariance_raises():
    p = ClassParams(1.0, [0.0, 0.0], [[1.0, 1.0], [1.0, 1.0]])
    with pytest.raises(EstimationError):
        log_density([0.0, 0.0], p)


def test_tiny_determinant_raises():
    p = ClassParams(1.0, np.zeros(3), np.eye(3) * 1e-120)
    with pytest.raises(EstimationError):
        log_density(np.zeros(3), p)


def test_zero_prior_stays_finite():
    p = ClassParams(0.0, [0.0], [[1.0]])
    assert np.isfinite(log_density([0.0], p))


def test_invalid_params():
    with pytest.raises(InvalidInputError):
        ClassParams(1.2, [0.0], [[1.0]])
    with pytest.raises(InvalidInputError):
        ClassParams(0.5, [0.0, 0.0], [[1.0, 0.5], [0.0, 1.0]])
    with pytest.raises(InvalidInputError):
        ClassParams(0.5, [0.0, 1.0], [[1.0]])


def test_params_are_immutable_copies():
    mean = np.zeros(2)
    p = ClassParams(0.5, mean, np.eye(2))
    mean[0] = 5.0
    assert p.mean[0] == 0.0
    with pytest.raises(ValueError):
        p.mean[0] = 1.0


def test_regularize_identity():
    assert np.allclose(regularize_covariance(np.eye(2), 1.0), 2 * np.eye(2))


def test_regularize_clips_negative_eigenvalue():
    out = regularize_covariance(np.diag([3.0, -2.0]), 0.5)
    assert np.allclose(out, np.diag([3.5, 0.5]), atol=1e-12)


def test_regularize_random_eigenvalue_floor(rng):
    A = rng.standard_normal((4, 4))
    S = A + A.T
    out = regularize_covariance(S, 1.0)
    assert np.linalg.eigvalsh(out).min() >= 1.0 - 1e-8
    assert np.allclose(out, out.T, atol=1e-12)


def test_regularize_leaves_psd_input_alone(rng):
    S = random_spd(rng, 5)
    assert np.allclose(regularize_covariance(S, 0.0), S, atol=1e-12)


def test_regularize_rejects_negative_lambda():
    with pytest.raises(ConfigurationError):
        regularize_covariance(np.eye(2), -0.1)


def test_regularize_stacked_matches_single(rng):
    stack = np.stack([random_spd(rng, 3) - 0.5 * np.eye(3) for _ in range(4)])
    out = regularize_covariance(stack, 0.2)
    for S, R in zip(stack, out):
        assert np.allclose(regularize_covariance(S, 0.2), R, atol=1e-12)


symmetric_matrices = st.integers(1, 5).flatmap(
    lambda D: st.lists(st.floats(-10, 10), min_size=D * D, max_size=D * D).map(
        lambda v: np.array(v).reshape(int(round(len(v) ** 0.5)), -1)
    )
)


@settings(max_examples=100, deadline=None)
@given(S=symmetric_matrices, lam=st.floats(0.0, 5.0))
def test_regularize_idempotent_up_to_shift(S, lam):
    S = S + S.T
    once = regularize_covariance(S, lam)
    assert np.allclose(regularize_covariance(once, 0.0), once, atol=1e-10 * max(1.0, np.abs(once).max()))
    assert np.linalg.eigvalsh(once).min() >= lam - 1e-8 * max(1.0, np.abs(S).max())
