import numpy as np
import pytest

from tcpda import tcp

# Every TCP fit anywhere in the suite must end with a non-positive TCP risk.
NONPOS_TOL = 1e-8


@pytest.fixture(autouse=True)
def _check_every_fit(monkeypatch):
    original = tcp.fit

    def checked_fit(*args, **kwargs):
        result = original(*args, **kwargs)
        assert result.tcp_risk <= NONPOS_TOL, f"final TCP risk {result.tcp_risk} > 0"
        return result

    monkeypatch.setattr(tcp, "fit", checked_fit)


@pytest.fixture
def rng():
    return np.random.default_rng(20180829)


def random_spd(rng, D, floor=0.3):
    A = rng.standard_normal((D, D))
    return A @ A.T / D + floor * np.eye(D)


def random_label_matrix(rng, m, K):
    return rng.dirichlet(np.ones(K), size=m)
