import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import trapezoid

from tcpda import da, metrics, synthetic, tcp
from tcpda.exceptions import InvalidInputError, UndefinedMetricError

from oracles import auc_pairs


@pytest.mark.parametrize(
    "scores, labels, expected",
    [((0.1, 0.9), (0, 1), 1.0), ((0.5, 0.5), (0, 1), 0.5), ((0.8, 0.6, 0.4, 0.2), (1, 0, 1, 0), 0.75)],
)
def test_auc_examples(scores, labels, expected):
    assert metrics.auc(scores, labels) == expected


def test_auc_single_class():
    with pytest.raises(UndefinedMetricError):
        metrics.auc([0.1, 0.2], [1, 1])


def test_auc_bad_input():
    with pytest.raises(InvalidInputError):
        metrics.auc([0.1, 0.2], [0, 2])
    with pytest.raises(InvalidInputError):
        metrics.auc([0.1, 0.2, 0.3], [0, 1])


def test_auc_matches_pair_counting(rng):
    for _ in range(100):
        n = int(rng.integers(2, 51))
        labels = rng.integers(0, 2, n)
        labels[:2] = (0, 1)
        # Coarse rounding forces plenty of ties.
        scores = np.round(rng.standard_normal(n), int(rng.integers(0, 3)))
        assert abs(metrics.auc(scores, labels) - auc_pairs(scores, labels)) <= 1e-12


def test_auc_equals_trapezoidal_roc(rng):
    scores = np.round(rng.standard_normal(60), 1)
    labels = rng.integers(0, 2, 60)
    thresholds = np.concatenate([[np.inf], np.unique(scores)[::-1]])
    tpr = [np.mean(scores[labels == 1] >= t) for t in thresholds]
    fpr = [np.mean(scores[labels == 0] >= t) for t in thresholds]
    assert metrics.auc(scores, labels) == pytest.approx(trapezoid(tpr, fpr), abs=1e-12)


labelled_scores = st.integers(2, 40).flatmap(
    lambda n: st.tuples(
        st.lists(st.integers(-2000, 2000), min_size=n, max_size=n, unique=True),
        st.lists(st.integers(0, 1), min_size=n, max_size=n).filter(lambda y: 0 < sum(y) < len(y)),
    )
)


@settings(max_examples=200, deadline=None)
@given(labelled_scores)
def test_auc_monotone_invariance_and_reversal(data):
    # Distinct scores on a 1/40 grid stay distinct under the transform below.
    scores, labels = np.array(data[0]) / 40.0, np.array(data[1])
    a = metrics.auc(scores, labels)
    assert metrics.auc(np.arctan(scores) * 3 + 1, labels) == pytest.approx(a, abs=1e-12)
    assert metrics.auc(-scores, labels) == pytest.approx(1 - a, abs=1e-12)


@pytest.mark.parametrize(
    "pred, labels, expected", [([0, 1, 1], [0, 1, 1], 0.0), ([1, 0], [0, 1], 1.0), ([0, 1, 0, 1], [0, 1, 1, 0], 0.5)]
)
def test_error_rate(pred, labels, expected):
    assert metrics.error_rate(pred, labels) == expected


def test_error_rate_length_mismatch():
    with pytest.raises(InvalidInputError):
        metrics.error_rate([0, 1], [0])


def test_one_vs_rest(rng):
    labels = np.repeat([0, 1, 2], 10)
    proba = da.one_hot(labels, 3) * 0.5 + rng.random((30, 3)) * 0.1
    assert np.allclose(metrics.one_vs_rest_auc(proba, labels), 1.0)


@pytest.fixture
def fitted(rng):
    X, y, Z, u = synthetic.shifted_pair(rng, D=2, m=120)
    source = da.estimate(X, da.one_hot(y, 2), 1.0, True)
    result = tcp.fit(source, Z)
    return source, result, Z, u


def test_evaluate_report(fitted):
    source, result, Z, u = fitted
    report = metrics.evaluate(result.params, source, result.params, Z, u)
    assert report.contrast == report.target_risk_tcp - report.target_risk_source
    assert report.contrast <= 1e-8
    assert 0 <= report.auc <= 1 and 0 <= report.error_rate <= 1
    proba = da.posterior(result.params, Z)[:, 1]
    assert report.auc == metrics.auc(proba, u)
    assert report.error_rate == metrics.error_rate(da.predict(result.params, Z), u)


def test_positive_class_flip(fitted):
    source, _, Z, u = fitted
    a = metrics.evaluate(source, source, source, Z, u, positive_class=1).auc
    b = metrics.evaluate(source, source, source, Z, u, positive_class=0).auc
    assert a == pytest.approx(b, abs=1e-12)


def test_report_serialization(fitted):
    source, result, Z, u = fitted
    report = metrics.evaluate(source, source, result.params, Z, u)
    doc = json.loads(report.to_json())
    assert set(doc) == {"auc", "error_rate", "target_risk_source", "target_risk_tcp", "contrast"}
    row = report.csv_row("a", "b", "source-LDA")
    assert len(row) == len(metrics.REPORT_COLUMNS)
    assert float(row[7]) == report.contrast
