"""Evaluation metrics: ROC AUC, error rate and risk contrasts."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np
from scipy.stats import rankdata

from . import da
from .exceptions import InvalidInputError, UndefinedMetricError

REPORT_COLUMNS = ("source", "target", "classifier", "auc", "error_rate", "risk_source", "risk_tcp", "contrast")


def auc(scores, labels) -> float:
    """Area under the ROC curve via the Mann-Whitney U statistic.

    Equals the fraction of (positive, negative) pairs in which the positive
    sample scores higher, with ties counting one half.
    """
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    if scores.shape != labels.shape or scores.ndim != 1:
        raise InvalidInputError("scores and labels must be vectors of equal length")
    if not np.all(np.isin(labels, (0, 1))):
        raise InvalidInputError("labels must be 0 or 1")
    pos = labels == 1
    n_pos = int(pos.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise UndefinedMetricError("AUC needs both a positive and a negative sample")
    ranks = rankdata(scores)  # average ranks for ties
    u_stat = ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u_stat / (n_pos * n_neg))


def one_vs_rest_auc(proba, labels) -> np.ndarray:
    """Per-class AUC of ``proba[:, k]`` for class ``k`` against all others."""
    proba = np.asarray(proba, dtype=float)
    labels = np.asarray(labels)
    return np.array([auc(proba[:, k], (labels == k).astype(int)) for k in range(proba.shape[1])])


def error_rate(predictions, labels) -> float:
    predictions = np.asarray(predictions)
    labels = np.asarray(labels)
    if predictions.shape != labels.shape:
        raise InvalidInputError(f"length mismatch: {predictions.shape} vs {labels.shape}")
    if predictions.size == 0:
        raise InvalidInputError("cannot compute an error rate on zero samples")
    return float(np.mean(predictions != labels))


@dataclass(frozen=True)
class EvalReport:
    """Target-domain scores of one classifier, plus the risk contrast of its TCP pair.

    ``target_risk_source`` and ``target_risk_tcp`` are regularized empirical
    risks on the true target labels; ``contrast`` is their difference.
    """

    auc: float
    error_rate: float
    target_risk_source: float
    target_risk_tcp: float
    contrast: float

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    def csv_row(self, source: str, target: str, classifier: str) -> list:
        return [
            source,
            target,
            classifier,
            repr(self.auc),
            repr(self.error_rate),
            repr(self.target_risk_source),
            repr(self.target_risk_tcp),
            repr(self.contrast),
        ]


def classifier_auc(params: da.DAParams, X, labels, positive_class=1) -> float:
    """Binary AUC of the ``positive_class`` posterior; macro one-vs-rest AUC when K > 2."""
    proba = da.posterior(params, X)
    labels = np.asarray(labels)
    if params.n_classes == 2:
        return auc(proba[:, positive_class], (labels == positive_class).astype(int))
    return float(np.mean(one_vs_rest_auc(proba, labels)))


def evaluate(
    classifier: da.DAParams,
    source: da.DAParams,
    tcp_params: da.DAParams,
    X,
    labels,
    positive_class: int = 1,
) -> EvalReport:
    """Score ``classifier`` on labelled target data and record the source/TCP risk contrast."""
    labels = np.asarray(labels)
    U = da.one_hot(labels, classifier.n_classes)
    risk_s = da.regularized_risk(source, X, U)
    risk_t = da.regularized_risk(tcp_params, X, U)
    return EvalReport(
        auc=classifier_auc(classifier, X, labels, positive_class),
        error_rate=error_rate(da.predict(classifier, X), labels),
        target_risk_source=risk_s,
        target_risk_tcp=risk_t,
        contrast=risk_t - risk_s,
    )
