"""Loading, imputing and standardizing domain-split tabular data."""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field, replace

import numpy as np
import pandas as pd

from .exceptions import IngestionError

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DomainDataset:
    """Labelled samples from one domain (a weather station, a hospital, ...).

    ``labels`` holds class indices into ``classes``, the original label
    values. ``notes`` collects preprocessing warnings such as imputed or
    constant columns.
    """

    name: str
    features: np.ndarray
    labels: np.ndarray
    feature_names: tuple
    classes: tuple
    notes: tuple = field(default=())

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "feature_names": list(self.feature_names),
            "classes": list(self.classes),
            "features": self.features.tolist(),
            "labels": self.labels.tolist(),
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DomainDataset":
        return cls(
            name=d["name"],
            features=np.asarray(d["features"], dtype=float).reshape(len(d["labels"]), len(d["feature_names"])),
            labels=np.asarray(d["labels"], dtype=int),
            feature_names=tuple(d["feature_names"]),
            classes=tuple(d["classes"]),
            notes=tuple(d.get("notes", ())),
        )


def load_csv(
    path,
    label_column: str,
    domain_column: str,
    *,
    categorical: str = "onehot",
    drop_columns=(),
    negative_label: str | None = None,
) -> list[DomainDataset]:
    """Read a CSV file and split it into one :class:`DomainDataset` per domain.

    Parameters
    ----------
    path : str or path-like
        UTF-8 CSV with a header row; empty cells are missing values.
    label_column, domain_column : str
        Column holding the class label and the domain identifier.
    categorical : {"onehot", "reject"}
        What to do with non-numeric feature columns.
    drop_columns : iterable of str
        Columns to ignore entirely (identifiers, dates, leaked targets).
    negative_label : str, optional
        If given, binarize the label as ``label != negative_label``.

    Domains are returned in order of first appearance and rows keep their
    file order within each domain. Missing numeric cells are imputed with
    the column mean of their own domain.
    """
    if categorical not in ("onehot", "reject"):
        raise ValueError(f"categorical must be 'onehot' or 'reject', got {categorical!r}")
    if not os.path.exists(path):
        raise IngestionError(f"no such file: {path}")
    try:
        frame = pd.read_csv(
            path,
            dtype={label_column: str, domain_column: str},
            float_precision="round_trip",
            encoding="utf-8",
        )
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as err:
        raise IngestionError(f"could not parse {path}: {err}") from None

    drop_columns = list(drop_columns)
    for col in [label_column, domain_column, *drop_columns]:
        if col not in frame.columns:
            raise IngestionError(f"unknown column {col!r} in {path}")

    incomplete = frame[label_column].isna() | frame[domain_column].isna()
    if incomplete.any():
        log.warning("dropping %d rows without a label or domain", int(incomplete.sum()))
        frame = frame.loc[~incomplete]
    if frame.empty:
        raise IngestionError(f"{path} has no labelled rows")

    feature_cols = [c for c in frame.columns if c not in {label_column, domain_column, *drop_columns}]
    if not feature_cols:
        raise IngestionError("no feature columns left")
    numeric = [c for c in feature_cols if pd.api.types.is_numeric_dtype(frame[c])]
    nominal = [c for c in feature_cols if c not in numeric]
    if nominal and categorical == "reject":
        raise IngestionError(f"non-numeric feature columns: {', '.join(nominal)}")
    features = frame[numeric].astype(float)
    if nominal:
        dummies = pd.get_dummies(frame[nominal], columns=nominal, prefix_sep="=", dtype=float)
        # Missing categories stay all-zero; impute them like numeric cells.
        for col in nominal:
            block = [c for c in dummies.columns if c.startswith(f"{col}=")]
            dummies.loc[frame[col].isna(), block] = np.nan
        features = pd.concat([features, dummies], axis=1)
    feature_names = tuple(str(c) for c in features.columns)

    raw_labels = frame[label_column].str.strip()
    if negative_label is not None:
        classes = (negative_label, f"not {negative_label}")
        label_idx = (raw_labels != negative_label).astype(int).to_numpy()
    else:
        classes = tuple(sorted(raw_labels.unique()))
        lookup = {c: i for i, c in enumerate(classes)}
        label_idx = raw_labels.map(lookup).to_numpy(dtype=int)

    domains = frame[domain_column].str.strip()
    out = []
    for name in pd.unique(domains):
        mask = (domains == name).to_numpy()
        block = features.loc[mask].to_numpy(dtype=float)
        if block.shape[0] == 0:
            raise IngestionError(f"domain {name!r} is empty")
        block, notes = _impute(block, feature_names)
        for note in notes:
            log.warning("%s: %s", name, note)
        out.append(DomainDataset(str(name), block, label_idx[mask], feature_names, classes, tuple(notes)))
    return out


def _impute(X, names):
    X = X.copy()
    notes = []
    missing = np.isnan(X)
    for j in np.flatnonzero(missing.any(axis=0)):
        col = X[:, j]
        if missing[:, j].all():
            col[:] = 0.0
            notes.append(f"column {names[j]!r} entirely missing, filled with 0")
        else:
            col[missing[:, j]] = col[~missing[:, j]].mean()
            notes.append(f"column {names[j]!r}: imputed {int(missing[:, j].sum())} missing values")
    return X, notes


def zscore(d: DomainDataset) -> DomainDataset:
    """Standardize every feature of one domain to mean 0 and (population) variance 1.

    Constant columns are only centered, leaving zeros, and a note is added.
    """
    X = d.features
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    constant = std <= 1e-12 * np.maximum(1.0, np.abs(mean))
    scale = np.where(constant, 1.0, std)
    Xs = (X - mean) / scale
    Xs[:, constant] = 0.0
    notes = list(d.notes)
    for j in np.flatnonzero(constant):
        msg = f"column {d.feature_names[j]!r} has zero variance; centered only"
        log.warning("%s: %s", d.name, msg)
        notes.append(msg)
    return replace(d, features=Xs, notes=tuple(notes))


def find_domain(datasets, name: str) -> DomainDataset:
    for d in datasets:
        if d.name == name:
            return d
    known = ", ".join(d.name for d in datasets)
    raise IngestionError(f"unknown domain {name!r} (available: {known})")


def save_csv(datasets, path, label_column: str = "label", domain_column: str = "domain"):
    """Write datasets back into a single CSV readable by :func:`load_csv`."""
    frames = []
    for d in datasets:
        f = pd.DataFrame(d.features, columns=list(d.feature_names))
        f[label_column] = [d.classes[i] for i in d.labels]
        f[domain_column] = d.name
        frames.append(f)
    pd.concat(frames, ignore_index=True).to_csv(path, index=False, float_format=None, lineterminator="\n")


def save_json(datasets, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump([d.to_dict() for d in datasets], fh)


def load_json(path) -> list[DomainDataset]:
    with open(path, encoding="utf-8") as fh:
        return [DomainDataset.from_dict(d) for d in json.load(fh)]
