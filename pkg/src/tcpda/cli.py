"""Command-line entry points: train-source, adapt, evaluate, matrix.

Log verbosity follows the ``TCP_LOG`` environment variable (e.g. ``DEBUG``).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys

import numpy as np

from . import da, data, metrics, tcp
from .exceptions import DivergedOptimizationError, TCPError

log = logging.getLogger("tcpda")

MODEL_KINDS = {"lda": True, "qda": False}


def _add_data_options(p, positional_columns=True):
    p.add_argument("data", help="CSV file with a header row")
    if positional_columns:
        p.add_argument("label_col")
        p.add_argument("domain_col")
    else:
        p.add_argument("--label-col", required=True)
        p.add_argument("--domain-col", required=True)
    p.add_argument("--drop-columns", default="", help="comma-separated columns to ignore")
    p.add_argument("--negative-label", default=None, help="binarize labels as value != NEGATIVE_LABEL")
    p.add_argument("--categorical", choices=("onehot", "reject"), default="onehot")
    p.add_argument("--no-zscore", action="store_true", help="skip per-domain z-scoring")


def _add_tcp_options(p):
    defaults = tcp.TCPConfig()
    p.add_argument("--max-iters", type=int, default=defaults.max_iters)
    p.add_argument("--rate", type=float, default=defaults.base_rate, help="per-sample base learning rate")
    p.add_argument("--tol", type=float, default=defaults.tolerance)
    p.add_argument("--q-init", choices=("source_posterior", "uniform"), default=defaults.q_init)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tcpda", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train-source", help="fit LDA/QDA on one labelled domain")
    _add_data_options(p)
    p.add_argument("--domain", required=True)
    p.add_argument("--model", choices=sorted(MODEL_KINDS), default="lda")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train_source)

    p = sub.add_parser("adapt", help="adapt a source model to an unlabelled target domain")
    p.add_argument("model", help="model JSON written by train-source")
    _add_data_options(p, positional_columns=False)
    p.add_argument("--target-domain", required=True)
    _add_tcp_options(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_adapt)

    p = sub.add_parser("evaluate", help="score source and TCP models on a labelled target domain")
    p.add_argument("source_model")
    p.add_argument("tcp_result")
    _add_data_options(p, positional_columns=False)
    p.add_argument("--target-domain", required=True)
    p.add_argument("--positive-class", type=int, default=1)
    p.add_argument("--out", default=None, help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("matrix", help="all ordered (source, target) domain pairs")
    _add_data_options(p)
    p.add_argument("--models", default="lda,qda", help="comma-separated subset of lda,qda")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    _add_tcp_options(p)
    p.add_argument("--positive-class", type=int, default=1)
    p.add_argument("--out-csv", required=True)
    p.set_defaults(func=cmd_matrix)
    return parser


def _load_domains(args):
    drop = [c for c in args.drop_columns.split(",") if c]
    datasets = data.load_csv(
        args.data,
        args.label_col,
        args.domain_col,
        categorical=args.categorical,
        drop_columns=drop,
        negative_label=args.negative_label,
    )
    if not args.no_zscore:
        datasets = [data.zscore(d) for d in datasets]
    return datasets


def _tcp_config(args, lam) -> tcp.TCPConfig:
    return tcp.TCPConfig(lam=lam, max_iters=args.max_iters, base_rate=args.rate, tolerance=args.tol, q_init=args.q_init)


def _write_json(doc, path):
    text = json.dumps(doc, indent=1) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _check_features(doc, dataset):
    expected = doc.get("feature_names")
    if expected is not None and list(expected) != list(dataset.feature_names):
        raise TCPError(f"model was trained on features {expected}, data has {list(dataset.feature_names)}")


def cmd_train_source(args) -> int:
    d = data.find_domain(_load_domains(args), args.domain)
    params = da.estimate(d.features, da.one_hot(d.labels, d.n_classes), args.lam, MODEL_KINDS[args.model])
    doc = params.to_dict()
    doc.update(domain=d.name, model=args.model, feature_names=list(d.feature_names), class_labels=list(d.classes))
    _write_json(doc, args.out)
    return 0


def cmd_adapt(args) -> int:
    doc = _read_json(args.model)
    source = da.DAParams.from_dict(doc)
    d = data.find_domain(_load_domains(args), args.target_domain)
    _check_features(doc, d)
    config = _tcp_config(args, source.regularization)
    try:
        result = tcp.fit(source, d.features, config)
    except DivergedOptimizationError as err:
        log.error("%s", err)
        _write_json({"error": str(err), "iteration": err.iteration, "trace": err.trace}, args.out)
        return 2
    out = result.to_dict()
    out.update(domain=d.name, feature_names=list(d.feature_names), class_labels=doc.get("class_labels"))
    _write_json(out, args.out)
    return 0


def cmd_evaluate(args) -> int:
    source_doc = _read_json(args.source_model)
    source = da.DAParams.from_dict(source_doc)
    result = tcp.TCPResult.from_dict(_read_json(args.tcp_result))
    d = data.find_domain(_load_domains(args), args.target_domain)
    _check_features(source_doc, d)
    reports = {
        name: metrics.evaluate(model, source, result.params, d.features, d.labels, args.positive_class).to_dict()
        for name, model in (("source", source), ("tcp", result.params))
    }
    _write_json(reports, args.out)
    return 0


def run_matrix(datasets, kinds, lam, config, positive_class=1):
    """Evaluate every ordered domain pair; returns ``(rows, n_errors)`` sorted by (source, target, classifier)."""
    rows = []
    errors = 0
    for s in datasets:
        for t in datasets:
            if s is t:
                continue
            for kind in kinds:
                label = kind.upper()
                names = (f"source-{label}", f"TCP-{label}")
                try:
                    source = da.estimate(s.features, da.one_hot(s.labels, s.n_classes), lam, MODEL_KINDS[kind])
                    result = tcp.fit(source, t.features, config)
                    pair_rows = [
                        metrics.evaluate(model, source, result.params, t.features, t.labels, positive_class).csv_row(
                            s.name, t.name, name
                        )
                        for name, model in zip(names, (source, result.params))
                    ]
                    rows.extend(pair_rows)
                except (TCPError, np.linalg.LinAlgError) as err:
                    errors += 1
                    log.error("pair %s -> %s (%s) failed: %s", s.name, t.name, label, err)
                    rows.extend([s.name, t.name, name] + ["nan"] * 5 for name in names)
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    return rows, errors


def cmd_matrix(args) -> int:
    kinds = [k.strip().lower() for k in args.models.split(",") if k.strip()]
    unknown = [k for k in kinds if k not in MODEL_KINDS]
    if unknown or not kinds:
        raise TCPError(f"unknown model kinds: {unknown or args.models!r}")
    datasets = _load_domains(args)
    if len(datasets) < 2:
        raise TCPError("the matrix needs at least two domains")
    rows, errors = run_matrix(datasets, kinds, args.lam, _tcp_config(args, args.lam), args.positive_class)
    with open(args.out_csv, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(metrics.REPORT_COLUMNS)
        writer.writerows(rows)
    return 1 if errors else 0


def main(argv=None) -> int:
    level = getattr(logging, os.environ.get("TCP_LOG", "WARNING").upper(), logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (TCPError, OSError) as err:
        print(f"tcpda {args.command}: error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
