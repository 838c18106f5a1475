"""
Every source/target pair from the command line
==============================================

Writes a small three-domain CSV, then runs the ``matrix`` subcommand. It
trains on each domain, adapts to each of the others and reports AUC,
error rate and the target-risk contrast. Negative contrast means the
adapted model beats the source model on the target's true labels.
"""

import csv
import sys
import tempfile
from pathlib import Path

import numpy as np

from tcpda import cli, synthetic

rng = np.random.default_rng(3)
work = Path(tempfile.mkdtemp())
synthetic.domain_frame(rng, names=("coast", "valley", "plateau"), n=150, D=4).to_csv(work / "stations.csv", index=False)

# Same as: tcpda matrix stations.csv label domain --out-csv report.csv
code = cli.main(["matrix", str(work / "stations.csv"), "label", "domain", "--out-csv", str(work / "report.csv")])
if code:
    sys.exit(code)

with open(work / "report.csv", newline="") as fh:
    rows = list(csv.DictReader(fh))
print(f"{'source':>8} {'target':>8} {'classifier':>11} {'auc':>6} {'contrast':>10}")
for r in rows:
    print(f"{r['source']:>8} {r['target']:>8} {r['classifier']:>11} {float(r['auc']):6.3f} {float(r['contrast']):10.5f}")
