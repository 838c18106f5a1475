"""Combine the four UCI heart-disease files into one CSV for ``tcpda``.

Usage: python3 demos/prepare_heart.py DIR OUT.csv

DIR must hold processed.cleveland.data, processed.hungarian.data,
processed.switzerland.data and processed.va.data. Missing values (``?``)
become empty cells, and a ``hospital`` column names the domain.
"""

import sys
from pathlib import Path

import pandas as pd

COLUMNS = ["age", "sex", "cp", "trestbps", "chol", "fbs", "restecg", "thalach", "exang", "oldpeak", "slope", "ca", "thal", "num"]
FILES = {
    "Ohio": "processed.cleveland.data",
    "Hungary": "processed.hungarian.data",
    "Switzerland": "processed.switzerland.data",
    "California": "processed.va.data",
}


def main(src, out):
    frames = []
    for hospital, name in FILES.items():
        f = pd.read_csv(Path(src) / name, header=None, names=COLUMNS, na_values="?")
        f["num"] = f["num"].astype(int)
        f["hospital"] = hospital
        frames.append(f)
    pd.concat(frames, ignore_index=True).to_csv(out, index=False)


if __name__ == "__main__":
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    main(sys.argv[1], sys.argv[2])
