"""JSON and CSV input/output for matrix sets and computed sequences."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Union

from .engine import MirsResult
from .errors import ConfigError
from .linalg import MatrixSet


def matrix_set_to_dict(mset: MatrixSet) -> dict:
    return {
        "dim": mset.dim,
        "claimed_jsr": mset.claimed_jsr,
        "matrices": [
            {"name": label, "rows": [[float(x) for x in row] for row in m]}
            for label, m in zip(mset.labels, mset)
        ],
    }


def matrix_set_from_dict(doc: dict, name: str = "set") -> MatrixSet:
    try:
        mats = doc["matrices"]
        dim = int(doc["dim"])
        members = [m["rows"] for m in mats]
        labels = [str(m.get("name", f"A{i}")) for i, m in enumerate(mats)]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"matrix set JSON is missing or has malformed fields: {exc}") from exc
    mset = MatrixSet.of(members, labels, doc.get("claimed_jsr"), name)
    if mset.dim != dim:
        raise ConfigError(f"declared dim {dim} does not match matrices of size {mset.dim}")
    return mset


def write_matrix_set(mset: MatrixSet, path: Union[str, Path]):
    Path(path).write_text(json.dumps(matrix_set_to_dict(mset), indent=2) + "\n")


def read_matrix_set(path: Union[str, Path]) -> MatrixSet:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read matrix set {path}: {exc}") from exc
    return matrix_set_from_dict(doc, path.stem)


def result_csv(result: MirsResult) -> str:
    """``n,a_n,certificate,witness`` rows; witnesses as space-separated indices."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "a_n", "certificate", "witness"])
    for n, (v, c, wit) in enumerate(zip(result.values, result.certificates, result.witnesses), 1):
        cert = c.kind if c.kind != "interval" else f"interval[{c.lo:.17g};{c.hi:.17g}]"
        w.writerow([n, f"{v:.17g}", cert, " ".join(map(str, wit))])
    return buf.getvalue()


def result_metadata(result: MirsResult) -> dict:
    return {
        "set_label": result.set_label,
        "horizon": result.horizon,
        "exact_prefix": result.exact_prefix(),
        "method": result.method,
    }


def read_sequence_csv(path: Union[str, Path]):
    """Values ``a_1..a_N`` and certificate kinds from a CSV written by :func:`result_csv`."""
    try:
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        values = [float(r["a_n"]) for r in rows]
        certs = [r.get("certificate", "exact") for r in rows]
    except (OSError, KeyError, ValueError) as exc:
        raise ConfigError(f"cannot read sequence CSV {path}: {exc}") from exc
    return values, certs
