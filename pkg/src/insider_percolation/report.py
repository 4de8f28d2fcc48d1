"""CSV and JSON renderings of results.

CSV files start with ``#`` lines echoing the run config, then a header row.
Floats are written with ``repr`` (shortest round-trip form), so identical
results always produce identical bytes.  JSON mirrors the CSV columns as
arrays; non-finite values become ``null``.
"""

from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

SWEEP_COLUMNS = ("N", "l_normal_sim", "l_threat_sim", "l_threat_exact", "l_threat_percolation", "ratio")
THRESHOLD_COLUMNS = (
    "geometry",
    "z",
    "reference_pc",
    "estimated_pc",
    "half_width",
    "lattice_size",
    "n_sites",
    "trials",
)
SPACING_COLUMNS = ("L", "cdf_empirical", "cdf_exponential")


def cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v) if math.isfinite(v) else None
    return v


def to_csv(comment_lines, columns, rows) -> str:
    buf = io.StringIO()
    for line in comment_lines:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([cell(v) for v in row])
    return buf.getvalue()


def to_json(doc: dict) -> str:
    return json.dumps(_jsonable(doc), indent=2, allow_nan=False) + "\n"


def sweep_table(result):
    cols = (
        result.n,
        result.l_normal_sim,
        result.l_threat_sim,
        result.l_threat_exact,
        result.l_threat_percolation,
        result.ratio,
    )
    return SWEEP_COLUMNS, list(zip(*cols))


def sweep_document(result, config: dict) -> dict:
    _, rows = sweep_table(result)
    doc = {"config": config}
    for i, name in enumerate(SWEEP_COLUMNS):
        doc[name] = [r[i] for r in rows]
    return doc


def threshold_table(estimates):
    rows = [tuple(e.to_dict()[c] for c in THRESHOLD_COLUMNS) for e in estimates]
    return THRESHOLD_COLUMNS, rows


def threshold_document(estimates, config: dict) -> dict:
    return {"config": config, "thresholds": [e.to_dict() for e in estimates]}


def spacing_table(hist, points: int):
    x, emp = hist.grid(points)
    model = -np.expm1(-(hist.n_rules + 1) * x)
    return SPACING_COLUMNS, list(zip(x, emp, model))
