"""CSV and JSON emission of frontiers and result records.

Floats are written with 17 significant digits so every double survives a
round trip. Infinite capacities are written as the string ``"unbounded"``
and undefined values as JSON ``null`` / an empty CSV field.
"""

import csv
import io
import json
import math

import numpy as np

from . import __version__
from .regions import Frontier

UNBOUNDED = "unbounded"
CSV_COLUMNS = ("rate1", "rate2", "bound1", "bound2", "bound3")


def fmt(x):
    """17-significant-digit decimal, ``unbounded`` for +inf, empty for NaN/None."""
    if x is None:
        return ""
    x = float(x)
    if math.isnan(x):
        return ""
    if math.isinf(x):
        return UNBOUNDED if x > 0 else "-" + UNBOUNDED
    return format(x, ".17g")


def _json_value(x):
    if x is None:
        return None
    if isinstance(x, (bool, str)):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return None
        if math.isinf(x):
            return UNBOUNDED if x > 0 else "-" + UNBOUNDED
        return float(format(x, ".17g"))
    if isinstance(x, dict):
        return {k: _json_value(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_json_value(v) for v in x]
    return x


def _parse_float(v):
    if v is None or v == "":
        return math.nan
    if v == UNBOUNDED:
        return math.inf
    if v == "-" + UNBOUNDED:
        return -math.inf
    return float(v)


def frontier_to_csv(front):
    """CSV text: a comment line naming the region and rates, then a header row."""
    buf = io.StringIO()
    buf.write(f"# region={front.region} rate1={front.labels[0]} rate2={front.labels[1]}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow((front.param_name,) + CSV_COLUMNS)
    for p, r, b in zip(front.param, front.rates, front.bounds):
        writer.writerow([fmt(p), fmt(r[0]), fmt(r[1]), fmt(b[0]), fmt(b[1]), fmt(b[2])])
    return buf.getvalue()


def frontier_from_csv(text):
    lines = text.splitlines()
    header = dict(kv.split("=", 1) for kv in lines[0].lstrip("# ").split())
    reader = csv.reader(lines[1:])
    cols = next(reader)
    rows = [[_parse_float(v) for v in row] for row in reader if row]
    arr = np.array(rows, dtype=float).reshape(-1, 6)
    return Frontier(
        header["region"],
        (header["rate1"], header["rate2"]),
        arr[:, 1:3],
        arr[:, 0],
        arr[:, 3:6],
        param_name=cols[0],
    )


def frontier_to_dict(front, **metadata):
    records = [
        {
            front.param_name: p,
            "rate1": r[0],
            "rate2": r[1],
            "bound1": b[0],
            "bound2": b[1],
            "bound3": b[2],
        }
        for p, r, b in zip(front.param, front.rates, front.bounds)
    ]
    meta = dict(front.meta)
    meta.update(metadata)
    meta["version"] = __version__
    return _json_value(
        {
            "region": front.region,
            "labels": list(front.labels),
            "param_name": front.param_name,
            "metadata": meta,
            "records": records,
        }
    )


def frontier_to_json(front, **metadata):
    return json.dumps(frontier_to_dict(front, **metadata), indent=2)


def frontier_from_dict(doc):
    pname = doc.get("param_name", "lambda")
    recs = doc["records"]
    param = [_parse_float(r.get(pname)) for r in recs]
    rates = [[_parse_float(r["rate1"]), _parse_float(r["rate2"])] for r in recs]
    bounds = [[_parse_float(r.get(f"bound{i}")) for i in (1, 2, 3)] for r in recs]
    meta = {k: v for k, v in doc.get("metadata", {}).items() if k != "version"}
    return Frontier(doc["region"], tuple(doc["labels"]), rates, param, bounds, param_name=pname, meta=meta)


def frontier_from_json(text):
    return frontier_from_dict(json.loads(text))


def load_frontier(path):
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return frontier_from_json(text)
    return frontier_from_csv(text)


def records_to_csv(records):
    """CSV for a flat list of dicts sharing the same keys."""
    buf = io.StringIO()
    if not records:
        return ""
    keys = list(records[0])
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(keys)
    for rec in records:
        writer.writerow([fmt(v) if isinstance(v, (float, int, np.floating, type(None))) and not isinstance(v, bool) else v for v in (rec[k] for k in keys)])
    return buf.getvalue()


def to_json(obj):
    return json.dumps(_json_value(obj), indent=2)
