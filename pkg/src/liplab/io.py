"""Reading and writing space, field, matrix and report files.

Floats are written with 17 significant digits so that every value reads back
bit-for-bit. Files are written to a temporary sibling and renamed into place.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np
from scipy.sparse.csgraph import shortest_path

from .errors import IdMismatch
from .metric import MetricSpace, edge_graph


def fmt_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    s = format(x, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def _scalar(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if v is None:
        return "null"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return fmt_float(v)
    return json.dumps(v)


def dumps(obj, indent: int = 0) -> str:
    """JSON text with full-precision floats; lists of scalars stay on one line."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            return "[" + ", ".join(_scalar(v) for v in seq) + "]"
        items = [inner + dumps(v, indent + 1) for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return _scalar(obj)


def write_atomic(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- space files -------------------------------------------------------------

def space_to_dict(space: MetricSpace) -> dict:
    points = []
    for i in range(space.n):
        p = {"id": i, "mass": float(space.mass[i])}
        if space.labels is not None:
            p["label"] = space.labels[i]
        points.append(p)
    return {
        "points": points,
        "edges": [{"u": int(u), "v": int(v)} for u, v in space.edges],
        "metric": "explicit",
        "dist": [list(row) for row in space.dist],
    }


def space_from_dict(data: dict) -> MetricSpace:
    points = sorted(data["points"], key=lambda p: int(p["id"]))
    n = len(points)
    if [int(p["id"]) for p in points] != list(range(n)):
        raise ValueError("point ids must be exactly 0..n-1")
    mass = [float(p["mass"]) for p in points]
    labels = None
    if any("label" in p for p in points):
        labels = [p.get("label", str(p["id"])) for p in points]
    edges = [(int(e["u"]), int(e["v"])) for e in data.get("edges", [])]

    metric = data.get("metric", "explicit")
    if metric == "explicit":
        if "dist" not in data:
            raise ValueError('metric "explicit" requires "dist"')
        dist = np.array(data["dist"], dtype=float)
        if dist.ndim == 1:
            dist = dist.reshape(n, n)
    elif metric == "graph":
        unit = MetricSpace(np.ones((n, n)) - np.eye(n), edges)
        dist = shortest_path(edge_graph(unit), directed=False)
        if not np.all(np.isfinite(dist)):
            raise ValueError('metric "graph" needs a connected edge graph')
    else:
        raise ValueError(f"unknown metric kind {metric!r}")
    if dist.shape != (n, n):
        raise ValueError(f"dist must be {n}x{n}, got {dist.shape}")
    return MetricSpace(dist, edges, mass, labels)


def write_space(space: MetricSpace, path) -> None:
    write_atomic(path, dumps(space_to_dict(space)) + "\n")


def read_space(path) -> MetricSpace:
    with open(path) as fh:
        return space_from_dict(json.load(fh))


# -- field files -------------------------------------------------------------

def field_to_csv(values) -> str:
    buf = io.StringIO()
    buf.write("point_id,value\n")
    for i, v in enumerate(values):
        buf.write(f"{i},{fmt_float(v)}\n")
    return buf.getvalue()


def field_from_csv(text: str, n: int = None) -> np.ndarray:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [c.strip() for c in rows[0]] != ["point_id", "value"]:
        raise ValueError('field file must start with header "point_id,value"')
    body = [r for r in rows[1:] if r]
    ids = [int(r[0]) for r in body]
    m = len(body) if n is None else n
    if sorted(ids) != list(range(m)) or len(ids) != m:
        raise IdMismatch(f"field ids do not cover 0..{m - 1} exactly once")
    out = np.empty(m)
    for i, r in zip(ids, body):
        out[i] = float(r[1])
    return out


def write_field(values, path) -> None:
    write_atomic(path, field_to_csv(values))


def read_field(path, n: int = None) -> np.ndarray:
    with open(path) as fh:
        return field_from_csv(fh.read(), n)


# -- matrices and reports ----------------------------------------------------

def _cell(x: float) -> str:
    return "inf" if x == math.inf else fmt_float(x)


def matrix_to_csv(mat: np.ndarray) -> str:
    n = mat.shape[0]
    lines = [",".join(str(i) for i in range(n))]
    lines += [",".join(_cell(x) for x in row) for row in mat]
    return "\n".join(lines) + "\n"


def matrix_from_csv(text: str) -> np.ndarray:
    rows = list(csv.reader(io.StringIO(text)))
    return np.array([[float(c) for c in r] for r in rows[1:] if r])


def write_matrix(mat: np.ndarray, path) -> None:
    write_atomic(path, matrix_to_csv(mat))


def write_json(obj, path) -> None:
    write_atomic(path, dumps(obj) + "\n")
