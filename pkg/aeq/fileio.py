"""
Reading and writing the JSON documents the CLI exchanges.

Point-set file: {"dim": int, "points": [[real, ...], ...]}
Graph file:     {"n": int, "edges": [[int, int], ...]}

Reports are written with stable key order and every float rounded to
SIGNIFICANT_DIGITS significant digits, so a report re-parsed and re-written is
byte-identical.
"""

import json
import logging
import math

import numpy as np

from aeq.errors import InputError
from aeq.geometry import PointSet, UnitDistanceGraph

logger = logging.getLogger(__name__)

SIGNIFICANT_DIGITS = 12


def _line_of(text, needle_index):
    return text.count("\n", 0, needle_index) + 1


def _load_json(path, what):
    try:
        with open(path, "r") as f:
            text = f.read()
    except FileNotFoundError:
        raise InputError(f"{what} file not found: {path}", field="file")
    except OSError as e:
        raise InputError(f"cannot read {what} file {path}: {e}", field="file")
    try:
        return json.loads(text), text
    except json.JSONDecodeError as e:
        raise InputError(f"invalid JSON ({e.msg}, column {e.colno})", line=e.lineno)


def _point_line(text, index):
    """Best-effort line number of the index-th entry of the points array."""
    start = text.find('"points"')
    if start < 0:
        return None
    depth, count = 0, -1
    for pos in range(text.find("[", start), len(text)):
        char = text[pos]
        if char == "[":
            depth += 1
            if depth == 2:
                count += 1
                if count == index:
                    return _line_of(text, pos)
        elif char == "]":
            depth -= 1
            if depth == 0:
                break
    return None


def validate_point_set_document(doc):
    """
    Check a parsed point-set document.

    Returns:
        List of problems as (field, reason, point index or None); empty if valid
    """
    if not isinstance(doc, dict):
        return [("document", "expected a JSON object with dim and points", None)]

    problems = []
    dim = doc.get("dim")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        problems.append(("dim", f"expected a positive integer, got {dim!r}", None))
    points = doc.get("points")
    if not isinstance(points, list):
        problems.append(("points", "expected an array of coordinate arrays", None))
        return problems

    for i, point in enumerate(points):
        if not isinstance(point, list):
            problems.append((f"points[{i}]", "expected an array of numbers", i))
            continue
        if any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in point):
            problems.append((f"points[{i}]", "coordinates must be numbers", i))
            continue
        if isinstance(dim, int) and len(point) != dim:
            problems.append((f"points[{i}]", f"expected {dim} coordinates, got {len(point)}", i))
            continue
        if not all(math.isfinite(x) for x in point):
            problems.append((f"points[{i}]", "coordinates must be finite", i))
    return problems


def read_point_set(path):
    doc, text = _load_json(path, "point-set")
    problems = validate_point_set_document(doc)
    if problems:
        field, reason, index = problems[0]
        line = _point_line(text, index) if index is not None else None
        if len(problems) > 1:
            reason += f" (and {len(problems) - 1} more problems)"
        raise InputError(reason, field=field, line=line)

    dim = doc["dim"]
    coords = np.array(doc["points"], dtype=float).reshape(-1, dim)
    logger.info("Read %d points in R^%d from %s", coords.shape[0], dim, path)
    return PointSet(dim, coords)


def read_graph(path):
    doc, _ = _load_json(path, "graph")
    if not isinstance(doc, dict):
        raise InputError("expected a JSON object with n and edges", field="document")
    n = doc.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise InputError(f"expected a non-negative integer, got {n!r}", field="n")
    edges = doc.get("edges")
    if not isinstance(edges, list):
        raise InputError("expected an array of vertex pairs", field="edges")
    for i, edge in enumerate(edges):
        if (
            not isinstance(edge, list)
            or len(edge) != 2
            or any(isinstance(x, bool) or not isinstance(x, int) for x in edge)
        ):
            raise InputError(f"expected a pair of integers, got {edge!r}", field=f"edges[{i}]")
    return UnitDistanceGraph.from_edges(n, edges)


def round_floats(value, digits=SIGNIFICANT_DIGITS):
    """Recursively round floats (numpy scalars included) for stable output."""
    if isinstance(value, dict):
        return {str(k): round_floats(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_floats(v, digits) for v in value]
    if isinstance(value, np.ndarray):
        return round_floats(value.tolist(), digits)
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return None
        return float(f"{value:.{digits}g}")
    return value


def dumps(doc):
    return json.dumps(round_floats(doc), indent=2, ensure_ascii=False)


def write_json(path, doc):
    with open(path, "w") as f:
        f.write(dumps(doc) + "\n")


def write_point_set(path, ps):
    # Coordinates keep full precision; rounding would break unit distances
    with open(path, "w") as f:
        json.dump(ps.to_dict(), f, indent=2)
        f.write("\n")
    logger.info("Wrote %d points to %s", ps.n, path)


def write_graph(path, g):
    write_json(path, g.to_dict())
