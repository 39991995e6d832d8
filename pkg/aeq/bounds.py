"""
Known bounds on f(d), the largest almost-equidistant set in R^d, and the
Ramsey gate f(d) <= R(d+2, 3) - 1.

No d+2 points of R^d are pairwise at unit distance, so a set of R(d+2, 3)
points would contain either a unit (d+2)-clique or three points without a
unit pair.
"""

import itertools
import json
import logging
from dataclasses import dataclass
from importlib import resources
from types import MappingProxyType

import numpy as np
import pandas as pd

from aeq.errors import InputError

logger = logging.getLogger(__name__)

GENERAL_LOWER_TAG = "2d+3 spindle"
GENERAL_LOWER_4_TAG = "2d+4 for d >= 3"
RAMSEY_TAG = "R(d+2,3) - 1"


@dataclass(frozen=True)
class BoundsTable:
    """
    Per-dimension bounds (a DataFrame indexed by d with columns lower, upper,
    source; upper is <NA> when unknown) and the small Ramsey numbers R(k, 3).
    """

    records: pd.DataFrame
    ramsey_r3: MappingProxyType

    def row(self, d):
        if d not in self.records.index:
            return None
        return self.records.loc[d]


def _validate_records(df):
    missing = {"d", "lower", "source"} - set(df.columns)
    if missing:
        raise InputError(f"bounds records lack columns {sorted(missing)}", field="f_bounds")
    if "upper" not in df.columns:
        df["upper"] = pd.NA
    if df["d"].duplicated().any():
        duplicated = df.loc[df["d"].duplicated(), "d"].tolist()
        raise InputError(f"dimensions listed twice: {duplicated}", field="f_bounds")

    df = df.astype({"d": "int64", "lower": "int64", "upper": "Int64", "source": "string"})
    inverted = df["upper"].notna() & (df["lower"] > df["upper"])
    if inverted.any():
        bad = df.loc[inverted, "d"].tolist()
        raise InputError(f"lower > upper for d in {bad}", field="f_bounds")
    return df.set_index("d").sort_index()


def load_bounds_table(path=None):
    """Load the bounds table from `path`, or the copy shipped with the package."""
    try:
        if path is None:
            text = resources.files("aeq").joinpath("data/bounds.json").read_text()
        else:
            with open(path, "r") as f:
                text = f.read()
        doc = json.loads(text)
    except FileNotFoundError:
        raise InputError(f"bounds file not found: {path}", field="bounds_file")
    except json.JSONDecodeError as e:
        raise InputError(f"invalid JSON: {e.msg}", field="bounds_file", line=e.lineno)

    if not isinstance(doc, dict) or "f_bounds" not in doc or "ramsey_r3" not in doc:
        raise InputError("expected an object with f_bounds and ramsey_r3", field="bounds_file")
    try:
        records = pd.DataFrame(doc["f_bounds"])
        if records.empty:
            records = pd.DataFrame(columns=["d", "lower", "upper", "source"])
        records = _validate_records(records)
        ramsey = {int(k): int(v) for k, v in doc["ramsey_r3"].items()}
    except (TypeError, ValueError) as e:
        raise InputError(f"malformed bounds table: {e}", field="bounds_file")

    logger.debug("Loaded bounds for d in %s", records.index.tolist())
    return BoundsTable(records=records, ramsey_r3=MappingProxyType(ramsey))


@dataclass(frozen=True)
class DimensionBounds:
    d: int
    lower: int
    upper: int | None
    ramsey_upper: int | None
    lower_source: str
    upper_source: str | None

    @property
    def statement(self):
        upper = self.upper if self.upper is not None else self.ramsey_upper
        if upper is None:
            return f"{self.lower} ≤ f({self.d})"
        if upper == self.lower:
            return f"f({self.d}) = {self.lower}"
        return f"{self.lower} ≤ f({self.d}) ≤ {upper}"

    def to_dict(self):
        return {
            "d": self.d,
            "lower": self.lower,
            "upper": self.upper,
            "ramsey_upper": self.ramsey_upper,
            "lower_source": self.lower_source,
            "upper_source": self.upper_source,
            "statement": self.statement,
        }


def bounds_for_dimension(d, table):
    if d < 2:
        raise InputError(f"bounds are tabulated for d >= 2, got {d}", field="dim")

    candidates = [(2 * d + 3, GENERAL_LOWER_TAG)]
    if d >= 3:
        candidates.append((2 * d + 4, GENERAL_LOWER_4_TAG))
    row = table.row(d)
    if row is not None:
        candidates.append((int(row["lower"]), str(row["source"])))
    # Highest value wins; the table source is preferred on ties
    lower, lower_source = max(candidates, key=lambda c: (c[0], c[1] not in (GENERAL_LOWER_TAG, GENERAL_LOWER_4_TAG)))

    upper = upper_source = None
    if row is not None and not pd.isna(row["upper"]):
        upper, upper_source = int(row["upper"]), str(row["source"])

    ramsey_upper = None
    if d + 2 in table.ramsey_r3:
        ramsey_upper = table.ramsey_r3[d + 2] - 1
        if upper is None:
            upper_source = RAMSEY_TAG

    return DimensionBounds(d, lower, upper, ramsey_upper, lower_source, upper_source)


@dataclass(frozen=True)
class RamseyCheck:
    k5_coloring_triangle_free: bool
    k6_colorings: int
    k6_all_forced: bool
    passed: bool

    def to_dict(self):
        return {
            "claim": "R(3,3) = 6",
            "k5_coloring_triangle_free": self.k5_coloring_triangle_free,
            "k6_colorings": self.k6_colorings,
            "k6_all_forced": self.k6_all_forced,
            "passed": self.passed,
        }


def _edge_index(n):
    return {pair: i for i, pair in enumerate(itertools.combinations(range(n), 2))}


def monochromatic_triangles(colorings, n):
    """
    For each 2-colouring (row of 0/1 over the edges of K_n in combinations order),
    whether some triangle has all three edges the same colour.
    """
    index = _edge_index(n)
    colorings = np.atleast_2d(colorings)
    found = np.zeros(colorings.shape[0], dtype=bool)
    for a, b, c in itertools.combinations(range(n), 3):
        x = colorings[:, index[(a, b)]]
        y = colorings[:, index[(a, c)]]
        z = colorings[:, index[(b, c)]]
        found |= (x == y) & (y == z)
    return found


def pentagon_coloring():
    """K_5 with the pentagon edges in colour 1 and the pentagram edges in colour 0."""
    return np.array(
        [1 if (j - i) % 5 in (1, 4) else 0 for i, j in itertools.combinations(range(5), 2)],
        dtype=np.uint8,
    )


def verify_ramsey_33():
    """Check R(3,3) = 6 by exhaustion over all 2^15 colourings of K_6."""
    k5_ok = not monochromatic_triangles(pentagon_coloring(), 5)[0]

    n_edges = 15
    codes = np.arange(2**n_edges, dtype=np.uint32)
    colorings = ((codes[:, None] >> np.arange(n_edges, dtype=np.uint32)) & 1).astype(np.uint8)
    forced = monochromatic_triangles(colorings, 6)

    check = RamseyCheck(
        k5_coloring_triangle_free=bool(k5_ok),
        k6_colorings=int(colorings.shape[0]),
        k6_all_forced=bool(forced.all()),
        passed=bool(k5_ok and forced.all()),
    )
    logger.info("R(3,3) = 6 check: %s", "pass" if check.passed else "FAIL")
    return check
