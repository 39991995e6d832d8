import json
import time

import numpy as np
import pytest

from aeq.bounds import (
    GENERAL_LOWER_4_TAG,
    RAMSEY_TAG,
    bounds_for_dimension,
    load_bounds_table,
    monochromatic_triangles,
    pentagon_coloring,
    verify_ramsey_33,
)
from aeq.errors import InputError


@pytest.fixture(scope="module")
def table():
    return load_bounds_table()


@pytest.mark.parametrize(
    "d,statement",
    [
        (2, "f(2) = 7"),
        (3, "f(3) = 10"),
        (4, "12 ≤ f(4) ≤ 13"),
        (5, "16 ≤ f(5) ≤ 20"),
        (6, "18 ≤ f(6) ≤ 26"),
        (7, "20 ≤ f(7) ≤ 34"),
    ],
)
def test_tabulated_dimensions(table, d, statement):
    assert bounds_for_dimension(d, table).statement == statement


def test_plane(table):
    bounds = bounds_for_dimension(2, table)
    assert (bounds.lower, bounds.upper, bounds.ramsey_upper) == (7, 7, 8)


@pytest.mark.parametrize("d", [8, 9])
def test_at_least_24(table, d):
    bounds = bounds_for_dimension(d, table)
    assert bounds.lower == 24
    assert bounds.upper is None
    # R(d+2, 3) is only shipped up to R(9, 3)
    assert bounds.ramsey_upper is None
    assert bounds.statement == f"24 ≤ f({d})"


@pytest.mark.parametrize("d", range(2, 8))
def test_ramsey_upper_comes_from_the_table(table, d):
    bounds = bounds_for_dimension(d, table)
    assert bounds.ramsey_upper == table.ramsey_r3[d + 2] - 1


def test_ramsey_source_when_no_table_upper(tmp_path):
    path = tmp_path / "bounds.json"
    path.write_text(json.dumps({"f_bounds": [], "ramsey_r3": {"5": 14}}))
    bounds = bounds_for_dimension(3, load_bounds_table(str(path)))
    assert bounds.upper is None
    assert bounds.upper_source == RAMSEY_TAG
    assert bounds.statement == "10 ≤ f(3) ≤ 13"


@pytest.mark.parametrize("d", range(3, 8))
def test_ramsey_gate(table, d):
    bounds = bounds_for_dimension(d, table)
    assert bounds.lower >= 2 * d + 4
    assert bounds.upper <= bounds.ramsey_upper


def test_far_dimension(table):
    bounds = bounds_for_dimension(100, table)
    assert bounds.lower == 204
    assert bounds.lower_source == GENERAL_LOWER_4_TAG
    assert bounds.upper is None
    assert bounds.ramsey_upper is None
    assert bounds.statement == "204 ≤ f(100)"


def test_dimension_one_is_rejected(table):
    with pytest.raises(InputError):
        bounds_for_dimension(1, table)


def test_custom_table(tmp_path):
    path = tmp_path / "bounds.json"
    path.write_text(json.dumps({
        "f_bounds": [{"d": 4, "lower": 12, "upper": 12, "source": "assumed"}],
        "ramsey_r3": {"6": 18},
    }))
    bounds = bounds_for_dimension(4, load_bounds_table(str(path)))
    assert bounds.statement == "f(4) = 12"
    assert bounds.ramsey_upper == 17


def test_inverted_table_is_rejected(tmp_path):
    path = tmp_path / "bounds.json"
    path.write_text(json.dumps({
        "f_bounds": [{"d": 4, "lower": 14, "upper": 12, "source": "bad"}],
        "ramsey_r3": {},
    }))
    with pytest.raises(InputError, match="lower > upper"):
        load_bounds_table(str(path))


def test_missing_table_file():
    with pytest.raises(InputError, match="not found"):
        load_bounds_table("/nonexistent/bounds.json")


def test_pentagon_avoids_monochromatic_triangles():
    assert not monochromatic_triangles(pentagon_coloring(), 5)[0]


def test_r33_by_exhaustion():
    start = time.perf_counter()
    check = verify_ramsey_33()
    assert time.perf_counter() - start < 1.0
    assert check.passed
    assert check.k6_colorings == 2**15


def test_all_red_k6_has_triangle():
    assert monochromatic_triangles(np.ones(15, dtype=np.uint8), 6)[0]
