import json
import math

import numpy as np
import pytest

from aeq.errors import InputError
from aeq.fileio import dumps, read_graph, read_point_set, round_floats, write_json, write_point_set
from aeq.fileio import write_graph as write_graph_file
from aeq.geometry import moser_spindle_graph


def test_point_set_round_trip_keeps_precision(tmp_path, moser):
    path = tmp_path / "moser.json"
    write_point_set(str(path), moser)
    back = read_point_set(str(path))
    np.testing.assert_array_equal(back.points, moser.points)
    assert back.dim == 2


def test_dimension_mismatch_names_point_and_line(write_points):
    path = write_points({"dim": 2, "points": [[0.0, 0.0], [1.0, 0.0], [1.0, 2.0, 3.0]]})
    with pytest.raises(InputError) as info:
        read_point_set(path)
    assert info.value.field == "points[2]"
    assert info.value.line is not None
    assert "line" in str(info.value) and "expected 2 coordinates" in str(info.value)


def test_invalid_json_reports_line(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "dim": 2,\n  "points": [[0, 0],,]\n}\n')
    with pytest.raises(InputError) as info:
        read_point_set(str(path))
    assert info.value.line == 3


@pytest.mark.parametrize(
    "doc,field",
    [
        ([1, 2], "document"),
        ({"dim": 0, "points": []}, "dim"),
        ({"dim": 2}, "points"),
        ({"dim": 2, "points": [[0, "x"]]}, "points[0]"),
        ({"dim": 1, "points": [[0], 5]}, "points[1]"),
        ({"dim": True, "points": []}, "dim"),
    ],
)
def test_malformed_point_sets(write_points, doc, field):
    with pytest.raises(InputError) as info:
        read_point_set(write_points(doc))
    assert info.value.field == field


def test_missing_file():
    with pytest.raises(InputError, match="not found"):
        read_point_set("/nonexistent/points.json")


def test_graph_file(write_graph):
    g = read_graph(write_graph(4, [(0, 1), (2, 1), (3, 0)]))
    assert g.sorted_edges() == [(0, 1), (0, 3), (1, 2)]


def test_written_graph_reads_back(tmp_path):
    path = tmp_path / "moser-graph.json"
    g = moser_spindle_graph()
    write_graph_file(str(path), g)
    back = read_graph(str(path))
    assert back.n == 7
    assert back.sorted_edges() == g.sorted_edges()


def test_written_report_is_rounded(tmp_path):
    path = tmp_path / "report.json"
    write_json(str(path), {"value": 1 / 3, "missing": math.nan})
    text = path.read_text()
    assert text.endswith("}\n")
    assert json.loads(text) == {"value": 0.333333333333, "missing": None}


@pytest.mark.parametrize(
    "doc,field",
    [
        ({"n": -1, "edges": []}, "n"),
        ({"n": 3}, "edges"),
        ({"n": 3, "edges": [[0, 1, 2]]}, "edges[0]"),
        ({"n": 3, "edges": [[0, 1], [1, 1]]}, "edges"),
    ],
)
def test_malformed_graphs(tmp_path, doc, field):
    path = tmp_path / "g.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(InputError) as info:
        read_graph(str(path))
    assert info.value.field == field


def test_round_floats():
    doc = {"a": 1 / 3, "b": [np.float64(2 / 3), np.int64(4)], "c": math.inf, "d": np.bool_(True), "e": "text"}
    assert round_floats(doc) == {"a": 0.333333333333, "b": [0.666666666667, 4], "c": None, "d": True, "e": "text"}


def test_dumps_is_stable():
    doc = {"z": 0.1 + 0.2, "a": [1e-17, 123456789.123456789]}
    text = dumps(doc)
    assert dumps(json.loads(text)) == text
    assert list(json.loads(text)) == ["z", "a"]
