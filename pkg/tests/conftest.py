import json

import numpy as np
import pytest

from aeq.config import TolerancePolicy
from aeq.constructions import generalized_spindle, moser_spindle
from aeq.geometry import PointSet


@pytest.fixture
def tol():
    return TolerancePolicy()


@pytest.fixture
def moser():
    return moser_spindle()


@pytest.fixture
def spindle3():
    return generalized_spindle(3)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def write_points(tmp_path):
    """Write a point set (or raw document) to a JSON file and return its path."""

    def write(ps_or_doc, name="points.json"):
        doc = ps_or_doc.to_dict() if isinstance(ps_or_doc, PointSet) else ps_or_doc
        path = tmp_path / name
        path.write_text(json.dumps(doc, indent=2))
        return str(path)

    return write


@pytest.fixture
def write_graph(tmp_path):
    def write(n, edges, name="graph.json"):
        path = tmp_path / name
        path.write_text(json.dumps({"n": n, "edges": [list(e) for e in edges]}))
        return str(path)

    return write
