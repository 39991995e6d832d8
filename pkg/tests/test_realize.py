import numpy as np
import pytest

from aeq.config import TolerancePolicy
from aeq.errors import InputError
from aeq.geometry import UnitDistanceGraph, build_unit_distance_graph, moser_spindle_graph
from aeq.realize import StressModel, realize_graph


@pytest.mark.parametrize("d", range(1, 7))
def test_realizes_unit_simplex(d):
    g = UnitDistanceGraph.complete(d + 1)
    result = realize_graph(g, d, restarts=100, seed=0, threads=4)
    assert result.success, result.reason
    assert result.best_stress < 1e-8
    assert build_unit_distance_graph(result.points).edges == g.edges


def test_realizes_moser_spindle_in_the_plane():
    g = moser_spindle_graph()
    result = realize_graph(g, 2, restarts=100, seed=0)
    assert result.success, result.reason
    assert build_unit_distance_graph(result.points).edges == g.edges


@pytest.mark.parametrize("d", range(1, 6))
def test_too_large_simplex_fails(d):
    result = realize_graph(UnitDistanceGraph.complete(d + 2), d, restarts=8, seed=0)
    assert not result.success
    assert result.best_stress > 1e-3
    assert result.restarts_run == 8
    assert result.reason


def test_result_does_not_depend_on_thread_count():
    g = UnitDistanceGraph.complete(5)
    one = realize_graph(g, 3, restarts=6, seed=11, threads=1)
    many = realize_graph(g, 3, restarts=6, seed=11, threads=3)
    assert (one.restart, one.best_stress) == (many.restart, many.best_stress)
    np.testing.assert_array_equal(one.points.points, many.points.points)


@pytest.mark.parametrize("graph", [moser_spindle_graph(), UnitDistanceGraph.complete(5)])
def test_gradient_matches_central_differences(graph):
    model = StressModel(graph, 3, TolerancePolicy())
    rng = np.random.default_rng(5)
    h = 1e-6
    for _ in range(20):
        x = rng.uniform(-1.0, 1.0, size=graph.n * 3)
        _, grad = model.stress_and_gradient(x)
        numeric = np.empty_like(x)
        for i in range(x.size):
            step = np.zeros_like(x)
            step[i] = h
            numeric[i] = (model.stress(x + step) - model.stress(x - step)) / (2 * h)
        assert np.linalg.norm(numeric - grad) / np.linalg.norm(grad) < 1e-5


def test_stress_is_zero_on_a_realization(moser):
    g = build_unit_distance_graph(moser)
    model = StressModel(g, 2)
    assert model.stress(moser.points.ravel()) < 1e-20
    np.testing.assert_allclose(model.residuals(moser.points.ravel()), 0.0, atol=1e-10)


def test_jacobian_matches_residual_differences():
    g = UnitDistanceGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    model = StressModel(g, 2)
    x = np.random.default_rng(8).uniform(-1, 1, size=8)
    jac = model.jacobian(x)
    h = 1e-7
    for i in range(x.size):
        step = np.zeros_like(x)
        step[i] = h
        column = (model.residuals(x + step) - model.residuals(x - step)) / (2 * h)
        np.testing.assert_allclose(jac[:, i], column, atol=1e-6)


def test_rejects_bad_arguments():
    g = UnitDistanceGraph.complete(3)
    with pytest.raises(InputError):
        realize_graph(g, 0)
    with pytest.raises(InputError):
        realize_graph(g, 2, restarts=0)
    with pytest.raises(InputError):
        realize_graph(UnitDistanceGraph.from_edges(0, []), 2)
