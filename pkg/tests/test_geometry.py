import itertools
import math

import numpy as np
import pytest

from aeq.config import TolerancePolicy
from aeq.constructions import generalized_spindle, orthogonal_frames, unit_simplex_points
from aeq.errors import CoincidentPointsError, InputError
from aeq.geometry import (
    PointSet,
    UnitDistanceGraph,
    build_unit_distance_graph,
    complement_triangle_free,
    gram_matrix,
    is_almost_equidistant,
    is_almost_orthogonal,
    is_isomorphic_exhaustive,
    moser_spindle_graph,
    non_neighbour_cliques,
)


def brute_force_witness(ps, tol):
    dist = ps.distance_matrix()
    for i, j, k in itertools.combinations(range(ps.n), 3):
        if all(abs(dist[a, b] - 1.0) > tol.eps_unit for a, b in ((i, j), (i, k), (j, k))):
            return (i, j, k)
    return None


class TestPointSet:
    def test_rejects_dimension_mismatch(self):
        with pytest.raises(InputError, match="points"):
            PointSet(2, [[0.0, 0.0, 0.0]])

    def test_rejects_non_finite(self):
        with pytest.raises(InputError) as info:
            PointSet(2, [[0.0, 0.0], [np.nan, 1.0]])
        assert info.value.field == "points[1]"

    def test_rejects_bad_dim(self):
        with pytest.raises(InputError):
            PointSet(0, [])
        with pytest.raises(InputError):
            PointSet(True, [[1.0]])

    def test_coordinates_are_read_only(self):
        ps = PointSet(2, [[0.0, 0.0], [1.0, 0.0]])
        with pytest.raises(ValueError):
            ps.points[0, 0] = 5.0

    def test_empty_point_set(self):
        ps = PointSet(3, [])
        assert ps.n == 0
        assert build_unit_distance_graph(ps).edges == frozenset()


class TestUnitDistanceGraph:
    def test_unit_simplex_is_complete(self, tol):
        g = build_unit_distance_graph(unit_simplex_points(4, 3), tol)
        assert g.edges == UnitDistanceGraph.complete(4).edges

    def test_coincident_points(self, tol):
        ps = PointSet(2, [[0.0, 0.0], [1.0, 0.0], [1.0, 1e-12]])
        with pytest.raises(CoincidentPointsError) as info:
            build_unit_distance_graph(ps, tol)
        assert info.value.pair == (1, 2)

    def test_tolerance_decides_edges(self):
        ps = PointSet(1, [[0.0], [1.0 + 1e-7]])
        assert not build_unit_distance_graph(ps, TolerancePolicy()).edges
        assert build_unit_distance_graph(ps, TolerancePolicy(eps_unit=1e-6)).edges == {(0, 1)}

    def test_translation_keeps_edges(self, spindle3, tol):
        moved = spindle3.translated([3.7, -1.25, 0.5])
        assert build_unit_distance_graph(moved, tol).edges == build_unit_distance_graph(spindle3, tol).edges

    def test_rejects_self_loop_and_range(self):
        with pytest.raises(InputError, match="self-loop"):
            UnitDistanceGraph.from_edges(3, [(1, 1)])
        with pytest.raises(InputError, match="outside"):
            UnitDistanceGraph.from_edges(3, [(0, 3)])

    def test_edges_are_normalised(self):
        g = UnitDistanceGraph.from_edges(3, [(2, 0), (0, 2), (1, 2)])
        assert g.sorted_edges() == [(0, 2), (1, 2)]
        assert g.neighbours[2] == {0, 1}
        assert g.neighbour_masks[2] == 0b011


class TestAlmostEquidistant:
    def test_small_sets_are_vacuous(self):
        assert is_almost_equidistant(PointSet(2, [[0.0, 0.0], [5.0, 5.0]]))

    def test_collinear_points_fail(self, tol):
        ps = PointSet(2, [[0.0, 0.0], [2.0, 0.0], [4.0, 0.0]])
        verdict = is_almost_equidistant(ps, tol)
        assert not verdict
        assert verdict.witness == (0, 1, 2)

    def test_witness_is_lexicographically_smallest(self, tol):
        # 0, 1, 2 is a unit triangle, 3 and 4 are far from everything
        points = [[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3) / 2], [10.0, 0.0], [20.0, 0.0]]
        verdict = is_almost_equidistant(PointSet(2, points), tol)
        assert verdict.witness == (0, 3, 4)

    @pytest.mark.parametrize("d", range(2, 7))
    def test_spindle_passes_both_routes(self, d, tol):
        ps = generalized_spindle(d)
        assert is_almost_equidistant(ps, tol)
        assert complement_triangle_free(build_unit_distance_graph(ps, tol))

    @pytest.mark.parametrize("seed", range(10))
    def test_routes_agree_on_random_sets(self, seed, tol):
        rng = np.random.default_rng(seed)
        # Distinct points of a grid with step 1/2 make unit pairs common
        cells = rng.choice(25, size=9, replace=False)
        ps = PointSet(2, np.stack([cells // 5, cells % 5], axis=1) / 2.0)
        direct = is_almost_equidistant(ps, tol)
        graph = complement_triangle_free(build_unit_distance_graph(ps, tol))
        assert direct.witness == graph.witness == brute_force_witness(ps, tol)

    def test_non_neighbour_sets_are_cliques(self, spindle3):
        verdict, records = non_neighbour_cliques(build_unit_distance_graph(spindle3))
        assert verdict
        assert len(records) == spindle3.n
        assert all(r.is_clique for r in records)

    def test_non_neighbour_failure_names_the_missing_edge(self):
        g = UnitDistanceGraph.from_edges(4, [(0, 1)])
        verdict, records = non_neighbour_cliques(g)
        assert not verdict
        assert verdict.witness == (0, 2, 3)
        assert records[0].missing_edge == (2, 3)


class TestAlmostOrthogonal:
    @pytest.mark.parametrize("d", range(2, 7))
    def test_frames_agree_with_equidistance(self, d, tol):
        ps = orthogonal_frames(d)
        assert np.allclose(np.linalg.norm(ps.points, axis=1), 1 / math.sqrt(2))
        assert is_almost_orthogonal(ps.points, tol)
        assert is_almost_equidistant(ps, tol)

    def test_witness(self, tol):
        verdict = is_almost_orthogonal([[1.0, 0.0], [1.0, 1.0], [1.0, 2.0]], tol)
        assert verdict.witness == (0, 1, 2)

    def test_zero_vector(self):
        with pytest.raises(InputError, match="zero vector"):
            is_almost_orthogonal([[1.0, 0.0], [0.0, 0.0], [0.0, 1.0]])


class TestGraphHelpers:
    def test_moser_construction_matches_abstract_graph(self, moser, tol):
        g = build_unit_distance_graph(moser, tol)
        assert len(g.edges) == 11
        assert is_isomorphic_exhaustive(g, moser_spindle_graph())

    def test_isomorphism_rejects(self):
        path = UnitDistanceGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
        star = UnitDistanceGraph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
        assert not is_isomorphic_exhaustive(path, star)
        assert is_isomorphic_exhaustive(path, UnitDistanceGraph.from_edges(4, [(3, 1), (1, 0), (0, 2)]))

    def test_isomorphism_refuses_large_graphs(self):
        with pytest.raises(InputError):
            is_isomorphic_exhaustive(UnitDistanceGraph.complete(10), UnitDistanceGraph.complete(10))

    def test_gram_matrix_is_symmetric(self, spindle3):
        gram = gram_matrix(spindle3)
        assert np.array_equal(gram, gram.T)
        np.testing.assert_allclose(np.diag(gram), np.sum(spindle3.points**2, axis=1))

    def test_gram_matrix_reconstructs_distances(self, spindle3):
        gram = gram_matrix(spindle3)
        dist_sq = spindle3.distance_matrix() ** 2
        diag = np.diag(gram)
        np.testing.assert_allclose(diag[:, None] + diag[None, :] - 2 * gram, dist_sq, atol=1e-12)

    def test_gram_matrix_examples(self):
        assert np.array_equal(gram_matrix(PointSet(3, [[0.0, 0.0, 0.0]])), [[0.0]])
        np.testing.assert_allclose(gram_matrix(PointSet(2, [[1.0, 0.0], [0.0, 1.0]])), np.eye(2))

    @pytest.mark.parametrize("k", [2, 3, 5, 8])
    def test_centred_simplex_gram(self, k):
        ps = unit_simplex_points(k, k)
        centred = ps.translated(-ps.points.mean(axis=0))
        expected = np.full((k, k), -1 / (2 * k))
        np.fill_diagonal(expected, 0.5 * (1 - 1 / k))
        np.testing.assert_allclose(gram_matrix(centred), expected, atol=1e-12)


class TestGraphExamples:
    def test_path_passes_non_neighbour_cliques(self):
        # The complement of P_3 has the edge (0, 2), but no vertex misses two others
        path = UnitDistanceGraph.from_edges(3, [(0, 1), (1, 2)])
        verdict, records = non_neighbour_cliques(path)
        assert verdict
        assert all(r.is_clique for r in records)
        assert complement_triangle_free(path)

    def test_complete_graph_has_triangle_free_complement(self):
        assert complement_triangle_free(UnitDistanceGraph.complete(5))

    def test_empty_graph_on_three_vertices(self):
        verdict = complement_triangle_free(UnitDistanceGraph.from_edges(3, []))
        assert not verdict
        assert verdict.witness == (0, 1, 2)


def test_two_coincident_points_are_rejected(tol):
    ps = PointSet(2, [[0.5, 0.5], [0.5, 0.5]])
    with pytest.raises(CoincidentPointsError) as info:
        is_almost_equidistant(ps, tol)
    assert info.value.pair == (0, 1)
