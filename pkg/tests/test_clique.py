import itertools

import networkx as nx
import numpy as np
import pytest

from aeq.clique import greedy_clique, max_clique
from aeq.constructions import generalized_spindle
from aeq.errors import CliqueLimitError
from aeq.geometry import UnitDistanceGraph, build_unit_distance_graph


def random_graph(n, p, seed):
    rng = np.random.default_rng(seed)
    edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < p]
    return UnitDistanceGraph.from_edges(n, edges)


def networkx_smallest_maximum_clique(g):
    oracle = nx.Graph()
    oracle.add_nodes_from(range(g.n))
    oracle.add_edges_from(g.edges)
    cliques = [sorted(c) for c in nx.find_cliques(oracle)]
    size = max(len(c) for c in cliques)
    return min(c for c in cliques if len(c) == size)


@pytest.mark.parametrize("seed", range(12))
@pytest.mark.parametrize("n,p", [(12, 0.3), (25, 0.5), (40, 0.7)])
def test_matches_networkx(n, p, seed):
    g = random_graph(n, p, seed)
    found = max_clique(g)
    assert found.optimal
    assert g.is_clique(found.vertices)
    assert found.vertices == networkx_smallest_maximum_clique(g)


@pytest.mark.parametrize("d", range(2, 11))
def test_spindle_clique_is_apex_and_first_facet(d):
    g = build_unit_distance_graph(generalized_spindle(d))
    found = max_clique(g)
    assert found.size == d + 1
    assert found.vertices == list(range(d + 1))


def test_edgeless_and_empty_graphs():
    assert max_clique(UnitDistanceGraph.from_edges(4, [])).vertices == [0]
    assert max_clique(UnitDistanceGraph.from_edges(0, [])).vertices == []


def test_complete_graph():
    found = max_clique(UnitDistanceGraph.complete(9))
    assert found.vertices == list(range(9))


def test_limit_is_enforced():
    g = UnitDistanceGraph.from_edges(201, [(0, 1)])
    with pytest.raises(CliqueLimitError, match="--heuristic-clique"):
        max_clique(g)
    assert max_clique(g, limit=300).size == 2


def test_heuristic_mode_is_flagged():
    g = random_graph(30, 0.5, 7)
    found = max_clique(g, heuristic=True)
    assert not found.optimal
    assert g.is_clique(found.vertices)
    assert found.size <= max_clique(g).size


@pytest.mark.parametrize("seed", range(5))
def test_greedy_clique_is_maximal(seed):
    g = random_graph(20, 0.4, seed)
    clique = greedy_clique(g)
    assert clique == sorted(clique)
    assert g.is_clique(clique)
    outside = set(range(g.n)) - set(clique)
    assert not any(g.is_clique(clique + [v]) for v in outside)
