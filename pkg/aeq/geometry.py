"""
Points, the unit-distance graph and the almost-equidistant predicate.

A set V of points is almost-equidistant if among any three points of V some
two are at distance 1. Equivalently the complement of the unit-distance graph
of V has no triangle. Both routes are implemented independently so they can
be checked against each other.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.spatial.distance import cdist, pdist, squareform

from aeq.config import TolerancePolicy
from aeq.errors import CoincidentPointsError, InputError

logger = logging.getLogger(__name__)

# Rows per block when building the graph of a large point set
DISTANCE_BLOCK_ROWS = 1024

# Exhaustive isomorphism is refused above this many vertices
ISOMORPHISM_LIMIT = 9


@dataclass(frozen=True)
class Verdict:
    """Outcome of a property check: holds, or a witness showing it does not."""

    holds: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.holds

    def to_dict(self):
        return {
            "holds": self.holds,
            "witness": None if self.witness is None else [int(i) for i in self.witness],
        }


@dataclass(frozen=True, eq=False)
class PointSet:
    """
    Finite ordered set of points in R^dim, one point per row of `points`.

    The coordinates are stored read-only. Distinctness is not enforced here;
    call check_distinct (build_unit_distance_graph does it for you).
    """

    dim: int
    points: np.ndarray

    def __post_init__(self):
        if isinstance(self.dim, bool) or not isinstance(self.dim, (int, np.integer)):
            raise InputError(f"must be an integer, got {self.dim!r}", field="dim")
        if self.dim < 1:
            raise InputError(f"must be positive, got {self.dim}", field="dim")

        coords = np.array(self.points, dtype=float)
        if coords.size == 0:
            coords = coords.reshape(0, self.dim)
        if coords.ndim != 2 or coords.shape[1] != self.dim:
            raise InputError(
                f"expected an (n, {self.dim}) coordinate array, got shape {coords.shape}",
                field="points",
            )
        bad_rows = np.flatnonzero(~np.isfinite(coords).all(axis=1))
        if bad_rows.size:
            raise InputError("non-finite coordinate", field=f"points[{bad_rows[0]}]")

        coords.setflags(write=False)
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "points", coords)

    @property
    def n(self):
        return self.points.shape[0]

    def __len__(self):
        return self.n

    def subset(self, indices):
        return PointSet(self.dim, self.points[list(indices)])

    def translated(self, offset):
        return PointSet(self.dim, self.points + np.asarray(offset, dtype=float))

    def permuted(self, order):
        """Point i of the result is point order[i] of self."""
        return PointSet(self.dim, self.points[np.asarray(order, dtype=int)])

    def distance_matrix(self):
        if self.n < 2:
            return np.zeros((self.n, self.n))
        return squareform(pdist(self.points))

    def check_distinct(self, tol):
        """Raise CoincidentPointsError for the smallest coinciding pair."""
        if self.n < 2:
            return
        dist = self.distance_matrix()
        close = np.argwhere(np.triu(dist <= tol.eps_coincide, k=1))
        if close.size:
            i, j = (int(x) for x in close[0])
            raise CoincidentPointsError((i, j), float(dist[i, j]))

    def to_dict(self):
        return {"dim": self.dim, "points": self.points.tolist()}


@dataclass(frozen=True, eq=False)
class UnitDistanceGraph:
    """
    Graph on n vertices with an edge for every unit pair.

    `edges` holds pairs (i, j) with i < j. `source` is the (PointSet,
    TolerancePolicy) the graph was built from, or None for graphs read from a
    graph file or written down by hand.
    """

    n: int
    edges: frozenset
    source: tuple | None = None

    def __post_init__(self):
        normalised = set()
        for edge in self.edges:
            i, j = (int(x) for x in edge)
            if i == j:
                raise InputError(f"self-loop at vertex {i}", field="edges")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise InputError(
                    f"edge ({i}, {j}) has an endpoint outside 0..{self.n - 1}",
                    field="edges",
                )
            normalised.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(normalised))

    @classmethod
    def from_edges(cls, n, edges):
        return cls(n=int(n), edges=frozenset(tuple(e) for e in edges))

    @classmethod
    def complete(cls, n):
        return cls(n=n, edges=frozenset(itertools.combinations(range(n), 2)))

    @cached_property
    def neighbours(self):
        nbrs = [set() for _ in range(self.n)]
        for i, j in self.edges:
            nbrs[i].add(j)
            nbrs[j].add(i)
        return [frozenset(s) for s in nbrs]

    @cached_property
    def neighbour_masks(self):
        """Neighbourhoods as int bitsets, bit j of entry i set iff ij is an edge."""
        masks = [0] * self.n
        for i, j in self.edges:
            masks[i] |= 1 << j
            masks[j] |= 1 << i
        return masks

    def adjacency_matrix(self):
        adj = np.zeros((self.n, self.n), dtype=bool)
        if self.edges:
            idx = np.array(sorted(self.edges))
            adj[idx[:, 0], idx[:, 1]] = True
            adj[idx[:, 1], idx[:, 0]] = True
        return adj

    def has_edge(self, i, j):
        return (min(i, j), max(i, j)) in self.edges

    def is_clique(self, vertices):
        return all(self.has_edge(i, j) for i, j in itertools.combinations(vertices, 2))

    def sorted_edges(self):
        return sorted(self.edges)

    def to_dict(self):
        return {"n": self.n, "edges": [list(e) for e in self.sorted_edges()]}


def build_unit_distance_graph(ps, tol=None):
    """
    Build the unit-distance graph of a point set.

    Pair (i, j) is an edge iff |dist(v_i, v_j) - 1| <= eps_unit. Distances are
    computed block-wise with cdist, O(n^2 d) time and O(block * n) memory.

    Raises:
        CoincidentPointsError: for the smallest pair closer than eps_coincide
    """
    tol = tol or TolerancePolicy()
    n = ps.n
    edges = []
    coincident = None

    for start in range(0, n, DISTANCE_BLOCK_ROWS):
        stop = min(start + DISTANCE_BLOCK_ROWS, n)
        block = cdist(ps.points[start:stop], ps.points)
        rows, cols = np.nonzero(np.abs(block - 1.0) <= tol.eps_unit)
        rows = rows + start
        upper = rows < cols
        edges.extend(zip(rows[upper].tolist(), cols[upper].tolist()))

        if coincident is None:
            # Only pairs i < j; the diagonal is distance 0 by definition
            col_index = np.arange(n)
            row_index = np.arange(start, stop)[:, None]
            close = np.argwhere((block <= tol.eps_coincide) & (col_index > row_index))
            if close.size:
                i, j = int(close[0, 0]) + start, int(close[0, 1])
                coincident = ((i, j), float(block[i - start, j]))

    if coincident is not None:
        raise CoincidentPointsError(*coincident)

    graph = UnitDistanceGraph(n=n, edges=frozenset(edges), source=(ps, tol))
    logger.info("Unit-distance graph: %d vertices, %d edges", n, len(graph.edges))
    return graph


def _non_unit_matrix(ps, tol):
    dist = ps.distance_matrix()
    non_unit = np.abs(dist - 1.0) > tol.eps_unit
    np.fill_diagonal(non_unit, False)
    return non_unit


def _first_triangle(mask_matrix):
    """
    Lexicographically smallest triple (i, j, k) pairwise True in a symmetric
    boolean matrix, or None.
    """
    n = mask_matrix.shape[0]
    for i in range(n):
        for j in np.flatnonzero(mask_matrix[i, i + 1:]) + i + 1:
            common = mask_matrix[i, j + 1:] & mask_matrix[j, j + 1:]
            if common.any():
                return (i, int(j), int(np.argmax(common)) + int(j) + 1)
    return None


def is_almost_equidistant(ps, tol=None):
    """
    Check that among any three points some two are at unit distance.

    Scans triples directly on the distance matrix (O(n^3) worst case). Point
    sets with fewer than three points are vacuously almost-equidistant.

    Returns:
        Verdict with the lexicographically smallest triple without a unit pair
    """
    tol = tol or TolerancePolicy()
    ps.check_distinct(tol)
    if ps.n < 3:
        return Verdict(True)

    witness = _first_triangle(_non_unit_matrix(ps, tol))
    if witness is not None:
        logger.info("Triple %s has no unit pair", witness)
        return Verdict(False, witness)
    return Verdict(True)


def complement_triangle_free(g):
    """
    Check that no three vertices of g are pairwise non-adjacent.

    Works on the graph only (int bitsets of non-neighbours), independent of
    any coordinates.
    """
    full = (1 << g.n) - 1
    non_adjacent = [full & ~mask & ~(1 << i) for i, mask in enumerate(g.neighbour_masks)]

    for i in range(g.n):
        later_than_i = non_adjacent[i] >> (i + 1) << (i + 1)
        rest = later_than_i
        while rest:
            j = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            common = later_than_i & non_adjacent[j] >> (j + 1) << (j + 1)
            if common:
                k = (common & -common).bit_length() - 1
                return Verdict(False, (i, j, k))
    return Verdict(True)


@dataclass(frozen=True)
class NonNeighbourRecord:
    vertex: int
    non_neighbours: tuple
    is_clique: bool
    missing_edge: tuple | None = None


def non_neighbour_cliques(g):
    """
    For each vertex v, check that V minus (N(v) and v) is a clique of g.

    Returns:
        (overall Verdict, list of NonNeighbourRecord). The verdict witness is
        (v, i, j) for the first vertex whose non-neighbours i, j are not adjacent.
    """
    records = []
    first_failure = None
    for v in range(g.n):
        others = tuple(u for u in range(g.n) if u != v and u not in g.neighbours[v])
        missing = next(
            ((i, j) for i, j in itertools.combinations(others, 2) if not g.has_edge(i, j)),
            None,
        )
        records.append(NonNeighbourRecord(v, others, missing is None, missing))
        if missing is not None and first_failure is None:
            first_failure = (v, *missing)

    if first_failure is not None:
        return Verdict(False, first_failure), records
    return Verdict(True), records


def gram_matrix(ps):
    """Matrix of inner products <v_i, v_j>, symmetric by construction."""
    gram = ps.points @ ps.points.T
    return (gram + gram.T) / 2


def is_almost_orthogonal(vectors, tol=None):
    """
    Check that among any three of the given vectors some two are orthogonal.

    Orthogonality is tested on the cosine of the angle, |cos| <= eps_unit.
    Vectors on the sphere of radius 1/sqrt(2) are orthogonal exactly when they
    are at unit distance, which links this to is_almost_equidistant.

    Raises:
        InputError: when a vector is zero (it has no direction)
    """
    tol = tol or TolerancePolicy()
    vectors = np.atleast_2d(np.asarray(vectors, dtype=float))
    if vectors.shape[0] < 3:
        return Verdict(True)

    norms = np.linalg.norm(vectors, axis=1)
    zero_rows = np.flatnonzero(norms <= tol.eps_coincide)
    if zero_rows.size:
        raise InputError("zero vector has no direction", field=f"vectors[{zero_rows[0]}]")

    unit = vectors / norms[:, None]
    cosines = np.abs(unit @ unit.T)
    not_orthogonal = cosines > tol.eps_unit
    np.fill_diagonal(not_orthogonal, False)

    witness = _first_triangle(not_orthogonal)
    return Verdict(witness is None, witness)


def is_isomorphic_exhaustive(g, h):
    """
    Decide graph isomorphism by trying every bijection (n! of them).

    Meant for tiny graphs such as the 7-vertex Moser spindle.
    """
    if g.n != h.n or len(g.edges) != len(h.edges):
        return False
    if g.n > ISOMORPHISM_LIMIT:
        raise InputError(
            f"exhaustive isomorphism is limited to {ISOMORPHISM_LIMIT} vertices",
            field="n",
        )
    if sorted(len(s) for s in g.neighbours) != sorted(len(s) for s in h.neighbours):
        return False

    target = h.edges
    for mapping in itertools.permutations(range(g.n)):
        if all(
            (min(mapping[i], mapping[j]), max(mapping[i], mapping[j])) in target
            for i, j in g.edges
        ):
            return True
    return False


def moser_spindle_graph():
    """
    The abstract Moser spindle: two rhombi (pairs of triangles sharing an edge)
    glued at vertex 0, with their far tips 3 and 6 joined.
    """
    edges = [
        (0, 1), (0, 2), (1, 2), (1, 3), (2, 3),
        (0, 4), (0, 5), (4, 5), (4, 6), (5, 6),
        (3, 6),
    ]
    return UnitDistanceGraph.from_edges(7, edges)


def pair_count(n):
    return math.comb(n, 2)
