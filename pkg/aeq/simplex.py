"""
Unit simplices and their centroid identities.

For a unit simplex C with k vertices and centroid c:
    |v - c|^2 = (1/2)(1 - 1/k)            for every vertex v
    <v - c, v' - c> = -1/(2k)             for distinct vertices v, v'
and for a sub-simplex F of l vertices with centroid f:
    |c - f|^2 = (1/2)(1/l - 1/k)
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.linalg import null_space

from aeq.config import TolerancePolicy
from aeq.errors import InputError, SimplexError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class UnitSimplex:
    """
    Vertices pairwise at unit distance, at most ambient_dim + 1 of them.

    Build through from_points / from_point_set, which validate the distances
    against a tolerance policy.
    """

    ambient_dim: int
    vertices: np.ndarray
    labels: tuple = field(default=())

    @property
    def cardinality(self):
        return self.vertices.shape[0]

    @classmethod
    def from_points(cls, points, tol=None, labels=None):
        tol = tol or TolerancePolicy()
        vertices = np.array(points, dtype=float)
        if vertices.ndim != 2 or vertices.shape[0] == 0:
            raise SimplexError("a unit simplex needs at least one vertex")
        k, dim = vertices.shape
        if k > dim + 1:
            raise SimplexError(
                f"{k} points cannot be pairwise at unit distance in R^{dim} "
                f"(at most {dim + 1})"
            )
        for i, j in itertools.combinations(range(k), 2):
            dist = float(np.linalg.norm(vertices[i] - vertices[j]))
            if abs(dist - 1.0) > tol.eps_unit:
                raise SimplexError(
                    f"vertices {i} and {j} are at distance {dist:.12g}, not 1"
                )
        vertices.setflags(write=False)
        labels = tuple(range(k)) if labels is None else tuple(int(x) for x in labels)
        return cls(ambient_dim=dim, vertices=vertices, labels=labels)

    @classmethod
    def from_point_set(cls, ps, indices, tol=None):
        indices = list(indices)
        return cls.from_points(ps.points[indices], tol=tol, labels=indices)


class Lemma1Values(NamedTuple):
    norm_sq: float
    inner: float
    inner_vacuous: bool


@dataclass(frozen=True)
class CentroidReport:
    centroid: np.ndarray
    vertex_norms_sq: list
    pair_inners: list
    expected: Lemma1Values
    max_deviation: float
    passed: bool

    @property
    def alpha(self):
        """Mean measured |v - c|^2."""
        return float(np.mean(self.vertex_norms_sq))

    @property
    def beta(self):
        """Mean measured <v - c, v' - c>, nan for a single vertex."""
        return float(np.mean(self.pair_inners)) if self.pair_inners else math.nan

    def to_dict(self):
        return {
            "centroid": self.centroid.tolist(),
            "vertex_norms_sq": list(self.vertex_norms_sq),
            "pair_inners": list(self.pair_inners),
            "expected_norm_sq": self.expected.norm_sq,
            "expected_inner": self.expected.inner,
            "max_deviation": self.max_deviation,
            "passed": self.passed,
        }


class Lemma2Check(NamedTuple):
    measured: float
    expected: float
    passed: bool


def centroid(points):
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[0] == 0:
        raise InputError("centroid of an empty point list", field="points")
    return points.mean(axis=0)


def lemma1_expected(k):
    """
    Closed-form |v - c|^2 and <v - c, v' - c> for a unit simplex of k vertices.

    For k = 1 the inner product has no pair to describe; it is still returned
    and flagged vacuous.
    """
    if k < 1:
        raise InputError(f"k must be at least 1, got {k}", field="k")
    return Lemma1Values(0.5 * (1.0 - 1.0 / k), -1.0 / (2.0 * k), k == 1)


def check_lemma1(s, tol=None):
    tol = tol or TolerancePolicy()
    k = s.cardinality
    c = centroid(s.vertices)
    shifted = s.vertices - c
    gram = shifted @ shifted.T

    norms_sq = [float(x) for x in np.diag(gram)]
    inners = [float(gram[i, j]) for i, j in itertools.combinations(range(k), 2)]
    expected = lemma1_expected(k)

    deviations = [abs(x - expected.norm_sq) for x in norms_sq]
    deviations += [abs(x - expected.inner) for x in inners]
    max_deviation = max(deviations)

    return CentroidReport(
        centroid=c,
        vertex_norms_sq=norms_sq,
        pair_inners=inners,
        expected=expected,
        max_deviation=max_deviation,
        passed=max_deviation <= tol.identity_slack,
    )


def lemma2_expected(k, l):
    """Closed-form |c - f|^2 for an l-vertex face of a k-vertex unit simplex."""
    if not 1 <= l <= k:
        raise InputError(f"need 1 <= l <= k, got l={l}, k={k}", field="l")
    return 0.5 * (1.0 / l - 1.0 / k)


def check_lemma2(s, subset_indices, tol=None):
    tol = tol or TolerancePolicy()
    subset = list(subset_indices)
    k = s.cardinality
    if not subset:
        raise InputError("subset must be nonempty", field="subset_indices")
    if len(set(subset)) != len(subset):
        raise InputError(f"repeated indices in {subset}", field="subset_indices")
    if any(not 0 <= i < k for i in subset):
        raise InputError(f"indices {subset} outside 0..{k - 1}", field="subset_indices")

    c = centroid(s.vertices)
    f = centroid(s.vertices[subset])
    measured = float(np.sum((c - f) ** 2))
    expected = lemma2_expected(k, len(subset))
    return Lemma2Check(measured, expected, abs(measured - expected) <= tol.identity_slack)


def normal_direction(s, tol=None):
    """
    Unit vector orthogonal to the affine hull of s, first nonzero coordinate
    positive.
    """
    tol = tol or TolerancePolicy()
    shifted = s.vertices - centroid(s.vertices)
    basis = null_space(shifted, rcond=tol.eps_rank)
    if basis.shape[1] == 0:
        raise SimplexError("affine hull has no normal direction")

    u = basis[:, 0]
    u = u / np.linalg.norm(u)
    leading = np.flatnonzero(np.abs(u) > tol.eps_unit)
    if u[leading[0]] < 0:
        u = -u
    return u


def orthogonalization_point(s, tol=None):
    """
    Point p above the centroid c of s with |p - c| = 1/sqrt(2k), so that the
    vectors v_j - p are pairwise orthogonal and each of length 1/sqrt(2).

    Raises:
        SimplexError: when k = d + 1 (the simplex spans R^d, drop a vertex
            first), or when the computed point misses a postcondition
    """
    tol = tol or TolerancePolicy()
    k = s.cardinality
    if k > s.ambient_dim:
        raise SimplexError(
            f"a {k}-vertex simplex spans R^{s.ambient_dim}; no normal direction "
            "exists. Remove one vertex first"
        )

    c = centroid(s.vertices)
    p = c + normal_direction(s, tol) / math.sqrt(2.0 * k)

    slack = tol.identity_slack
    height = float(np.linalg.norm(p - c))
    if abs(height - 1.0 / math.sqrt(2.0 * k)) > slack:
        raise SimplexError(f"|p - c| = {height:.12g}, expected 1/sqrt({2 * k})")
    spokes = s.vertices - p
    gram = spokes @ spokes.T
    lengths = np.sqrt(np.diag(gram))
    if np.max(np.abs(lengths - 1.0 / math.sqrt(2.0))) > slack:
        raise SimplexError("|v_j - p| differs from 1/sqrt(2)")
    off_diagonal = gram - np.diag(np.diag(gram))
    if np.max(np.abs(off_diagonal)) > slack:
        raise SimplexError("vectors v_j - p are not pairwise orthogonal")

    return p
