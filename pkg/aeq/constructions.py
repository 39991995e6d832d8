"""
Deterministic generators for almost-equidistant point sets.

unit simplex      m <= d+1 points pairwise at distance 1
double simplex    a unit (d-1)-simplex facet plus its two mirror apexes
spindle           two double simplices sharing an apex, the second one rotated
                  until the far apexes are at distance 1 (2d+3 points)
orthogonal frames two orthonormal frames scaled to the sphere of radius 1/sqrt(2)
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from aeq.config import TolerancePolicy
from aeq.errors import InputError
from aeq.geometry import PointSet, pair_count

logger = logging.getLogger(__name__)

CONSTRUCTION_KINDS = ("simplex", "double-simplex", "spindle", "moser", "frames")


def _require_dim(d, minimum, kind):
    if isinstance(d, bool) or not isinstance(d, (int, np.integer)) or d < minimum:
        raise InputError(f"{kind} needs an integer dimension >= {minimum}, got {d!r}", field="dim")


def unit_simplex_points(m, d):
    """
    m points in R^d pairwise at distance 1.

    The first min(m, d) points are e_i / sqrt(2); the (d+1)-th, when asked for,
    is t * (1, ..., 1) with t = (1 + sqrt(d+1)) / (sqrt(2) d).
    """
    _require_dim(d, 1, "simplex")
    if not 1 <= m <= d + 1:
        raise InputError(f"a unit simplex in R^{d} has 1..{d + 1} points, asked for {m}", field="m")

    points = np.eye(d)[: min(m, d)] / math.sqrt(2.0)
    if m == d + 1:
        t = (1.0 + math.sqrt(d + 1.0)) / (math.sqrt(2.0) * d)
        points = np.vstack([points, np.full(d, t)])
    return PointSet(d, points)


def apex_separation(d):
    """Distance between the two apexes over a unit (d-1)-simplex facet in R^d."""
    return math.sqrt(2.0 * (d + 1) / d)


def _double_simplex_parts(d):
    """Facet (d x d), apex a, apex b of the double simplex in R^d."""
    facet = unit_simplex_points(d, d).points
    f = facet.mean(axis=0)
    normal = np.full(d, 1.0 / math.sqrt(d))
    # Facet circumradius^2 is (1/2)(1 - 1/d), so the apex height^2 is (1/2)(1 + 1/d)
    height = math.sqrt(0.5 * (1.0 + 1.0 / d))
    return facet, f + height * normal, f - height * normal


def double_simplex(d):
    """
    d + 2 points: facet x_1..x_d, then apex a, then apex b.

    Every apex is at unit distance from the whole facet; (a, b) is the only
    non-unit pair, at distance sqrt(2(d+1)/d).
    """
    _require_dim(d, 2, "double-simplex")
    facet, a, b = _double_simplex_parts(d)
    return PointSet(d, np.vstack([facet, a, b]))


@dataclass(frozen=True)
class SpindleSpec:
    """
    Rotation turning the first double simplex of a spindle into the second.

    u1 runs along the apex axis (a to b), u2 from the facet centroid to the first
    facet vertex; the copy is rotated about a by `angle` in the (u1, u2) plane.
    """

    dim: int
    u1: np.ndarray
    u2: np.ndarray
    delta: float
    angle: float

    @classmethod
    def for_dimension(cls, d):
        _require_dim(d, 2, "spindle")
        facet, a, b = _double_simplex_parts(d)
        delta = float(np.linalg.norm(b - a))
        u1 = (b - a) / delta
        to_vertex = facet[0] - facet.mean(axis=0)
        u2 = to_vertex / np.linalg.norm(to_vertex)
        # Rotating b about a by angle moves it by 2 delta sin(angle/2) = 1
        angle = 2.0 * math.asin(1.0 / (2.0 * delta))
        spec = cls(dim=d, u1=u1, u2=u2, delta=delta, angle=angle)
        spec.validate()
        return spec

    def validate(self):
        if abs(float(self.u1 @ self.u2)) > 1e-12:
            raise InputError("rotation plane directions are not orthogonal", field="u2")
        if abs(self.delta - apex_separation(self.dim)) > 1e-12:
            raise InputError(f"apex separation {self.delta} is off", field="delta")
        if not 0.0 < self.angle < math.pi:
            raise InputError(f"rotation angle {self.angle} outside (0, pi)", field="angle")

    def rotate(self, vectors):
        """Rotate row vectors by angle in the (u1, u2) plane."""
        vectors = np.atleast_2d(vectors)
        x1 = vectors @ self.u1
        x2 = vectors @ self.u2
        cos, sin = math.cos(self.angle), math.sin(self.angle)
        return (
            vectors
            + np.outer(x1 * (cos - 1.0) - x2 * sin, self.u1)
            + np.outer(x1 * sin + x2 * (cos - 1.0), self.u2)
        )


def generalized_spindle(d, tol=None):
    """
    2d + 3 points: shared apex a, first facet, first far apex b_1, rotated
    facet, rotated far apex b_2. |b_1 - b_2| = 1.

    Raises:
        InputError: when rotation makes two points coincide
    """
    spec = SpindleSpec.for_dimension(d)
    facet, a, b = _double_simplex_parts(d)
    copy = np.vstack([facet, b])
    rotated = a + spec.rotate(copy - a)

    ps = PointSet(d, np.vstack([a, copy, rotated]))
    try:
        ps.check_distinct(tol or TolerancePolicy())
    except InputError as e:
        raise InputError(f"spindle construction failed in R^{d}: {e}", field="spindle")
    logger.debug("Spindle in R^%d: delta=%.12g angle=%.12g", d, spec.delta, spec.angle)
    return ps


def spindle_edge_count(d):
    """Unit pairs of the spindle: all pairs minus (d+1)^2 + 1 non-unit ones."""
    return pair_count(2 * d + 3) - ((d + 1) ** 2 + 1)


def moser_spindle():
    return generalized_spindle(2)


def orthogonal_frames(d):
    """
    2d points on the sphere of radius 1/sqrt(2): the standard frame and its
    image under the Householder reflection along w = (2, 1, ..., 1).

    Within a frame all pairs are at unit distance, so any three points contain
    a unit pair.
    """
    _require_dim(d, 2, "frames")
    w = np.ones(d)
    w[0] = 2.0
    reflection = np.eye(d) - 2.0 * np.outer(w, w) / (w @ w)
    frame = np.eye(d) / math.sqrt(2.0)
    return PointSet(d, np.vstack([frame, frame @ reflection.T]))


def construct(kind, d=None, m=None):
    """Dispatch a construction by CLI kind name."""
    if kind == "simplex":
        _require_dim(d, 1, kind)
        return unit_simplex_points(d + 1 if m is None else m, d)
    if kind == "double-simplex":
        return double_simplex(d)
    if kind == "spindle":
        return generalized_spindle(d)
    if kind == "moser":
        return moser_spindle()
    if kind == "frames":
        return orthogonal_frames(d)
    raise InputError(f"unknown construction {kind!r}; choose from {CONSTRUCTION_KINDS}", field="kind")
