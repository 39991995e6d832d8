"""Almost-equidistant point sets: verifier, constructions, realizer and proof audit."""

from aeq.audit import AuditReport, audit
from aeq.clique import CliqueResult, greedy_clique, max_clique
from aeq.config import TolerancePolicy, resolve_tolerance
from aeq.constructions import (
    double_simplex,
    generalized_spindle,
    moser_spindle,
    orthogonal_frames,
    unit_simplex_points,
)
from aeq.errors import (
    AeqError,
    AuditError,
    CliqueLimitError,
    CoincidentPointsError,
    InputError,
    NotAlmostEquidistantError,
    SimplexError,
    ToleranceError,
)
from aeq.geometry import (
    PointSet,
    UnitDistanceGraph,
    Verdict,
    build_unit_distance_graph,
    complement_triangle_free,
    is_almost_equidistant,
    is_almost_orthogonal,
)
from aeq.realize import RealizationResult, realize_graph

__all__ = [
    "AeqError",
    "AuditError",
    "AuditReport",
    "CliqueLimitError",
    "CliqueResult",
    "CoincidentPointsError",
    "InputError",
    "NotAlmostEquidistantError",
    "PointSet",
    "RealizationResult",
    "SimplexError",
    "ToleranceError",
    "TolerancePolicy",
    "UnitDistanceGraph",
    "Verdict",
    "audit",
    "build_unit_distance_graph",
    "complement_triangle_free",
    "double_simplex",
    "generalized_spindle",
    "greedy_clique",
    "is_almost_equidistant",
    "is_almost_orthogonal",
    "max_clique",
    "moser_spindle",
    "orthogonal_frames",
    "realize_graph",
    "resolve_tolerance",
    "unit_simplex_points",
]
