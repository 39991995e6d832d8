import logging
from dataclasses import asdict, dataclass

import numpy as np
from scipy.linalg import svdvals

from aeq.config import RANK_SLACK, TolerancePolicy
from aeq.errors import InputError
from aeq.geometry import gram_matrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RankCertificate:
    """
    Trace/Frobenius lower bound on the rank of a symmetric matrix, next to its
    numerical rank. passes iff bound <= numeric_rank + RANK_SLACK.
    """

    trace: float
    frobenius_sq: float
    bound: float
    numeric_rank: int
    passes: bool

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class RankDimensionCheck:
    numeric_rank: int
    dim: int
    passed: bool

    def to_dict(self):
        return asdict(self)


def _as_symmetric(A, tol):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InputError(f"expected a square matrix, got shape {A.shape}", field="A")
    if not np.isfinite(A).all():
        raise InputError("matrix has non-finite entries", field="A")
    asymmetry = float(np.max(np.abs(A - A.T))) if A.size else 0.0
    if asymmetry > tol.identity_slack:
        raise InputError(f"matrix is not symmetric (max |A - A^T| = {asymmetry:.3e})", field="A")
    return A


def lemma0_bound(A, tol=None):
    """
    rank A >= (sum_i a_ii)^2 / sum_ij a_ij^2 for any nonzero symmetric A.

    Raises:
        InputError: for the zero matrix or an asymmetric one
    """
    tol = tol or TolerancePolicy()
    A = _as_symmetric(A, tol)
    frobenius_sq = float(np.sum(A * A))
    if frobenius_sq == 0.0:
        raise InputError("rank bound is undefined for the zero matrix", field="A")
    return float(np.trace(A)) ** 2 / frobenius_sq


def numerical_rank(A, tol=None):
    """Number of singular values above eps_rank times the largest one."""
    tol = tol or TolerancePolicy()
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.size == 0:
        return 0
    singular_values = svdvals(A)
    largest = singular_values[0]
    if largest == 0.0:
        return 0
    return int(np.count_nonzero(singular_values > tol.eps_rank * largest))


def certify(A, tol=None):
    tol = tol or TolerancePolicy()
    A = _as_symmetric(A, tol)
    bound = lemma0_bound(A, tol)
    rank = numerical_rank(A, tol)
    certificate = RankCertificate(
        trace=float(np.trace(A)),
        frobenius_sq=float(np.sum(A * A)),
        bound=bound,
        numeric_rank=rank,
        passes=bound <= rank + RANK_SLACK,
    )
    if not certificate.passes:
        logger.warning("Rank bound %.6g exceeds numerical rank %d", bound, rank)
    return certificate


def gram_rank_dimension_check(ps, tol=None):
    """The Gram matrix of points in R^d has rank at most d."""
    rank = numerical_rank(gram_matrix(ps), tol)
    return RankDimensionCheck(numeric_rank=rank, dim=ps.dim, passed=rank <= ps.dim)
