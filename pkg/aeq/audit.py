"""
Step-by-step audit of the O(d^{4/3}) cardinality bound on a concrete
almost-equidistant point set.

Every inequality of the argument that holds exactly for finite inputs is
asserted (up to the identity slack); every O(.) statement is reported as a
dimensionless margin only, never asserted.

Stages, in order:
    max clique C (k = |C|)           -> |V| <= k^2 + k
    split N / V minus N              -> double count of X, bound on |V minus N|
    centre C at the origin           -> per-vertex norms and edge identity
    non-neighbour simplex per vertex -> Bessel inequality and its chain
    Gram matrix of N                 -> d >= rank A >= trace^2 / |A|_F^2
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy.spatial.distance import pdist, squareform

from aeq.clique import max_clique
from aeq.config import CLIQUE_SEARCH_LIMIT, RANK_SLACK, TolerancePolicy
from aeq.errors import AuditError, NotAlmostEquidistantError, SimplexError
from aeq.geometry import build_unit_distance_graph, gram_matrix, is_almost_equidistant
from aeq.rank import certify
from aeq.simplex import UnitSimplex, centroid, orthogonalization_point

logger = logging.getLogger(__name__)

EXACT_CHECK_NAMES = (
    "quadratic_count",
    "eq1_x_lower_bound",
    "eq1_x_upper_bound",
    "eq1_implied_bound",
    "claim1_edge_identity",
    "claim1_distance_to_ci",
    "claim1_ci_norm",
    "claim1_triangle_bound",
    "claim2_bessel",
    "claim2_chain",
    "claim2_orthogonal_height",
    "claim2_eq2_final",
    "claim2_centroid_expansion",
    "row_sum_decomposition",
    "rank_at_most_dim",
    "lemma0_within_rank",
)

NOTE_AFFINE_HULL = (
    "Claim 2: p - c is taken orthogonal to the affine hull of the non-neighbour "
    "simplex N minus N(v_i) (the set the construction is about), not of N(v_i)."
)
NOTE_TRIANGLE = (
    "Claim 1: '|v_i| = |v_i - c_i| + O(|c_i|)' is asserted as the exact triangle "
    "inequality ||v_i| - |v_i - c_i|| <= |c_i|."
)
NOTE_MEMBERSHIP = (
    "Clique vertices have |N(v) & C| = k - 1 and belong to N iff k - 1 >= threshold."
)


@dataclass(frozen=True)
class ExactCheck:
    name: str
    passed: bool
    conditional: bool = False
    detail: str = ""

    def to_dict(self):
        return {
            "name": self.name,
            "passed": self.passed,
            "conditional": self.conditional,
            "detail": self.detail,
        }


def _scale_claim1(k, d):
    return k ** (-1.0 / 3.0) * d ** (-1.0 / 3.0)


def _scale_claim2(k, d):
    return k ** (2.0 / 3.0) * d ** (-1.0 / 3.0)


def quadratic_count_check(n_v, k):
    """Every point outside C misses some clique vertex, so |V| <= k^2 + k."""
    bound = k * k + k
    return ExactCheck(
        "quadratic_count",
        n_v <= bound,
        detail=f"|V| = {n_v} <= k^2 + k = {bound}",
    )


@dataclass(frozen=True)
class Split:
    threshold: float
    N: list
    complement: list
    clique_neighbours: dict  # vertex -> |N(v) & C|


def split_N(g, clique, d):
    """
    N = {v : |N(v) & C| >= k - k^{4/3} d^{-2/3}}, threshold kept real-valued.
    """
    k = len(clique)
    threshold = k - k ** (4.0 / 3.0) * d ** (-2.0 / 3.0)
    members = set(clique)
    counts = {v: len(g.neighbours[v] & members) for v in range(g.n)}
    N = [v for v in range(g.n) if counts[v] >= threshold]
    complement = [v for v in range(g.n) if counts[v] < threshold]
    logger.info("Split: threshold %.6g, |N| = %d, |V - N| = %d", threshold, len(N), len(complement))
    return Split(threshold, N, complement, counts)


@dataclass(frozen=True)
class Eq1Result:
    x_count: int
    lhs: int
    rhs: float
    checks: list


def counting_bound_eq1(g, clique, N, d, conditional=False):
    """
    Double count X = {(u, v) in C x (V - N) : u not in N(v)}.

    A vertex never counts as its own neighbour, so a clique vertex outside N
    contributes the pair (v, v); the upper bound then carries one extra pair per
    such vertex and reduces to k^2 whenever C lies inside N.
    """
    k = len(clique)
    members = set(clique)
    in_N = set(N)
    outside = [v for v in range(g.n) if v not in in_N]
    slope = k ** (4.0 / 3.0) * d ** (-2.0 / 3.0)
    rhs = k ** (2.0 / 3.0) * d ** (2.0 / 3.0)

    per_vertex = {v: k - len(g.neighbours[v] & members) for v in outside}
    x_count = sum(per_vertex.values())
    clique_outside = len(members - in_N)
    upper = k * k + clique_outside

    if not outside:
        checks = [
            ExactCheck("eq1_x_lower_bound", True, conditional, "vacuous: V - N is empty"),
            ExactCheck("eq1_x_upper_bound", True, conditional, "vacuous: V - N is empty"),
            ExactCheck("eq1_implied_bound", True, conditional, "vacuous: V - N is empty"),
        ]
        return Eq1Result(0, 0, rhs, checks)

    short = [v for v, count in per_vertex.items() if not count > slope]
    lower_ok = not short and x_count > slope * len(outside)
    lower_detail = f"|X| = {x_count} > {slope:.12g} * |V - N| = {slope * len(outside):.12g}"
    if short:
        lower_detail += f"; vertices with too few non-neighbours in C: {short}"

    implied = upper / slope
    checks = [
        ExactCheck("eq1_x_lower_bound", lower_ok, conditional, lower_detail),
        ExactCheck(
            "eq1_x_upper_bound",
            x_count <= upper,
            conditional,
            f"|X| = {x_count} <= k^2 + |C - N| = {upper}",
        ),
        ExactCheck(
            "eq1_implied_bound",
            len(outside) < implied,
            conditional,
            f"|V - N| = {len(outside)} < {implied:.12g}"
            + (f" = k^(2/3) d^(2/3)" if clique_outside == 0 else " (C not inside N)"),
        ),
    ]
    return Eq1Result(x_count, len(outside), rhs, checks)


def _require_centered(centered, clique, tol):
    offset = float(np.linalg.norm(centroid(centered.points[clique])))
    if offset > tol.identity_slack:
        raise AuditError(f"clique centroid must sit at the origin (off by {offset:.3e})")


@dataclass(frozen=True)
class Claim1Result:
    norms: list  # |v_i|^2 for every v_i in N, in N order
    edge_inners: list  # {"i", "j", "inner"} for every edge inside N
    per_vertex: list
    checks: list
    norm_margin: float
    edge_margin: float
    notes: list


def claim1_quantities(centered, g, clique, N, tol=None):
    """
    Per-vertex distances to the clique-neighbour centroids c_i and the edge
    identity 2<v_i, v_j> = |v_i|^2 + |v_j|^2 - 1, on coordinates centred at C.
    """
    tol = tol or TolerancePolicy()
    _require_centered(centered, clique, tol)
    slack = tol.identity_slack
    k, d = len(clique), centered.dim
    members = set(clique)
    x = centered.points

    norms = {v: float(x[v] @ x[v]) for v in N}
    per_vertex, notes = [], []
    worst = {"distance": 0.0, "ci_norm": 0.0, "triangle": 0.0}
    for v in N:
        C_i = sorted(g.neighbours[v] & members)
        k_i = len(C_i)
        if k_i == 0:
            notes.append(f"Claim 1: vertex {v} has no neighbour in C; skipped")
            per_vertex.append({"vertex": v, "k_i": 0, "norm_sq": norms[v], "skipped": True})
            continue
        c_i = centroid(x[C_i])
        dist_ci = float(np.linalg.norm(x[v] - c_i))
        ci_norm = float(np.linalg.norm(c_i))
        expected_dist = math.sqrt(0.5 * (1.0 + 1.0 / k_i))
        expected_ci = math.sqrt(0.5 * (1.0 / k_i - 1.0 / k))
        worst["distance"] = max(worst["distance"], abs(dist_ci - expected_dist))
        worst["ci_norm"] = max(worst["ci_norm"], abs(ci_norm - expected_ci))
        worst["triangle"] = max(worst["triangle"], abs(math.sqrt(norms[v]) - dist_ci) - ci_norm)
        per_vertex.append({
            "vertex": v,
            "k_i": k_i,
            "norm_sq": norms[v],
            "dist_to_ci": dist_ci,
            "expected_dist_to_ci": expected_dist,
            "ci_norm": ci_norm,
            "expected_ci_norm": expected_ci,
            "skipped": False,
        })

    in_N = set(N)
    edge_inners, worst_identity = [], 0.0
    for i, j in g.sorted_edges():
        if i in in_N and j in in_N:
            inner = float(x[i] @ x[j])
            worst_identity = max(worst_identity, abs(2.0 * inner - (norms[i] + norms[j] - 1.0)))
            edge_inners.append({"i": i, "j": j, "inner": inner})

    checks = [
        ExactCheck(
            "claim1_edge_identity",
            worst_identity <= slack,
            detail=f"max |2<v_i,v_j> - (|v_i|^2 + |v_j|^2 - 1)| = {worst_identity:.3e} over {len(edge_inners)} edges",
        ),
        ExactCheck(
            "claim1_distance_to_ci",
            worst["distance"] <= slack,
            detail=f"max ||v_i - c_i| - sqrt((1 + 1/k_i)/2)| = {worst['distance']:.3e}",
        ),
        ExactCheck(
            "claim1_ci_norm",
            worst["ci_norm"] <= slack,
            detail=f"max ||c_i| - sqrt((1/k_i - 1/k)/2)| = {worst['ci_norm']:.3e}",
        ),
        ExactCheck(
            "claim1_triangle_bound",
            worst["triangle"] <= slack,
            detail=f"max (||v_i| - |v_i - c_i|| - |c_i|) = {worst['triangle']:.3e}",
        ),
    ]

    scale = _scale_claim1(k, d)
    norm_margin = max((abs(n - 0.5) for n in norms.values()), default=0.0) / scale
    edge_margin = max((abs(e["inner"]) for e in edge_inners), default=0.0) / scale
    return Claim1Result(
        norms=[norms[v] for v in N],
        edge_inners=edge_inners,
        per_vertex=per_vertex,
        checks=checks,
        norm_margin=norm_margin,
        edge_margin=edge_margin,
        notes=notes,
    )


@dataclass(frozen=True)
class Claim2Result:
    per_vertex: list
    checks: list
    max_t_c_sq: float
    non_neighbour_sums: dict  # vertex -> full sum of <v_i, v_j>^2 over non-neighbours in N


def _claim2_vertex(centered, g, i, N, tol):
    x = centered.points
    v = x[i]
    others = [j for j in N if j != i and j not in g.neighbours[i]]
    record = {"vertex": i, "t_full": len(others), "t": len(others), "non_neighbours": others, "dropped": None}
    if not others:
        record.update(sum_sq=0.0, full_sum_sq=0.0, vacuous=True)
        return record

    if not g.is_clique(others):
        raise AuditError(
            f"non-neighbours {others} of vertex {i} are not a unit simplex; "
            "the input is not almost-equidistant"
        )

    inners = {j: float(v @ x[j]) for j in others}
    kept = list(others)
    dropped_term = 0.0
    if len(kept) == centered.dim + 1:
        # Drop the non-neighbour with the largest |<v_i, v_j>|, first one on ties
        j_drop = max(kept, key=lambda j: (abs(inners[j]), -j))
        kept.remove(j_drop)
        dropped_term = inners[j_drop] ** 2
        record["dropped"] = {"vertex": j_drop, "term": dropped_term}

    try:
        simplex = UnitSimplex.from_point_set(centered, kept, tol)
        p = orthogonalization_point(simplex, tol)
    except SimplexError as e:
        raise AuditError(f"vertex {i}: non-neighbour simplex {kept}: {e}")

    t = len(kept)
    c = centroid(simplex.vertices)
    norm_sq = float(v @ v)
    height_sq = float((p - c) @ (p - c))
    c_sq = float(c @ c)

    sum_sq = sum(inners[j] ** 2 for j in kept)
    bessel_lhs = float(np.sum(((simplex.vertices - p) @ v) ** 2))
    kept_gram = simplex.vertices @ simplex.vertices.T
    expansion = float(np.sum(kept_gram)) / t**2

    record.update(
        vacuous=False,
        t=t,
        norm_sq=norm_sq,
        sum_sq=sum_sq,
        full_sum_sq=sum_sq + dropped_term,
        bessel_lhs=bessel_lhs,
        bessel_rhs=0.5 * norm_sq,
        chain_rhs=3.0 * (0.5 * norm_sq + t * norm_sq * height_sq + t * norm_sq * c_sq),
        eq2_rhs=3.0 * (norm_sq + t * norm_sq * c_sq),
        t_height_sq=t * height_sq,
        c_norm_sq=c_sq,
        c_norm_sq_expansion=expansion,
        t_c_sq=t * c_sq,
    )
    return record


def claim2_quantities(centered, g, N, tol=None):
    """
    Bessel inequality over the orthogonalised non-neighbour simplex of each
    v_i in N, and the Cauchy-Schwarz chain bounding sum <v_i, v_j>^2 over the
    non-neighbours.

    Raises:
        AuditError: when some non-neighbour set is not a unit simplex
    """
    tol = tol or TolerancePolicy()
    slack = tol.identity_slack
    records = [_claim2_vertex(centered, g, i, N, tol) for i in N]
    active = [r for r in records if not r["vacuous"]]

    def worst(key_lhs, key_rhs):
        return max((r[key_lhs] - r[key_rhs] for r in active), default=-math.inf)

    bessel_gap = worst("bessel_lhs", "bessel_rhs")
    chain_gap = worst("sum_sq", "chain_rhs")
    eq2_gap = worst("sum_sq", "eq2_rhs")
    height_dev = max((abs(r["t_height_sq"] - 0.5) for r in active), default=0.0)
    expansion_dev = max((abs(r["c_norm_sq"] - r["c_norm_sq_expansion"]) for r in active), default=0.0)

    def gap_detail(gap, what):
        if not active:
            return "vacuous: every vertex is adjacent to the rest of N"
        return f"max ({what}) = {gap:.3e} over {len(active)} vertices"

    checks = [
        ExactCheck("claim2_bessel", bessel_gap <= slack, detail=gap_detail(bessel_gap, "sum <v_i, v_j - p>^2 - |v_i|^2/2")),
        ExactCheck("claim2_chain", chain_gap <= slack, detail=gap_detail(chain_gap, "sum - 3(|v_i|^2/2 + t|v_i|^2|p-c|^2 + t|v_i|^2|c|^2)")),
        ExactCheck("claim2_orthogonal_height", height_dev <= slack, detail=f"max |t|p - c|^2 - 1/2| = {height_dev:.3e}"),
        ExactCheck("claim2_eq2_final", eq2_gap <= slack, detail=gap_detail(eq2_gap, "sum - 3(|v_i|^2 + t|v_i|^2|c|^2)")),
        ExactCheck("claim2_centroid_expansion", expansion_dev <= slack, detail=f"max ||c|^2 - expansion| = {expansion_dev:.3e}"),
    ]

    return Claim2Result(
        per_vertex=records,
        checks=checks,
        max_t_c_sq=max((r["t_c_sq"] for r in active), default=0.0),
        non_neighbour_sums={r["vertex"]: r["full_sum_sq"] for r in records},
    )


@dataclass(frozen=True)
class RankSandwich:
    certificate: object  # RankCertificate or None when N is empty
    checks: list
    row_sums: dict


def final_rank_sandwich(centered, g, N, non_neighbour_sums=None, tol=None):
    """
    d >= rank A >= (sum_i |v_i|^2)^2 / sum_ij <v_i, v_j>^2 for the Gram matrix A
    of N, plus the row decomposition
        sum_j <v_i, v_j>^2 = |v_i|^4 + (neighbours) + (non-neighbours).

    Raises:
        AuditError: when N is nonempty but its Gram matrix is zero
    """
    tol = tol or TolerancePolicy()
    if not N:
        vacuous = "vacuous: N is empty"
        return RankSandwich(
            None,
            [
                ExactCheck("row_sum_decomposition", True, detail=vacuous),
                ExactCheck("rank_at_most_dim", True, detail=vacuous),
                ExactCheck("lemma0_within_rank", True, detail=vacuous),
            ],
            {},
        )

    A = gram_matrix(centered.subset(N))
    if not np.any(A):
        raise AuditError("Gram matrix of N is zero (every point of N sits at the clique centroid)")

    squares = A * A
    # Inner products again, from pairwise distances only (polarisation)
    norms_sq = np.diag(A)
    dist_sq = squareform(pdist(centered.subset(N).points, "sqeuclidean"))
    from_distances = ((norms_sq[:, None] + norms_sq[None, :] - dist_sq) / 2) ** 2

    position = {v: a for a, v in enumerate(N)}
    row_sums, worst = {}, 0.0
    for a, v in enumerate(N):
        neighbours = [position[u] for u in g.neighbours[v] if u in position]
        non_neighbours = [b for b in range(len(N)) if b != a and N[b] not in g.neighbours[v]]
        parts = squares[a, a] + squares[a, neighbours].sum() + squares[a, non_neighbours].sum()
        row = float(from_distances[a].sum())
        worst = max(worst, abs(row - parts))
        if non_neighbour_sums is not None:
            worst = max(worst, abs(float(squares[a, non_neighbours].sum()) - non_neighbour_sums[v]))
        row_sums[v] = row

    certificate = certify(A, tol)
    rank = certificate.numeric_rank
    checks = [
        ExactCheck(
            "row_sum_decomposition",
            worst <= tol.identity_slack,
            detail=(
                f"max |row from distances - (|v_i|^4 + neighbours + non-neighbours)| = {worst:.3e}"
            ),
        ),
        ExactCheck("rank_at_most_dim", rank <= centered.dim, detail=f"rank A = {rank} <= d = {centered.dim}"),
        ExactCheck(
            "lemma0_within_rank",
            certificate.bound <= rank + RANK_SLACK,
            detail=f"trace^2/|A|_F^2 = {certificate.bound:.12g} <= rank + {RANK_SLACK}",
        ),
    ]
    return RankSandwich(certificate, checks, row_sums)


@dataclass
class AuditReport:
    n_total: int
    dim: int
    clique: list
    k: int
    clique_optimal: bool
    threshold: float
    main_branch_active: bool
    N_indices: list
    complement: list
    x_count: int
    eq1_lhs: int
    eq1_rhs: float
    claim1_norms: list
    claim1_edge_inners: list
    claim1_per_vertex: list
    claim2_per_vertex: list
    rank_cert: object
    exact_checks: list
    margins: dict
    notes: list = field(default_factory=list)

    @property
    def passed(self):
        return all(check.passed for check in self.exact_checks)

    def check(self, name):
        return next(c for c in self.exact_checks if c.name == name)

    def claim1_table(self):
        return pd.DataFrame(self.claim1_per_vertex)

    def claim2_table(self):
        columns = ["vertex", "t", "sum_sq", "full_sum_sq", "bessel_lhs", "bessel_rhs", "chain_rhs", "eq2_rhs"]
        df = pd.DataFrame(self.claim2_per_vertex)
        return df.reindex(columns=columns)

    def to_dict(self):
        return {
            "n_total": self.n_total,
            "dim": self.dim,
            "clique": self.clique,
            "k": self.k,
            "clique_optimal": self.clique_optimal,
            "threshold": self.threshold,
            "main_branch_active": self.main_branch_active,
            "N_indices": self.N_indices,
            "complement": self.complement,
            "x_count": self.x_count,
            "eq1_lhs": self.eq1_lhs,
            "eq1_rhs": self.eq1_rhs,
            "claim1_norms": self.claim1_norms,
            "claim1_edge_inners": self.claim1_edge_inners,
            "claim1_per_vertex": self.claim1_per_vertex,
            "claim2_per_vertex": self.claim2_per_vertex,
            "rank_cert": None if self.rank_cert is None else self.rank_cert.to_dict(),
            "exact_checks": [c.to_dict() for c in self.exact_checks],
            "margins": self.margins,
            "notes": self.notes,
            "passed": self.passed,
        }


def audit(ps, tol=None, heuristic_clique=False, clique_limit=CLIQUE_SEARCH_LIMIT):
    """
    Run every stage of the argument on ps.

    Raises:
        NotAlmostEquidistantError: with the smallest triple lacking a unit pair
        CliqueLimitError: more than clique_limit points without heuristic_clique
        AuditError: a stage precondition fails
    """
    tol = tol or TolerancePolicy()
    verdict = is_almost_equidistant(ps, tol)
    if not verdict:
        raise NotAlmostEquidistantError(verdict.witness)

    g = build_unit_distance_graph(ps, tol)
    found = max_clique(g, limit=clique_limit, heuristic=heuristic_clique)
    clique, k, d = found.vertices, found.size, ps.dim
    conditional = not found.optimal
    if k == 0:
        raise AuditError("empty point set")

    notes = [NOTE_AFFINE_HULL, NOTE_TRIANGLE, NOTE_MEMBERSHIP]
    main_branch_active = k > d ** (2.0 / 3.0)
    if not main_branch_active:
        notes.append(
            f"k = {k} <= d^(2/3) = {d ** (2.0 / 3.0):.6g}: the main branch of the argument "
            "is not needed; |V| <= k^2 + k already bounds the set. Later stages still run."
        )
    if conditional:
        notes.append("Heuristic clique: clique-dependent checks are conditional on clique optimality.")

    quadratic = quadratic_count_check(ps.n, k)
    quadratic = ExactCheck(quadratic.name, quadratic.passed, conditional, quadratic.detail)

    split = split_N(g, clique, d)
    eq1 = counting_bound_eq1(g, clique, split.N, d, conditional=conditional)
    if split.complement:
        notes.append(
            f"V - N = {split.complement}: each has fewer than {split.threshold:.6g} clique "
            "neighbours, so eq1 is not vacuous even when |V| is small."
        )
    if set(clique) - set(split.N):
        notes.append(
            "Clique vertices fall outside N; X counts each such vertex once against itself."
        )

    centered = ps.translated(-centroid(ps.points[clique]))
    claim1 = claim1_quantities(centered, g, clique, split.N, tol)
    claim2 = claim2_quantities(centered, g, split.N, tol)
    sandwich = final_rank_sandwich(centered, g, split.N, claim2.non_neighbour_sums, tol)
    notes.extend(claim1.notes)

    checks = [quadratic, *eq1.checks, *claim1.checks, *claim2.checks, *sandwich.checks]
    present = [c.name for c in checks]
    assert tuple(present) == EXACT_CHECK_NAMES, present

    n = len(split.N)
    claim2_scale = _scale_claim2(k, d)
    row_scale = n * k ** (-2.0 / 3.0) * d ** (-2.0 / 3.0) + claim2_scale
    margins = {
        "claim1_norm": claim1.norm_margin,
        "claim1_edge_inner": claim1.edge_margin,
        "claim2_non_neighbour_sum": max(claim2.non_neighbour_sums.values(), default=0.0) / claim2_scale,
        "claim2_max_t_c_sq": claim2.max_t_c_sq,
        "row_sum": max(sandwich.row_sums.values(), default=0.0) / row_scale,
        "N_size": n / (k ** (2.0 / 3.0) * d ** (2.0 / 3.0)),
        "complement_size": eq1.lhs / eq1.rhs,
        "V_size": ps.n / d ** (4.0 / 3.0),
    }

    report = AuditReport(
        n_total=ps.n,
        dim=d,
        clique=list(clique),
        k=k,
        clique_optimal=found.optimal,
        threshold=split.threshold,
        main_branch_active=main_branch_active,
        N_indices=list(split.N),
        complement=list(split.complement),
        x_count=eq1.x_count,
        eq1_lhs=eq1.lhs,
        eq1_rhs=eq1.rhs,
        claim1_norms=claim1.norms,
        claim1_edge_inners=claim1.edge_inners,
        claim1_per_vertex=claim1.per_vertex,
        claim2_per_vertex=claim2.per_vertex,
        rank_cert=sandwich.certificate,
        exact_checks=checks,
        margins=margins,
        notes=notes,
    )
    failed = [c.name for c in checks if not c.passed]
    if failed:
        logger.warning("Audit: failed exact checks %s", failed)
    else:
        logger.info("Audit: all %d exact checks pass", len(checks))
    return report
