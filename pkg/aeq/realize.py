"""
Numerical realization of a graph as a unit-distance graph in R^d.

Stress of a placement x (n x d):
    S(x) = sum_{ij in E} (|x_i - x_j|^2 - 1)^2 + sum_{ij not in E} hinge(|x_i - x_j|)^2
with hinge(r) = max(0, 2 eps_unit - |r - 1|): a non-edge is only pushed out of
the unit tolerance band, never towards any target length.

Each restart descends with L-BFGS-B on S and its analytic gradient, then
polishes the residual vector with a trust-region least-squares solve (analytic
Jacobian) so edge lengths reach the eps_unit band.
"""

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares, minimize

from aeq.config import DEFAULT_RESTARTS, DEFAULT_SEED, TolerancePolicy
from aeq.errors import AeqError, InputError
from aeq.geometry import PointSet, build_unit_distance_graph

logger = logging.getLogger(__name__)

# Restarts whose descent ends above this stress are not worth polishing
POLISH_THRESHOLD = 1e-3
MAX_DESCENT_ITERATIONS = 5000


@dataclass(frozen=True)
class RealizationResult:
    success: bool
    best_stress: float
    restart: int
    restarts_run: int
    points: object = None  # PointSet of the best restart
    reason: str = ""

    def to_dict(self):
        doc = {
            "success": self.success,
            "best_stress": self.best_stress,
            "restart": self.restart,
            "restarts_run": self.restarts_run,
            "reason": self.reason,
        }
        if self.points is not None:
            doc["point_set"] = self.points.to_dict()
        return doc


class StressModel:
    """Stress, gradient and residuals of a graph placement in R^dim."""

    def __init__(self, g, dim, tol=None):
        self.n = g.n
        self.dim = dim
        self.tol = tol or TolerancePolicy()
        self.band = 2.0 * self.tol.eps_unit

        edges = np.array(g.sorted_edges(), dtype=int).reshape(-1, 2)
        adj = g.adjacency_matrix()
        upper_i, upper_j = np.triu_indices(self.n, k=1)
        non_edge = ~adj[upper_i, upper_j]
        self.edge_i, self.edge_j = edges[:, 0], edges[:, 1]
        self.free_i, self.free_j = upper_i[non_edge], upper_j[non_edge]

    def _hinge(self, x):
        diff = x[self.free_i] - x[self.free_j]
        r = np.linalg.norm(diff, axis=1)
        h = np.maximum(0.0, self.band - np.abs(r - 1.0))
        return diff, r, h

    def residuals(self, flat):
        x = flat.reshape(self.n, self.dim)
        diff = x[self.edge_i] - x[self.edge_j]
        _, _, h = self._hinge(x)
        return np.concatenate([np.sum(diff * diff, axis=1) - 1.0, h])

    def stress(self, flat):
        res = self.residuals(flat)
        return float(res @ res)

    def stress_and_gradient(self, flat):
        x = flat.reshape(self.n, self.dim)
        grad = np.zeros_like(x)

        diff = x[self.edge_i] - x[self.edge_j]
        res = np.sum(diff * diff, axis=1) - 1.0
        # d/dx_i (|x_i - x_j|^2 - 1)^2 = 4 res (x_i - x_j)
        pull = 4.0 * res[:, None] * diff
        np.add.at(grad, self.edge_i, pull)
        np.add.at(grad, self.edge_j, -pull)

        fdiff, r, h = self._hinge(x)
        active = h > 0
        stress = float(res @ res + h @ h)
        if active.any():
            # d/dx_i h^2 = -2 h sign(r - 1) (x_i - x_j) / r inside the band
            scale = -2.0 * h[active] * np.sign(r[active] - 1.0) / np.maximum(r[active], 1e-300)
            push = scale[:, None] * fdiff[active]
            np.add.at(grad, self.free_i[active], push)
            np.add.at(grad, self.free_j[active], -push)

        return stress, grad.ravel()

    def jacobian(self, flat):
        x = flat.reshape(self.n, self.dim)
        n_edges = self.edge_i.size
        jac = np.zeros((n_edges + self.free_i.size, self.n * self.dim))

        diff = x[self.edge_i] - x[self.edge_j]
        rows = np.arange(n_edges)
        for axis in range(self.dim):
            jac[rows, self.edge_i * self.dim + axis] = 2.0 * diff[:, axis]
            jac[rows, self.edge_j * self.dim + axis] = -2.0 * diff[:, axis]

        fdiff, r, h = self._hinge(x)
        active = np.flatnonzero(h > 0)
        if active.size:
            scale = -np.sign(r[active] - 1.0) / np.maximum(r[active], 1e-300)
            for axis in range(self.dim):
                value = scale * fdiff[active, axis]
                jac[n_edges + active, self.free_i[active] * self.dim + axis] = value
                jac[n_edges + active, self.free_j[active] * self.dim + axis] = -value
        return jac


def _run_restart(model, seed_seq, index):
    rng = np.random.default_rng(seed_seq)
    start = rng.uniform(-1.0, 1.0, size=model.n * model.dim)

    descent = minimize(
        model.stress_and_gradient,
        start,
        jac=True,
        method="L-BFGS-B",
        options={"maxiter": MAX_DESCENT_ITERATIONS, "ftol": 1e-16, "gtol": 1e-14},
    )
    flat = descent.x
    stress = model.stress(flat)

    if stress < POLISH_THRESHOLD and model.residuals(flat).size:
        polished = least_squares(
            model.residuals, flat, jac=model.jacobian, method="trf",
            xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=200,
        )
        if model.stress(polished.x) <= stress:
            flat = polished.x
            stress = model.stress(flat)

    logger.debug("Restart %d: stress %.3e", index, stress)
    return index, stress, flat.reshape(model.n, model.dim)


def _accept(g, coords, dim, stress, tol):
    """Return (PointSet, reason); reason is empty when the placement realizes g."""
    ps = PointSet(dim, coords)
    if stress >= tol.eps_residual:
        return ps, f"stress {stress:.3e} not below eps_residual"
    try:
        recovered = build_unit_distance_graph(ps, tol)
    except AeqError as e:
        return ps, str(e)
    if recovered.edges != g.edges:
        return ps, "unit-distance graph of the placement differs from the input"
    return ps, ""


def realize_graph(g, d, restarts=DEFAULT_RESTARTS, seed=DEFAULT_SEED, tol=None, threads=None):
    """
    Place the vertices of g in R^d so that exactly the edges are unit pairs.

    Restarts draw uniform starts in [-1, 1]^d from independent child seeds of
    `seed`; they run in batches of `threads`. The lowest-index successful restart
    is returned, otherwise the lowest-index restart of least stress, so the
    result does not depend on the thread count.

    Returns:
        RealizationResult; failure is a value, not an exception
    """
    tol = tol or TolerancePolicy()
    if d < 1:
        raise InputError(f"dimension must be positive, got {d}", field="dim")
    if g.n == 0:
        raise InputError("graph has no vertices", field="n")
    if restarts < 1:
        raise InputError(f"need at least one restart, got {restarts}", field="restarts")

    model = StressModel(g, d, tol)
    children = np.random.SeedSequence(seed).spawn(restarts)
    workers = max(1, threads or os.cpu_count() or 1)

    best = (math.inf, -1, None, "")
    ran = 0
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for start in range(0, restarts, workers):
            batch = range(start, min(start + workers, restarts))
            outcomes = list(pool.map(lambda i: _run_restart(model, children[i], i), batch))
            ran += len(outcomes)
            for index, stress, coords in outcomes:
                ps, reason = _accept(g, coords, d, stress, tol)
                if not reason:
                    logger.info("Realized %d vertices in R^%d at restart %d", g.n, d, index)
                    return RealizationResult(True, stress, index, ran, ps)
                if stress < best[0]:
                    best = (stress, index, ps, reason)

    stress, index, ps, reason = best
    logger.info("No realization in R^%d after %d restarts; best stress %.3e", d, ran, stress)
    return RealizationResult(False, stress, index, ran, ps, reason)
