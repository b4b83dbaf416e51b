"""Joint and semi-joint configuration.

For a fixed drone center every user's best decision is independent of the
others: covered users count 1, users within ``d_u`` of the coverage edge get
the best offer available to them, the rest count 0. The joint problems
therefore reduce to maximizing a piecewise-smooth function of the 2-D center,
which is done here by multi-start direct search seeded from the arrangement
vertices of the coverage disks.

Three per-user band profiles are supported:

``exact``
    best true unit profit, ``Pi(tau*(d), d)``;
``jsnc``
    best value of the triangle-method surface reachable with ``d >= r - R``;
``semi-jsnc``
    the univariate PWL fit of the best profit.
"""

import math
import time
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .geometry import (circle_box_intersections, circle_pair_intersections, min_enclosing_circle,
                       mixed_circle_intersections)
from .model import Bounds, Placement, RegionFlags, SncSolution, offers_and_moves, solution_objective, users_xy
from .pwl import Pwl1D, PwlGrid, best_on_cut, eval_pwl1d_many, make_cut_profile
from .uil import DEFAULT_FIT, PersuasionFit, optimal_profit
from .usnc import COVER_TOL, candidate_centers


class ConvergenceWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class SolverOptions:
    random_starts: int = 32
    kmeans_max_k: int = 3
    refine_top: int = 48
    simplex_size: float = 10.0
    xatol: float = 0.01
    max_iter: int = 500
    seed: int = 0


DEFAULT_OPTIONS = SolverOptions()


@dataclass(frozen=True)
class BandObjective:
    """Per-center objective ``sum(u_i) + sum(profile(d_i))`` over band users."""

    radius: float
    d_u: float
    profile: object
    kind: str
    kinks: tuple = ()   # band distances where the profile bends; d_u is implied

    def per_user(self, r):
        r = np.asarray(r, dtype=float)
        d = r - self.radius
        inside = d <= COVER_TOL
        band = ~inside & (d <= self.d_u)
        val = np.zeros_like(r)
        val[inside] = 1.0
        if band.any():
            val[band] = self.profile(d[band])
        return val

    def score_many(self, centers, xy):
        centers = np.asarray(centers, dtype=float).reshape(-1, 2)
        r = np.hypot(centers[:, None, 0] - xy[None, :, 0], centers[:, None, 1] - xy[None, :, 1])
        return self.per_user(r).sum(axis=1)

    def score(self, center, xy):
        r = np.hypot(xy[:, 0] - center[0], xy[:, 1] - center[1])
        return float(self.per_user(r).sum())


def exact_objective(radius, d_u, fit: PersuasionFit = DEFAULT_FIT) -> BandObjective:
    return BandObjective(radius, d_u, lambda d: optimal_profit(d, fit), "exact")


def jsnc_objective(radius, d_u, grid: PwlGrid) -> BandObjective:
    du = min(d_u, grid.d_max)
    kinks = tuple(d for d in grid.d_vertices if d < du)
    return BandObjective(radius, du, make_cut_profile(grid), "jsnc", kinks)


def semi_objective(radius, d_u, fit1d: Pwl1D) -> BandObjective:
    du = min(d_u, fit1d.d_u)
    kinks = tuple(t for t in fit1d.breakpoints if 0 < t < du)
    return BandObjective(radius, du, lambda d: eval_pwl1d_many(fit1d, d), "semi-jsnc", kinks)


def exact_profit(center, users, radius, d_u, fit: PersuasionFit = DEFAULT_FIT):
    """Best expected profit of a drone at ``center`` serving a disk of ``radius``.

    Returns ``(objective, per_user, d)`` where ``d`` is each user's distance to
    the coverage edge (0 for covered users).
    """
    xy = users_xy(users)
    r = np.hypot(xy[:, 0] - center[0], xy[:, 1] - center[1])
    per_user = exact_objective(radius, d_u, fit).per_user(r)
    d = np.maximum(r - radius, 0.0)
    return float(per_user.sum()), per_user, d


def displacement_vectors(users, center, d):
    """Radial moves of length ``d_i`` from each user toward ``center``."""
    out = []
    for u, di in zip(users, d):
        dx, dy = center[0] - u.x, center[1] - u.y
        n = math.hypot(dx, dy)
        out.append((0.0, 0.0) if n == 0 or di <= 0 else (dx * di / n, dy * di / n))
    return np.array(out).reshape(-1, 2)


# --- center search -------------------------------------------------------


def _kmeans_centroids(xy, k_max, rng):
    out = []
    for k in range(1, min(k_max, len(xy)) + 1):
        idx = rng.choice(len(xy), size=k, replace=False)
        cent = xy[idx].copy()
        for _ in range(50):
            lab = np.argmin(((xy[:, None, :] - cent[None]) ** 2).sum(-1), axis=1)
            new = np.array([xy[lab == c].mean(axis=0) if np.any(lab == c) else cent[c] for c in range(k)])
            if np.allclose(new, cent):
                break
            cent = new
        out.append(cent)
    return np.concatenate(out) if out else np.empty((0, 2))


def _arrangement_seeds(objective: BandObjective, xy, bounds: Bounds):
    """Vertices of the arrangement of every circle on which the objective bends or jumps."""
    radii = sorted({objective.radius} | {objective.radius + k for k in objective.kinks}
                   | {objective.radius + objective.d_u})
    out = [candidate_centers(xy, bounds, radii[0])]
    for a, r1 in enumerate(radii):
        if a:
            out.append(circle_pair_intersections(xy, r1))
            out.append(circle_box_intersections(xy, r1, bounds.x_l, bounds.x_u, bounds.y_l, bounds.y_u))
        for r2 in radii[a + 1:]:
            out.append(mixed_circle_intersections(xy, r1, r2))
    c = np.concatenate(out)
    inside = ((c[:, 0] >= bounds.x_l - 1e-9) & (c[:, 0] <= bounds.x_u + 1e-9)
              & (c[:, 1] >= bounds.y_l - 1e-9) & (c[:, 1] <= bounds.y_u + 1e-9))
    return bounds.clip(c[inside])


def _compass_polish(f, x, fx, bounds, steps=(1.0, 0.1, 0.01, 0.001)):
    dirs = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)]
    for step in steps:
        improved = True
        while improved:
            improved = False
            for dx, dy in dirs:
                cand = bounds.clip(np.array([x[0] + dx * step, x[1] + dy * step]))
                fc = f(cand)
                if fc > fx + 1e-12:
                    x, fx, improved = cand, fc, True
    return x, fx


def optimize_center(objective: BandObjective, xy, bounds: Bounds, opts: SolverOptions = DEFAULT_OPTIONS):
    """Maximize ``objective`` over centers in ``bounds``.

    Returns ``(center, value, stats)``. Ties within 1e-9 prefer more covered
    users, then a smaller enclosing circle of the covered users, then the
    lexicographically smallest center.
    """
    rng = np.random.default_rng(opts.seed)
    geo = _arrangement_seeds(objective, xy, bounds)
    km = bounds.clip(_kmeans_centroids(xy, opts.kmeans_max_k, rng)) if len(xy) else np.empty((0, 2))
    rand = np.column_stack([rng.uniform(bounds.x_l, bounds.x_u, opts.random_starts),
                            rng.uniform(bounds.y_l, bounds.y_u, opts.random_starts)])
    structured = np.concatenate([geo, km])
    s_scores = objective.score_many(structured, xy)
    order = np.lexsort((structured[:, 1], structured[:, 0], -s_scores))
    picked, seen = [], set()
    for i in order:
        key = (round(structured[i, 0], 6), round(structured[i, 1], 6))
        if key in seen:
            continue
        seen.add(key)
        picked.append(structured[i])
        if len(picked) >= opts.refine_top:
            break
    seeds = np.concatenate([np.array(picked).reshape(-1, 2), rand])

    def neg(c):
        return -objective.score(bounds.clip(c), xy)

    lo = np.array([bounds.x_l, bounds.y_l])
    hi = np.array([bounds.x_u, bounds.y_u])
    results = []
    total_iter = 0
    for x0 in seeds:
        simplex = np.array([x0, x0 + (opts.simplex_size, 0.0), x0 + (0.0, opts.simplex_size)])
        simplex = np.clip(simplex, lo, hi)
        if np.linalg.matrix_rank(simplex[1:] - simplex[0]) < 2:
            simplex = np.clip(np.array([x0, x0 - (opts.simplex_size, 0.0), x0 - (0.0, opts.simplex_size)]), lo, hi)
        res = optimize.minimize(neg, x0, method="Nelder-Mead", bounds=list(zip(lo, hi)),
                                options={"initial_simplex": simplex, "xatol": opts.xatol,
                                         "fatol": 1e-12, "maxiter": opts.max_iter})
        total_iter += res.nit
        x = bounds.clip(res.x)
        fx = objective.score(x, xy)
        f0 = objective.score(x0, xy)
        if f0 > fx:
            x, fx = bounds.clip(x0), f0
        results.append((fx, x, res.nit < opts.max_iter))

    best_val = max(r[0] for r in results)
    finalists = [r for r in results if r[0] >= best_val - 1e-9]

    def tie_key(item):
        fx, x, _ = item
        r = np.hypot(xy[:, 0] - x[0], xy[:, 1] - x[1])
        cov = r <= objective.radius + COVER_TOL
        mec = min_enclosing_circle(xy[cov])
        return (-int(cov.sum()), round(mec[2], 9) if mec else 0.0, float(x[0]), float(x[1]))

    fx, x, converged = min(finalists, key=tie_key)
    if not converged:
        warnings.warn("center refinement hit the iteration cap; returning best so far",
                      ConvergenceWarning, stacklevel=3)
    x, fx = _compass_polish(lambda c: objective.score(c, xy), x, fx, bounds)
    stats = {
        "candidates": int(len(geo)),
        "seeds": int(len(seeds)),
        "refinements": len(results),
        "iterations": int(total_iter),
        "converged": bool(converged),
    }
    return x, fx, stats


# --- solvers ---------------------------------------------------------------


def _placement(center, radius, alpha_star, bounds):
    h = alpha_star * radius
    if not (bounds.h_l <= h <= bounds.h_u):
        h = min(max(h, bounds.h_l), bounds.h_u)
    return Placement(float(center[0]), float(center[1]), float(h), float(radius), float(h / radius))


def solve_jsnc(users, bounds: Bounds, gamma_star: float, d_u: float, grid: PwlGrid,
               alpha_star: float = 1.0, fit: PersuasionFit = DEFAULT_FIT,
               opts: SolverOptions = DEFAULT_OPTIONS) -> SncSolution:
    """Joint placement and incentive design on the triangle-method surface."""
    if grid.d_max < d_u - 1e-9:
        raise ValueError("grid must span distances up to d_u")
    t0 = time.perf_counter()
    xy = users_xy(users)
    obj = jsnc_objective(gamma_star, d_u, grid)
    center, approx, stats = optimize_center(obj, xy, bounds, opts)

    r = np.hypot(xy[:, 0] - center[0], xy[:, 1] - center[1])
    u = r <= gamma_star + COVER_TOL
    need = r - gamma_star
    w = ~u & (need <= obj.d_u)
    taus, dists = [None] * len(users), np.zeros(len(users))
    for i in np.flatnonzero(w):
        _, tau, d = best_on_cut(grid, float(need[i]))
        taus[i], dists[i] = tau, d
    offers, moves = offers_and_moves(users, center, gamma_star, dists, taus, fit, w)
    flags = RegionFlags(tuple(bool(x) for x in u), tuple(bool(x) for x in w))
    stats["wall_time"] = time.perf_counter() - t0
    return SncSolution("jsnc", _placement(center, gamma_star, alpha_star, bounds), flags, offers, moves,
                       solution_objective(flags, offers), float(approx), stats)


def solve_semi_jsnc(users, bounds: Bounds, gamma_star: float, d_u: float, fit1d: Pwl1D,
                    alpha_star: float = 1.0, fit: PersuasionFit = DEFAULT_FIT,
                    opts: SolverOptions = DEFAULT_OPTIONS) -> SncSolution:
    """Placement on the univariate PWL profit proxy, then closed-form incentives."""
    if fit1d.d_u < d_u - 1e-9:
        raise ValueError("PWL fit must span [0, d_u]")
    t0 = time.perf_counter()
    xy = users_xy(users)
    obj = semi_objective(gamma_star, d_u, fit1d)
    center, approx, stats = optimize_center(obj, xy, bounds, opts)

    r = np.hypot(xy[:, 0] - center[0], xy[:, 1] - center[1])
    u = r <= gamma_star + COVER_TOL
    d = np.maximum(r - gamma_star, 0.0)
    w = ~u & (d <= obj.d_u)
    offers, moves = offers_and_moves(users, center, gamma_star, d, [None] * len(users), fit, w)
    flags = RegionFlags(tuple(bool(x) for x in u), tuple(bool(x) for x in w))
    stats["wall_time"] = time.perf_counter() - t0
    return SncSolution("semi-jsnc", _placement(center, gamma_star, alpha_star, bounds), flags, offers,
                       moves, solution_objective(flags, offers), float(approx), stats)


def solve_exact(users, bounds: Bounds, gamma_star: float, d_u: float, alpha_star: float = 1.0,
                fit: PersuasionFit = DEFAULT_FIT, opts: SolverOptions = DEFAULT_OPTIONS) -> SncSolution:
    """Same center search on the exact profit (reference upper curve)."""
    t0 = time.perf_counter()
    xy = users_xy(users)
    obj = exact_objective(gamma_star, d_u, fit)
    center, val, stats = optimize_center(obj, xy, bounds, opts)
    r = np.hypot(xy[:, 0] - center[0], xy[:, 1] - center[1])
    u = r <= gamma_star + COVER_TOL
    d = np.maximum(r - gamma_star, 0.0)
    w = ~u & (d <= d_u)
    offers, moves = offers_and_moves(users, center, gamma_star, d, [None] * len(users), fit, w)
    flags = RegionFlags(tuple(bool(x) for x in u), tuple(bool(x) for x in w))
    stats["wall_time"] = time.perf_counter() - t0
    return SncSolution("exact-oracle", _placement(center, gamma_star, alpha_star, bounds), flags, offers,
                       moves, solution_objective(flags, offers), float(val), stats)


def brute_force_center(users, bounds: Bounds, gamma_star: float, d_u: float,
                       fit: PersuasionFit = DEFAULT_FIT, grid_step: float = 1.0,
                       objective_kind: str = "exact", grid: PwlGrid | None = None,
                       fit1d: Pwl1D | None = None, chunk: int = 100_000):
    """Exhaustive center scan; returns ``((x, y), objective)``. Test oracle."""
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")
    if objective_kind == "exact":
        obj = exact_objective(gamma_star, d_u, fit)
    elif objective_kind == "jsnc":
        obj = jsnc_objective(gamma_star, d_u, grid)
    elif objective_kind == "semi-jsnc":
        obj = semi_objective(gamma_star, d_u, fit1d)
    else:
        raise ValueError(f"unknown objective kind {objective_kind!r}")
    xy = users_xy(users)
    xs = np.arange(bounds.x_l, bounds.x_u + 0.5 * grid_step, grid_step)
    ys = np.arange(bounds.y_l, bounds.y_u + 0.5 * grid_step, grid_step)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    best, where = -np.inf, None
    for s in range(0, len(pts), chunk):
        p = pts[s:s + chunk]
        v = obj.score_many(p, xy)
        i = int(np.argmax(v))
        if v[i] > best:
            best, where = float(v[i]), (float(p[i, 0]), float(p[i, 1]))
    return where, best


def surrogate_value(solution: SncSolution, users, d_u, grid=None, fit1d=None):
    """Re-evaluate a solution's center under a surrogate objective."""
    xy = users_xy(users)
    c = solution.placement.center
    if grid is not None:
        return jsnc_objective(solution.placement.radius, d_u, grid).score(c, xy)
    return semi_objective(solution.placement.radius, d_u, fit1d).score(c, xy)


__all__ = [
    "BandObjective", "SolverOptions", "brute_force_center", "displacement_vectors",
    "exact_objective", "exact_profit", "jsnc_objective", "optimize_center", "semi_objective",
    "solve_exact", "solve_jsnc", "solve_semi_jsnc",
]
