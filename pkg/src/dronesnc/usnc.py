"""Uncoordinated configuration: place the drone for maximum coverage, then
attach the optimal incentive to every user in the incentive band.

The maximum-coverage disk is found exactly by enumerating the vertices of the
disk arrangement (user positions, pairwise circle intersections, circle/box
crossings and box corners); some optimal center is always among them.
"""

import time
import warnings
from dataclasses import dataclass

import numpy as np

from . import channel
from .geometry import circle_box_intersections, circle_pair_intersections, min_enclosing_circle
from .model import Bounds, Placement, RegionFlags, SncSolution, offers_and_moves, solution_objective, users_xy
from .uil import DEFAULT_FIT, PersuasionFit

R_MIN = 1.0
COVER_TOL = 1e-9
# slack when counting users on arrangement vertices, which sit on circles up to rounding
CANDIDATE_TOL = 1e-6


class EmptyFeasibleRegion(ValueError):
    pass


@dataclass(frozen=True)
class CoverageAssignment:
    covered: tuple
    distances: tuple

    @property
    def count(self) -> int:
        return int(sum(self.covered))


def candidate_centers(xy, bounds: Bounds, radius: float) -> np.ndarray:
    """Arrangement vertices of the radius-``radius`` disks that lie inside ``bounds``."""
    corners = np.array([(bounds.x_l, bounds.y_l), (bounds.x_l, bounds.y_u),
                        (bounds.x_u, bounds.y_l), (bounds.x_u, bounds.y_u)])
    cands = np.concatenate([
        xy,
        circle_pair_intersections(xy, radius),
        circle_box_intersections(xy, radius, bounds.x_l, bounds.x_u, bounds.y_l, bounds.y_u),
        corners,
    ])
    inside = ((cands[:, 0] >= bounds.x_l - 1e-9) & (cands[:, 0] <= bounds.x_u + 1e-9)
              & (cands[:, 1] >= bounds.y_l - 1e-9) & (cands[:, 1] <= bounds.y_u + 1e-9))
    return bounds.clip(cands[inside])


def coverage_matrix(centers, xy, radius, tol=CANDIDATE_TOL):
    d = np.hypot(centers[:, None, 0] - xy[None, :, 0], centers[:, None, 1] - xy[None, :, 1])
    return d <= radius + tol


def _altitude(radius, alpha_star, bounds, env, cfg):
    h = alpha_star * radius
    if bounds.h_l <= h <= bounds.h_u:
        return h, alpha_star
    if env is None or cfg is None:
        raise ValueError("altitude bounds violated and no channel model given to re-solve alpha")
    alpha = channel.best_feasible_alpha(radius, bounds.h_l, bounds.h_u, env, cfg)
    if channel.gamma_of_alpha(alpha, env, cfg) < radius:
        warnings.warn("altitude bounds leave the covered users outside the QoS radius",
                      RuntimeWarning, stacklevel=3)
    return alpha * radius, alpha


def solve_usnc(users, bounds: Bounds, gamma_star: float, alpha_star: float = 1.0,
               env=None, cfg=None):
    """Maximum-coverage placement with a disk of radius ``gamma_star``.

    Returns ``(Placement, CoverageAssignment)``. Among count-optimal centers the
    one whose covered set has the smallest enclosing circle wins, then the
    lexicographically smallest center. The drone is then moved to the center
    of that smallest enclosing circle and its radius shrunk to it.
    """
    placement, assignment, _ = _solve(users, bounds, gamma_star, alpha_star, env, cfg)
    return placement, assignment


def _solve(users, bounds, gamma_star, alpha_star, env, cfg):
    if not users:
        raise ValueError("need at least one user")
    if gamma_star <= 0:
        raise ValueError("gamma_star must be positive")
    xy = users_xy(users)
    cands = candidate_centers(xy, bounds, gamma_star)
    if len(cands) == 0:
        raise EmptyFeasibleRegion("no candidate center inside the bounds box")

    cover = coverage_matrix(cands, xy, gamma_star)
    counts = cover.sum(axis=1)
    top = np.flatnonzero(counts == counts.max())

    mec_cache = {}
    best_key, best = None, None
    for idx in top:
        key_set = cover[idx].tobytes()
        if key_set not in mec_cache:
            mec_cache[key_set] = min_enclosing_circle(xy[cover[idx]])
        mec = mec_cache[key_set]
        r_enc = mec[2] if mec is not None else 0.0
        key = (round(r_enc, 9), float(cands[idx, 0]), float(cands[idx, 1]))
        if best_key is None or key < best_key:
            best_key, best = key, (idx, mec)

    idx, mec = best
    center = cands[idx]
    chosen = cover[idx]
    if mec is not None and mec[2] <= gamma_star + CANDIDATE_TOL and bounds.contains(mec[0], mec[1]):
        center = np.array([mec[0], mec[1]])

    r = np.hypot(xy[:, 0] - center[0], xy[:, 1] - center[1])
    radius = float(r[chosen].max()) if chosen.any() else 0.0
    radius = max(radius, R_MIN)
    covered = r <= radius + COVER_TOL
    h, alpha = _altitude(radius, alpha_star, bounds, env, cfg)
    placement = Placement(float(center[0]), float(center[1]), float(h), radius, float(alpha))
    stats = {"candidates": int(len(cands)), "distinct_sets": len(mec_cache)}
    return placement, CoverageAssignment(tuple(bool(c) for c in covered), tuple(float(x) for x in r)), stats


def attach_incentives(placement: Placement, assignment: CoverageAssignment, users, d_u: float,
                      fit: PersuasionFit = DEFAULT_FIT, stats=None) -> SncSolution:
    """Offer the optimal incentive to each uncovered user within ``d_u`` of the coverage edge."""
    r = np.asarray(assignment.distances)
    u = np.asarray(assignment.covered)
    d = np.maximum(r - placement.radius, 0.0)
    w = ~u & (d > 0) & (d <= d_u)
    offers, moves = offers_and_moves(users, placement.center, placement.radius, d, [None] * len(users), fit, w)
    flags = RegionFlags(tuple(bool(x) for x in u), tuple(bool(x) for x in w))
    return SncSolution("usnc", placement, flags, offers, moves, solution_objective(flags, offers),
                       None, dict(stats or {}))


def usnc(users, bounds: Bounds, gamma_star: float, alpha_star: float, d_u: float,
         fit: PersuasionFit = DEFAULT_FIT, env=None, cfg=None) -> SncSolution:
    """Placement followed by the incentive post-pass."""
    t0 = time.perf_counter()
    placement, assignment, stats = _solve(users, bounds, gamma_star, alpha_star, env, cfg)
    sol = attach_incentives(placement, assignment, users, d_u, fit, stats)
    sol.stats["wall_time"] = time.perf_counter() - t0
    return sol


def no_uil_baseline(users, bounds: Bounds, gamma_star: float, alpha_star: float,
                    env=None, cfg=None) -> SncSolution:
    """USNC placement without any incentive offers: profit is the covered count."""
    t0 = time.perf_counter()
    placement, assignment, stats = _solve(users, bounds, gamma_star, alpha_star, env, cfg)
    flags = RegionFlags(assignment.covered, tuple(False for _ in users))
    stats["wall_time"] = time.perf_counter() - t0
    return SncSolution("no-uil", placement, flags, (), (), float(assignment.count), None, stats)


def brute_force_usnc(users, bounds: Bounds, gamma_star: float, grid_step: float = 1.0,
                     chunk: int = 200_000):
    """Exhaustive grid scan of the bounds box; returns ``(best_count, (x, y))``."""
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")
    xy = users_xy(users)
    xs = np.arange(bounds.x_l, bounds.x_u + 0.5 * grid_step, grid_step)
    ys = np.arange(bounds.y_l, bounds.y_u + 0.5 * grid_step, grid_step)
    best, where = -1, None
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    r2 = gamma_star**2
    for s in range(0, len(pts), chunk):
        p = pts[s:s + chunk]
        cnt = np.zeros(len(p), dtype=int)
        for x, y in xy:
            cnt += ((p[:, 0] - x) ** 2 + (p[:, 1] - y) ** 2) <= r2
        i = int(np.argmax(cnt))
        if cnt[i] > best:
            best, where = int(cnt[i]), (float(p[i, 0]), float(p[i, 1]))
    return best, where
