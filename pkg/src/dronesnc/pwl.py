"""Piecewise-linear approximations of the unit-profit surface.

Two approximations are provided:

* a bivariate grid over (incentive, distance) split into triangles, queried
  with three barycentric weights (at most three nonzero weights, always the
  corners of one triangle);
* a univariate continuous PWL fit of the best achievable profit as a function
  of distance, with free interior breakpoints chosen to minimize RMSE and
  queried with two adjacent interpolation weights.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .uil import DEFAULT_FIT, PersuasionFit, optimal_profit, unit_profit

PAPER_TAU_VERTICES = (0.05, 0.1, 0.2, 0.9)
PAPER_D_VERTICES = (5.0, 10.0, 20.0, 40.0, 200.0)


class GridQueryError(ValueError):
    pass


def _strictly_increasing(v):
    return all(b > a for a, b in zip(v, v[1:]))


@dataclass(frozen=True)
class PwlGrid:
    tau_vertices: tuple
    d_vertices: tuple
    values: np.ndarray = field(repr=False, compare=False)

    @property
    def shape(self):
        return self.values.shape

    @property
    def d_max(self) -> float:
        return self.d_vertices[-1]

    @property
    def d_min(self) -> float:
        return self.d_vertices[0]


def build_grid(tau_vertices=PAPER_TAU_VERTICES, d_vertices=PAPER_D_VERTICES,
               fit: PersuasionFit = DEFAULT_FIT) -> PwlGrid:
    tau = tuple(float(t) for t in tau_vertices)
    d = tuple(float(x) for x in d_vertices)
    if len(tau) < 2 or len(d) < 2:
        raise ValueError("need at least two vertices on each axis")
    if not (_strictly_increasing(tau) and _strictly_increasing(d)):
        raise ValueError("vertex lists must be strictly increasing")
    if tau[0] <= 0 or tau[-1] > 1:
        raise ValueError("incentive vertices must lie in (0, 1]")
    if d[0] <= 0:
        raise ValueError("distance vertices must be positive")
    values = np.array([[unit_profit(t, x, fit) for x in d] for t in tau])
    values.setflags(write=False)
    return PwlGrid(tau, d, values)


def _locate(vertices, x):
    # index of the cell [v_k, v_k+1] holding x; the top edge belongs to the last cell
    k = int(np.searchsorted(vertices, x, side="right")) - 1
    return min(max(k, 0), len(vertices) - 2)


def triangle_approx(grid: PwlGrid, tau: float, d: float):
    """Triangle-method interpolation of the profit surface at ``(tau, d)``.

    Returns ``(value, vertices, weights)`` with three ``(k, j)`` index pairs
    into the grid and their barycentric weights.
    """
    tv, dv = grid.tau_vertices, grid.d_vertices
    if not (tv[0] <= tau <= tv[-1] and dv[0] <= d <= dv[-1]):
        raise GridQueryError(f"query ({tau}, {d}) outside the grid rectangle")
    k, j = _locate(tv, tau), _locate(dv, d)
    s = (tau - tv[k]) / (tv[k + 1] - tv[k])
    t = (d - dv[j]) / (dv[j + 1] - dv[j])
    if t > s:
        verts = ((k, j), (k, j + 1), (k + 1, j + 1))
        weights = (1.0 - t, t - s, s)
    else:
        verts = ((k, j), (k + 1, j), (k + 1, j + 1))
        weights = (1.0 - s, s - t, t)
    value = sum(w * grid.values[v] for v, w in zip(verts, weights))
    return float(value), verts, weights


def best_on_cut(grid: PwlGrid, d_required: float):
    """Maximize the triangle surface over ``{(tau, d) in grid : d >= d_required}``.

    Returns ``(value, tau, d)``, or ``None`` when ``d_required`` exceeds the
    largest distance vertex. Below the first distance vertex the cut is lifted
    to it: a user may move farther than strictly needed.
    """
    tv, dv, V = grid.tau_vertices, grid.d_vertices, grid.values
    if d_required > dv[-1]:
        return None
    c = max(d_required, dv[0])
    j = _locate(dv, c)
    t = (c - dv[j]) / (dv[j + 1] - dv[j])

    # on the line d = c the surface is linear between columns and diagonal crossings
    col = (1.0 - t) * V[:, j] + t * V[:, j + 1]
    diag = (1.0 - t) * V[:-1, j] + t * V[1:, j + 1]
    tau_arr = np.asarray(tv)
    diag_tau = tau_arr[:-1] + t * (tau_arr[1:] - tau_arr[:-1])

    best = (col[0], tv[0], c)
    for val, ta in zip(col, tv):
        if val > best[0]:
            best = (val, ta, c)
    for val, ta in zip(diag, diag_tau):
        if val > best[0]:
            best = (val, float(ta), c)
    # vertices strictly above the cut
    for jj in range(j + 1, len(dv)):
        kk = int(np.argmax(V[:, jj]))
        if V[kk, jj] > best[0]:
            best = (V[kk, jj], tv[kk], dv[jj])
    return float(best[0]), float(best[1]), float(best[2])


def make_cut_profile(grid: PwlGrid):
    """Vectorized value part of :func:`best_on_cut` (0 beyond the grid).

    Per-cell line endpoints are tabulated once so repeated calls only
    interpolate and take a row max.
    """
    dv, V = np.asarray(grid.d_vertices), grid.values
    # on the cut through cell j: columns V[:, j] -> V[:, j+1] and diagonals V[k, j] -> V[k+1, j+1]
    lo = np.concatenate([V[:, :-1], V[:-1, :-1]]).T
    hi = np.concatenate([V[:, 1:], V[1:, 1:]]).T
    suffix = np.maximum.accumulate(V.max(axis=0)[::-1])[::-1]
    above = suffix[1:]      # best vertex in any row strictly above cell j
    last = len(dv) - 2

    def profile(d_required):
        d_required = np.asarray(d_required, dtype=float)
        c = np.maximum(d_required, dv[0])
        j = np.clip(np.searchsorted(dv, c, side="right") - 1, 0, last)
        t = np.clip((c - dv[j]) / (dv[j + 1] - dv[j]), 0.0, 1.0)
        line = (lo[j] + t[..., None] * (hi[j] - lo[j])).max(axis=-1)
        return np.where(d_required > dv[-1], 0.0, np.maximum(line, above[j]))

    return profile


def best_on_cut_profile(grid: PwlGrid, d_required):
    return make_cut_profile(grid)(d_required)


def cell_secant_error(grid: PwlGrid, fit: PersuasionFit = DEFAULT_FIT, probes: int = 25) -> float:
    """Largest deviation between the surface and its triangle interpolant on a probe grid."""
    worst = 0.0
    tv, dv = grid.tau_vertices, grid.d_vertices
    for k in range(len(tv) - 1):
        for j in range(len(dv) - 1):
            for ta in np.linspace(tv[k], tv[k + 1], probes):
                for dd in np.linspace(dv[j], dv[j + 1], probes):
                    approx, _, _ = triangle_approx(grid, ta, dd)
                    worst = max(worst, abs(approx - unit_profit(ta, dd, fit)))
    return worst


# --- univariate fit -------------------------------------------------------


@dataclass(frozen=True)
class Pwl1D:
    breakpoints: tuple
    node_values: tuple
    slopes: tuple
    intercepts: tuple
    rmse: float

    @property
    def d_u(self) -> float:
        return self.breakpoints[-1]

    def to_dict(self) -> dict:
        return {
            "breakpoints": list(self.breakpoints),
            "node_values": list(self.node_values),
            "slopes": list(self.slopes),
            "intercepts": list(self.intercepts),
            "rmse": self.rmse,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_nodes(cls, breakpoints, node_values, rmse=float("nan")) -> "Pwl1D":
        t = tuple(float(x) for x in breakpoints)
        y = tuple(float(x) for x in node_values)
        if len(t) != len(y) or len(t) < 2:
            raise ValueError("need matching breakpoints and node values, at least two")
        if not _strictly_increasing(t):
            raise ValueError("breakpoints must be strictly increasing")
        p = tuple((y[i + 1] - y[i]) / (t[i + 1] - t[i]) for i in range(len(t) - 1))
        s = tuple(y[i] - p[i] * t[i] for i in range(len(t) - 1))
        return cls(t, y, p, s, float(rmse))


def _hat_basis(t, x):
    eye = np.eye(len(t))
    return np.column_stack([np.interp(x, t, eye[i]) for i in range(len(t))])


def _ls_nodes(t, x, y):
    A = _hat_basis(t, x)
    nodes, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = A @ nodes - y
    return nodes, math.sqrt(float(np.mean(resid**2)))


def _interp_nodes(t, x, y, target):
    nodes = np.asarray(target(t), dtype=float)
    resid = np.interp(x, t, nodes) - y
    return nodes, math.sqrt(float(np.mean(resid**2)))


def _rmse_for_interior(interior, d_u, x, y, node_fn):
    t = np.concatenate(([0.0], np.sort(np.clip(interior, 0.0, d_u)), [d_u]))
    if np.any(np.diff(t) <= 0):
        return np.inf
    return node_fn(t, x, y)[1]


def fit_pwl1d(n_breakpoints: int = 3, d_u: float = 200.0, target=None,
              fit: PersuasionFit = DEFAULT_FIT, samples: int = 2000, starts: int = 8,
              seed: int = 0, nodes: str = "interpolate") -> Pwl1D:
    """Continuous PWL fit with free interior breakpoints minimizing sampled RMSE.

    ``target`` is a vectorized callable on ``[0, d_u]``; by default the best
    achievable unit profit ``d -> Pi(tau*(d), d)``. End breakpoints are pinned
    at 0 and ``d_u``; the interior ones are found by multi-start Nelder-Mead
    followed by a coordinate polish with step ``0.1 %`` of ``d_u``.

    With ``nodes="interpolate"`` the fit passes through the target at every
    breakpoint, so SOS2 weights combine true profit values. ``nodes="lstsq"``
    instead regresses the node values for each breakpoint configuration.
    """
    if n_breakpoints < 2:
        raise ValueError("need at least two breakpoints")
    if d_u <= 0:
        raise ValueError("d_u must be positive")
    if n_breakpoints > samples:
        raise ValueError("more breakpoints than samples")
    if target is None:
        def target(d):
            return optimal_profit(d, fit)

    if nodes == "interpolate":
        def node_fn(t, x, y):
            return _interp_nodes(t, x, y, target)
    elif nodes == "lstsq":
        node_fn = _ls_nodes
    else:
        raise ValueError(f"unknown node mode {nodes!r}")

    x = np.linspace(0.0, d_u, samples)
    y = np.asarray(target(x), dtype=float)
    n_int = n_breakpoints - 2

    if n_int == 0:
        t = np.array([0.0, d_u])
        vals, rmse = node_fn(t, x, y)
        return Pwl1D.from_nodes(t, vals, rmse)

    rng = np.random.default_rng(seed)
    inits = [np.linspace(0.0, d_u, n_breakpoints)[1:-1]]
    # geometric spacing suits curves that bend near the origin
    inits.append(d_u * (np.geomspace(1.0, 11.0, n_breakpoints)[1:-1] - 1.0) / 10.0)
    inits += [np.sort(rng.uniform(0.0, d_u, n_int)) for _ in range(max(starts - 2, 0))]

    best_int, best_rmse = None, np.inf
    for x0 in inits:
        res = optimize.minimize(_rmse_for_interior, x0, args=(d_u, x, y, node_fn), method="Nelder-Mead",
                                options={"xatol": 1e-6 * d_u, "fatol": 1e-14, "maxiter": 4000})
        if res.fun < best_rmse:
            best_int, best_rmse = np.sort(np.clip(res.x, 0.0, d_u)), res.fun

    step = 1e-3 * d_u
    improved = True
    while improved:
        improved = False
        for i in range(n_int):
            for sgn in (-1.0, 1.0):
                trial = best_int.copy()
                trial[i] += sgn * step
                r = _rmse_for_interior(trial, d_u, x, y, node_fn)
                if r < best_rmse:
                    best_int, best_rmse, improved = np.sort(trial), r, True

    t = np.concatenate(([0.0], best_int, [d_u]))
    vals, rmse = node_fn(t, x, y)
    return Pwl1D.from_nodes(t, vals, rmse)


def pwl1d_rmse(fit1d: Pwl1D, target, samples: int = 2000) -> float:
    x = np.linspace(0.0, fit1d.d_u, samples)
    approx = np.interp(x, fit1d.breakpoints, fit1d.node_values)
    return math.sqrt(float(np.mean((approx - np.asarray(target(x))) ** 2)))


def eval_pwl1d(fit1d: Pwl1D, d: float):
    """Evaluate the fit at ``d`` and return ``(value, lambdas)``.

    ``lambdas`` has one entry per breakpoint, with at most two adjacent
    nonzeros summing to one.
    """
    t = fit1d.breakpoints
    if not (t[0] <= d <= t[-1]):
        raise GridQueryError(f"distance {d} outside [{t[0]}, {t[-1]}]")
    lam = np.zeros(len(t))
    j = _locate(t, d)
    w = (d - t[j]) / (t[j + 1] - t[j])
    if w == 0.0:
        lam[j] = 1.0
    elif w == 1.0:
        lam[j + 1] = 1.0
    else:
        lam[j], lam[j + 1] = 1.0 - w, w
    value = float(lam @ np.asarray(fit1d.node_values))
    return value, lam


def eval_pwl1d_many(fit1d: Pwl1D, d):
    return np.interp(d, fit1d.breakpoints, fit1d.node_values)
