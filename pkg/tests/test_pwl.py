import numpy as np
import pytest
from hypothesis import given, strategies as st

from dronesnc.pwl import (PAPER_D_VERTICES, PAPER_TAU_VERTICES, GridQueryError, Pwl1D, _rmse_for_interior,
                          _interp_nodes, best_on_cut, best_on_cut_profile, build_grid, cell_secant_error,
                          eval_pwl1d, eval_pwl1d_many, fit_pwl1d, pwl1d_rmse, triangle_approx)
from dronesnc.uil import optimal_profit, unit_profit

GRID = build_grid()
FIT3 = fit_pwl1d(3, 200.0)
FIT4 = fit_pwl1d(4, 200.0)

tau_in = st.floats(PAPER_TAU_VERTICES[0], PAPER_TAU_VERTICES[-1])
d_in = st.floats(PAPER_D_VERTICES[0], PAPER_D_VERTICES[-1])


def plane_oracle(p0, p1, p2, x, y):
    # z = A x + B y + C through three points
    M = np.array([[p[0], p[1], 1.0] for p in (p0, p1, p2)])
    coef = np.linalg.solve(M, np.array([p0[2], p1[2], p2[2]]))
    return coef @ np.array([x, y, 1.0])


def test_paper_grid_shape_and_values():
    assert GRID.shape == (4, 5)
    for k, t in enumerate(PAPER_TAU_VERTICES):
        for j, d in enumerate(PAPER_D_VERTICES):
            assert GRID.values[k, j] == unit_profit(t, d)


def test_grid_is_immutable():
    with pytest.raises(ValueError):
        GRID.values[0, 0] = 1.0


def test_single_cell_grid():
    g = build_grid((0.1, 0.5), (10.0, 50.0))
    assert g.values.tolist() == [[unit_profit(a, b) for b in (10.0, 50.0)] for a in (0.1, 0.5)]


@pytest.mark.parametrize("tau,d", [((0.2, 0.1), (5, 10)), ((0.1, 0.2), (10, 5)), ((0.0, 0.5), (5, 10)),
                                   ((0.1, 1.2), (5, 10)), ((0.1, 0.2), (-1.0, 10))])
def test_build_grid_rejects_bad_vertices(tau, d):
    with pytest.raises(ValueError):
        build_grid(tau, d)


def test_vertices_are_exact():
    for k in range(4):
        for j in range(5):
            val, verts, w = triangle_approx(GRID, PAPER_TAU_VERTICES[k], PAPER_D_VERTICES[j])
            assert val == GRID.values[k, j]
            assert dict(zip(verts, w))[(k, j)] == pytest.approx(1.0)


def test_diagonal_midpoint_averages():
    for k in range(3):
        for j in range(4):
            t = 0.5 * (PAPER_TAU_VERTICES[k] + PAPER_TAU_VERTICES[k + 1])
            d = 0.5 * (PAPER_D_VERTICES[j] + PAPER_D_VERTICES[j + 1])
            val, _, _ = triangle_approx(GRID, t, d)
            assert val == pytest.approx(0.5 * (GRID.values[k, j] + GRID.values[k + 1, j + 1]), abs=1e-12)


@given(tau=tau_in, d=d_in)
def test_triangle_matches_plane_and_weights(tau, d):
    val, verts, w = triangle_approx(GRID, tau, d)
    assert len(verts) == 3 and sum(w) == pytest.approx(1.0)
    assert all(-1e-12 <= x <= 1 + 1e-12 for x in w)
    ks = sorted({v[0] for v in verts})
    js = sorted({v[1] for v in verts})
    # SOS3: one cell, and exactly one of its two triangles
    assert len(ks) == 2 and ks[1] == ks[0] + 1 and len(js) == 2 and js[1] == js[0] + 1
    k, j = ks[0], js[0]
    assert (k, j) in verts and (k + 1, j + 1) in verts
    assert ((k, j + 1) in verts) != ((k + 1, j) in verts)
    # the weights reproduce the query point
    assert sum(wi * PAPER_TAU_VERTICES[v[0]] for v, wi in zip(verts, w)) == pytest.approx(tau, abs=1e-12)
    assert sum(wi * PAPER_D_VERTICES[v[1]] for v, wi in zip(verts, w)) == pytest.approx(d, abs=1e-9)
    pts = [(PAPER_TAU_VERTICES[a], PAPER_D_VERTICES[b], GRID.values[a, b]) for a, b in verts]
    assert val == pytest.approx(plane_oracle(*pts, tau, d), abs=1e-10)


def test_triangle_selection_rule():
    # just above the diagonal of the first cell -> T1 uses (k, j+1)
    _, verts, _ = triangle_approx(GRID, 0.075, 7.6)
    assert (0, 1) in verts
    _, verts, _ = triangle_approx(GRID, 0.075, 7.4)
    assert (1, 0) in verts


def test_sos3_on_random_queries():
    rng = np.random.default_rng(0)
    taus = rng.uniform(0.05, 0.9, 10_000)
    ds = rng.uniform(5, 200, 10_000)
    for t, d in zip(taus, ds):
        _, verts, w = triangle_approx(GRID, t, d)
        assert len(verts) == 3 and abs(sum(w) - 1) < 1e-12


def test_out_of_rectangle_query():
    with pytest.raises(GridQueryError):
        triangle_approx(GRID, 0.01, 10.0)
    with pytest.raises(GridQueryError):
        triangle_approx(GRID, 0.5, 250.0)


def _probe_error(grid, n=30):
    worst = 0.0
    for t in np.linspace(grid.tau_vertices[0], grid.tau_vertices[-1], n):
        for d in np.linspace(grid.d_vertices[0], grid.d_vertices[-1], n):
            worst = max(worst, abs(triangle_approx(grid, t, d)[0] - unit_profit(t, d)))
    return worst


def test_error_bounded_by_secant_deviation():
    assert _probe_error(GRID) <= cell_secant_error(GRID, probes=40) + 1e-3


def test_refinement_does_not_increase_error():
    tv = np.linspace(0.05, 0.9, 4)
    dv = np.linspace(5, 200, 5)
    coarse = build_grid(tv, dv)
    fine = build_grid(np.linspace(0.05, 0.9, 7), np.linspace(5, 200, 9))
    assert _probe_error(fine) <= _probe_error(coarse) + 1e-12


@given(c=st.floats(0.0, 200.0))
def test_best_on_cut_is_feasible_and_maximal(c):
    val, tau, d = best_on_cut(GRID, c)
    assert d >= max(c, 5.0) - 1e-9
    assert triangle_approx(GRID, tau, d)[0] == pytest.approx(val, abs=1e-12)
    # dense scan of the feasible part of the surface
    ts = np.linspace(0.05, 0.9, 60)
    ds = np.linspace(max(c, 5.0), 200.0, 60)
    scan = max(triangle_approx(GRID, t, x)[0] for t in ts for x in ds)
    assert val >= scan - 1e-12
    assert best_on_cut_profile(GRID, np.array([c]))[0] == pytest.approx(val, abs=1e-12)


def test_best_on_cut_beyond_grid():
    assert best_on_cut(GRID, 200.5) is None
    assert best_on_cut_profile(GRID, np.array([250.0]))[0] == 0.0


# --- univariate ---------------------------------------------------------------


def test_fit_shape_and_monotone_rmse():
    assert len(FIT3.breakpoints) == 3
    assert FIT3.breakpoints[0] == 0.0 and FIT3.breakpoints[-1] == 200.0
    assert 0.0 < FIT3.breakpoints[1] < 200.0
    assert FIT4.rmse <= FIT3.rmse
    assert FIT3.rmse == pytest.approx(pwl1d_rmse(FIT3, optimal_profit), rel=1e-9)


def test_left_node_near_limit():
    assert abs(FIT3.node_values[0] - 1.0) <= 0.02


def test_fit_is_coordinatewise_local_optimum():
    x = np.linspace(0.0, 200.0, 2000)
    y = optimal_profit(x)
    node_fn = lambda t, xx, yy: _interp_nodes(t, xx, yy, optimal_profit)
    for fit in (FIT3, FIT4):
        interior = np.array(fit.breakpoints[1:-1])
        base = _rmse_for_interior(interior, 200.0, x, y, node_fn)
        for i in range(len(interior)):
            for s in (-0.2, 0.2):
                p = interior.copy()
                p[i] += s
                assert _rmse_for_interior(p, 200.0, x, y, node_fn) >= base - 1e-12


def test_continuity():
    for fit in (FIT3, FIT4, fit_pwl1d(3, 200.0, nodes="lstsq")):
        for j in range(len(fit.slopes) - 1):
            t = fit.breakpoints[j + 1]
            left = fit.slopes[j] * t + fit.intercepts[j]
            right = fit.slopes[j + 1] * t + fit.intercepts[j + 1]
            assert left == pytest.approx(right, abs=1e-9)


def test_lstsq_nodes_fit_better():
    assert fit_pwl1d(3, 200.0, nodes="lstsq").rmse <= FIT3.rmse


def test_linear_target_is_exact():
    fit = fit_pwl1d(3, 100.0, target=lambda d: 0.5 - 0.002 * np.asarray(d))
    assert fit.rmse == pytest.approx(0.0, abs=1e-12)


def test_too_many_breakpoints():
    with pytest.raises(ValueError):
        fit_pwl1d(10, 200.0, samples=5)
    with pytest.raises(ValueError):
        fit_pwl1d(1, 200.0)


def test_eval_at_breakpoints_and_midpoints():
    t = FIT4.breakpoints
    for j, tj in enumerate(t):
        val, lam = eval_pwl1d(FIT4, tj)
        assert val == pytest.approx(FIT4.node_values[j]) and lam[j] == 1.0 and lam.sum() == 1.0
    for j in range(len(t) - 1):
        _, lam = eval_pwl1d(FIT4, 0.5 * (t[j] + t[j + 1]))
        assert lam[j] == pytest.approx(0.5) and lam[j + 1] == pytest.approx(0.5)


@given(d=st.floats(0.0, 200.0))
def test_eval_sos2_and_segment_formula(d):
    val, lam = eval_pwl1d(FIT4, d)
    nz = np.flatnonzero(lam)
    assert 1 <= len(nz) <= 2 and (len(nz) == 1 or nz[1] == nz[0] + 1)
    assert lam.sum() == pytest.approx(1.0)
    assert lam @ np.array(FIT4.breakpoints) == pytest.approx(d, abs=1e-9)
    j = min(int(np.searchsorted(FIT4.breakpoints, d, side="right")) - 1, len(FIT4.slopes) - 1)
    assert val == pytest.approx(FIT4.slopes[j] * d + FIT4.intercepts[j], abs=1e-12)
    assert eval_pwl1d_many(FIT4, np.array([d]))[0] == pytest.approx(val, abs=1e-12)


def test_eval_out_of_range():
    with pytest.raises(GridQueryError):
        eval_pwl1d(FIT3, 200.1)
    with pytest.raises(GridQueryError):
        eval_pwl1d(FIT3, -0.1)


def test_json_export_roundtrip():
    import json

    d = json.loads(FIT3.to_json())
    back = Pwl1D.from_nodes(d["breakpoints"], d["node_values"], d["rmse"])
    assert back == FIT3


def test_from_nodes_validation():
    with pytest.raises(ValueError):
        Pwl1D.from_nodes((0, 0, 1), (1, 1, 1))
