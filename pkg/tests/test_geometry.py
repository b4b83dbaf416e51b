import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dronesnc.geometry import (circle_box_intersections, circle_pair_intersections, min_enclosing_circle,
                               mixed_circle_intersections)

coord = st.floats(-500, 500, allow_nan=False)
points = st.lists(st.tuples(coord, coord), min_size=1, max_size=25)


def brute_mec_radius(pts):
    # the MEC is determined by 2 or 3 points; check all such circles
    pts = np.asarray(pts)
    best = math.inf
    n = len(pts)
    cands = [(pts[0][0], pts[0][1])]
    for i in range(n):
        for j in range(i + 1, n):
            cands.append(tuple((pts[i] + pts[j]) / 2))
            for k in range(j + 1, n):
                a, b, c = pts[i], pts[j], pts[k]
                d = 2 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]))
                if abs(d) < 1e-9:
                    continue
                ux = ((a @ a) * (b[1] - c[1]) + (b @ b) * (c[1] - a[1]) + (c @ c) * (a[1] - b[1])) / d
                uy = ((a @ a) * (c[0] - b[0]) + (b @ b) * (a[0] - c[0]) + (c @ c) * (b[0] - a[0])) / d
                cands.append((ux, uy))
    for cx, cy in cands:
        best = min(best, np.hypot(pts[:, 0] - cx, pts[:, 1] - cy).max())
    return best


@given(pts=points)
def test_mec_contains_and_is_minimal(pts):
    pts = np.asarray(pts)
    cx, cy, r = min_enclosing_circle(pts)
    assert np.all(np.hypot(pts[:, 0] - cx, pts[:, 1] - cy) <= r * (1 + 1e-9) + 1e-9)
    if len(pts) <= 10:
        assert r <= brute_mec_radius(pts) + 1e-6


def test_mec_simple_cases():
    assert min_enclosing_circle(np.empty((0, 2))) is None
    assert min_enclosing_circle([(3.0, 4.0)]) == (3.0, 4.0, 0.0)
    cx, cy, r = min_enclosing_circle([(0, 0), (2, 0)])
    assert (cx, cy, r) == pytest.approx((1, 0, 1))
    cx, cy, r = min_enclosing_circle([(1, 0), (-1, 0), (0, 1), (0, -1), (0.2, 0.3)])
    assert (cx, cy, r) == pytest.approx((0, 0, 1), abs=1e-12)


def test_mec_is_deterministic():
    pts = np.random.default_rng(5).normal(size=(40, 2))
    assert min_enclosing_circle(pts, seed=3) == min_enclosing_circle(pts, seed=3)


@given(pts=st.lists(st.tuples(coord, coord), min_size=2, max_size=8), r=st.floats(1, 400))
def test_pair_intersections_lie_on_both_circles(pts, r):
    p = np.asarray(pts)
    out = circle_pair_intersections(p, r)
    for q in out:
        on = np.abs(np.hypot(p[:, 0] - q[0], p[:, 1] - q[1]) - r) < 1e-6 * max(r, 1)
        assert on.sum() >= 2


@given(pts=st.lists(st.tuples(coord, coord), min_size=2, max_size=8), r1=st.floats(1, 400), r2=st.floats(1, 400))
def test_mixed_intersections_lie_on_one_circle_of_each_radius(pts, r1, r2):
    p = np.asarray(pts)
    for q in mixed_circle_intersections(p, r1, r2):
        d = np.hypot(p[:, 0] - q[0], p[:, 1] - q[1])
        tol = 1e-6 * max(r1, r2)
        assert np.any(np.abs(d - r1) < tol) and np.any(np.abs(d - r2) < tol)


def test_mixed_intersections_reduce_to_equal_radius_case():
    p = np.array([[0.0, 0.0], [100.0, 0.0], [30.0, 70.0]])
    a = np.unique(np.round(mixed_circle_intersections(p, 80.0, 80.0), 9), axis=0)
    b = np.unique(np.round(circle_pair_intersections(p, 80.0), 9), axis=0)
    assert np.allclose(a, b)


def test_mixed_intersections_known_case():
    # 3-4-5 triangle: circles r=3 about the origin and r=4 about (5, 0) cross at (1.8, +/-2.4)
    out = mixed_circle_intersections(np.array([[0.0, 0.0], [5.0, 0.0]]), 3.0, 4.0)
    assert any(np.allclose(q, (1.8, 2.4)) for q in out)
    assert any(np.allclose(q, (1.8, -2.4)) for q in out)


def test_box_intersections_on_edges():
    p = np.array([[0.0, 0.0], [90.0, 90.0]])
    out = circle_box_intersections(p, 50.0, -40, 100, -100, 100)
    assert len(out) > 0
    for q in out:
        on_edge = np.isclose(q[0], -40) or np.isclose(q[0], 100) or np.isclose(q[1], -100) or np.isclose(q[1], 100)
        assert on_edge
        assert np.isclose(np.hypot(*(p - q).T), 50.0).any()
