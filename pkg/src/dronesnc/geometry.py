"""Planar helpers: disk intersections and the smallest enclosing circle."""

import math
import random

import numpy as np


def circle_pair_intersections(points, radius):
    """Intersection points of every pair of equal-radius circles centred at ``points``.

    Returns an ``(m, 2)`` array; tangent pairs contribute their single point twice.
    """
    p = np.asarray(points, dtype=float).reshape(-1, 2)
    n = len(p)
    if n < 2:
        return np.empty((0, 2))
    i, j = np.triu_indices(n, k=1)
    a, b = p[i], p[j]
    delta = b - a
    dist = np.hypot(delta[:, 0], delta[:, 1])
    ok = (dist > 0) & (dist <= 2.0 * radius)
    a, delta, dist = a[ok], delta[ok], dist[ok]
    mid = a + 0.5 * delta
    half = np.sqrt(np.maximum(radius**2 - (0.5 * dist) ** 2, 0.0))
    perp = np.stack([-delta[:, 1], delta[:, 0]], axis=1) / dist[:, None]
    return np.concatenate([mid + half[:, None] * perp, mid - half[:, None] * perp])


def mixed_circle_intersections(points, r1, r2):
    """Crossings of a radius-``r1`` circle about one point with a radius-``r2`` circle about another.

    All ordered pairs of distinct points are used, so ``r1 != r2`` covers both assignments.
    """
    p = np.asarray(points, dtype=float).reshape(-1, 2)
    n = len(p)
    if n < 2:
        return np.empty((0, 2))
    i, j = np.nonzero(~np.eye(n, dtype=bool))
    a, delta = p[i], p[j] - p[i]
    dist = np.hypot(delta[:, 0], delta[:, 1])
    ok = (dist > 0) & (dist <= r1 + r2) & (dist >= abs(r1 - r2))
    a, delta, dist = a[ok], delta[ok], dist[ok]
    # distance from a along the center line to the chord
    along = (dist**2 + r1**2 - r2**2) / (2.0 * dist)
    half = np.sqrt(np.maximum(r1**2 - along**2, 0.0))
    unit = delta / dist[:, None]
    perp = np.stack([-unit[:, 1], unit[:, 0]], axis=1)
    base = a + along[:, None] * unit
    return np.concatenate([base + half[:, None] * perp, base - half[:, None] * perp])


def circle_box_intersections(points, radius, x_l, x_u, y_l, y_u):
    """Points where circles of ``radius`` about ``points`` cross the box edges."""
    p = np.asarray(points, dtype=float).reshape(-1, 2)
    out = []
    for x0 in (x_l, x_u):
        dx = x0 - p[:, 0]
        ok = np.abs(dx) <= radius
        dy = np.sqrt(np.maximum(radius**2 - dx[ok] ** 2, 0.0))
        for s in (1.0, -1.0):
            out.append(np.column_stack([np.full(ok.sum(), x0), p[ok, 1] + s * dy]))
    for y0 in (y_l, y_u):
        dy = y0 - p[:, 1]
        ok = np.abs(dy) <= radius
        dx = np.sqrt(np.maximum(radius**2 - dy[ok] ** 2, 0.0))
        for s in (1.0, -1.0):
            out.append(np.column_stack([p[ok, 0] + s * dx, np.full(ok.sum(), y0)]))
    return np.concatenate(out) if out else np.empty((0, 2))


# Smallest enclosing circle (Welzl's algorithm, iterative form).
# A circle is a triple (cx, cy, r).

_EPS = 1e-12


def _in_circle(c, p):
    return c is not None and math.hypot(p[0] - c[0], p[1] - c[1]) <= c[2] * (1 + _EPS) + 1e-12


def _diameter(a, b):
    cx, cy = (a[0] + b[0]) / 2, (a[1] + b[1]) / 2
    return (cx, cy, max(math.hypot(cx - a[0], cy - a[1]), math.hypot(cx - b[0], cy - b[1])))


def _circumcircle(a, b, c):
    ox = (min(a[0], b[0], c[0]) + max(a[0], b[0], c[0])) / 2
    oy = (min(a[1], b[1], c[1]) + max(a[1], b[1], c[1])) / 2
    ax, ay = a[0] - ox, a[1] - oy
    bx, by = b[0] - ox, b[1] - oy
    cx, cy = c[0] - ox, c[1] - oy
    d = (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by)) * 2
    if d == 0:
        return None
    x = ox + ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay)
              + (cx * cx + cy * cy) * (ay - by)) / d
    y = oy + ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx)
              + (cx * cx + cy * cy) * (bx - ax)) / d
    r = max(math.hypot(x - a[0], y - a[1]), math.hypot(x - b[0], y - b[1]),
            math.hypot(x - c[0], y - c[1]))
    return (x, y, r)


def _cross(x0, y0, x1, y1, x2, y2):
    return (x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0)


def _circle_two_points(points, p, q):
    circ = _diameter(p, q)
    left = right = None
    px, py = p
    qx, qy = q
    for r in points:
        if _in_circle(circ, r):
            continue
        cross = _cross(px, py, qx, qy, r[0], r[1])
        c = _circumcircle(p, q, r)
        if c is None:
            continue
        if cross > 0 and (left is None or _cross(px, py, qx, qy, c[0], c[1])
                          > _cross(px, py, qx, qy, left[0], left[1])):
            left = c
        elif cross < 0 and (right is None or _cross(px, py, qx, qy, c[0], c[1])
                            < _cross(px, py, qx, qy, right[0], right[1])):
            right = c
    if left is None and right is None:
        return circ
    if left is None:
        return right
    if right is None:
        return left
    return left if left[2] <= right[2] else right


def _circle_one_point(points, p):
    c = (p[0], p[1], 0.0)
    for i, q in enumerate(points):
        if not _in_circle(c, q):
            c = _diameter(p, q) if c[2] == 0 else _circle_two_points(points[: i + 1], p, q)
    return c


def min_enclosing_circle(points, seed: int = 0):
    """Smallest circle containing all ``points``; ``None`` for an empty input.

    Expected linear time. The shuffle is seeded so results are reproducible.
    """
    pts = [(float(x), float(y)) for x, y in np.asarray(points, dtype=float).reshape(-1, 2)]
    if not pts:
        return None
    random.Random(seed).shuffle(pts)
    c = None
    for i, p in enumerate(pts):
        if c is None or not _in_circle(c, p):
            c = _circle_one_point(pts[: i + 1], p)
    return c
