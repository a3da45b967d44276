"""Curve fixtures for the verification suites and tests.

Every random fixture takes a ``numpy.random.Generator`` so callers control
the stream.
"""

from __future__ import annotations

import math

import numpy as np

from ..curves import Polyline, densify


def regular_polygon(n: int, radius: float = 1.0, center=(0.0, 0.0), phase: float = 0.0, ccw: bool = True) -> Polyline:
    ang = phase + 2 * math.pi * np.arange(n) / n
    pts = np.column_stack([np.cos(ang), np.sin(ang)]) * radius + np.asarray(center, dtype=float)
    return Polyline(pts if ccw else pts[::-1], closed=True)


def _ellipse_polygon(rng, n, center, rx, ry, rotation, ccw):
    # sorted angles on an ellipse give a convex polygon; a minimum gap keeps it non-degenerate
    while True:
        ang = np.sort(rng.uniform(0, 2 * math.pi, n))
        gaps = np.diff(np.concatenate([ang, ang[:1] + 2 * math.pi]))
        if gaps.min() > 0.2 * (2 * math.pi / n) and gaps.max() < math.pi * 0.9:
            break
    c, s = math.cos(rotation), math.sin(rotation)
    local = np.column_stack([rx * np.cos(ang), ry * np.sin(ang)])
    pts = local @ np.array([[c, s], [-s, c]]) + np.asarray(center, dtype=float)
    return Polyline(pts if ccw else pts[::-1], closed=True)


def random_convex_polygon(rng: np.random.Generator, n: int | None = None, center=(0.0, 0.0),
                          scale: float = 1.0, ccw: bool | None = None) -> Polyline:
    """Convex polygon with vertices on a random ellipse."""
    n = int(rng.integers(5, 17)) if n is None else n
    ccw = bool(rng.integers(2)) if ccw is None else ccw
    rx, ry = scale * rng.uniform(0.6, 1.0, 2)
    return _ellipse_polygon(rng, n, center, rx, ry, rng.uniform(0, math.pi), ccw)


def _inside_convex(poly: Polyline, pts: np.ndarray) -> bool:
    a, d = poly.seg_start, poly.seg_vec
    cross = d[None, :, 0] * (pts[:, None, 1] - a[None, :, 1]) - d[None, :, 1] * (pts[:, None, 0] - a[None, :, 0])
    return bool(np.all(cross > 0) or np.all(cross < 0))


def nested_convex_pair(rng: np.random.Generator, ccw: bool | None = None) -> tuple[Polyline, Polyline]:
    """Two convex polygons, one strictly inside the other, with the same orientation.

    Which of the two comes first is random.
    """
    ccw = bool(rng.integers(2)) if ccw is None else ccw
    while True:
        outer = random_convex_polygon(rng, ccw=ccw)
        inner = random_convex_polygon(rng, center=rng.uniform(-0.1, 0.1, 2), scale=rng.uniform(0.3, 0.7), ccw=ccw)
        if _inside_convex(outer, inner.vertices):
            break
    if rng.integers(2):
        return inner, outer
    return outer, inner


def open_convex_arc(rng: np.random.Generator, n: int | None = None) -> Polyline:
    """Polygonal arc of a circle spanning less than a full turn."""
    n = int(rng.integers(3, 12)) if n is None else n
    start = rng.uniform(0, 2 * math.pi)
    span = rng.uniform(0.3, 1.6) * math.pi
    ang = start + span * np.linspace(0, 1, n)
    pts = np.column_stack([np.cos(ang), np.sin(ang)])
    return Polyline(pts if rng.integers(2) else pts[::-1])


def segment_fixture(rng: np.random.Generator) -> Polyline:
    a = rng.uniform(-1, 1, 2)
    ang = rng.uniform(0, 2 * math.pi)
    return Polyline([a, a + rng.uniform(0.5, 2.0) * np.array([math.cos(ang), math.sin(ang)])])


def u_hairpin(gap: float, length: float = 10.0) -> Polyline:
    """U-turn whose two arms run in opposite directions a distance ``gap`` apart."""
    return Polyline([(0.0, 0.0), (length, 0.0), (length, gap), (0.0, gap)])


def coil(gap: float) -> Polyline:
    """Open curve with two parallel arms ``gap`` apart that run the same way.

    The upper arm y = gap (0 <= x <= 8) and the lower arm y = 0
    (-2 <= x <= 10) are both traversed in +x, so their normals agree and the
    pairs straddling the gap realize the signed local feature size, which
    equals ``gap`` for gap < 2.
    """
    if not 0 < gap < 2:
        raise ValueError("coil gap must lie in (0, 2)")
    return Polyline([(0.0, gap), (8.0, gap), (8.0, 3.0), (-2.0, 3.0), (-2.0, 0.0), (10.0, 0.0)])


def star_polygon(rng: np.random.Generator, n: int | None = None, center=(0.0, 0.0)) -> Polyline:
    """Simple closed polygon, star-shaped about ``center``."""
    n = int(rng.integers(5, 25)) if n is None else n
    ang = np.sort(rng.uniform(0, 2 * math.pi, n))
    while np.diff(np.concatenate([ang, ang[:1] + 2 * math.pi])).min() < 1e-3:
        ang = np.sort(rng.uniform(0, 2 * math.pi, n))
    rad = rng.uniform(0.3, 1.0, n)
    pts = np.column_stack([rad * np.cos(ang), rad * np.sin(ang)]) + np.asarray(center, dtype=float)
    return Polyline(pts if rng.integers(2) else pts[::-1], closed=True)


def monotone_polyline(rng: np.random.Generator, n: int | None = None) -> Polyline:
    """Open x-monotone polyline (simple by construction)."""
    n = int(rng.integers(2, 20)) if n is None else n
    xs = np.sort(rng.uniform(-1, 1, n))
    while np.diff(xs).min() < 1e-3:
        xs = np.sort(rng.uniform(-1, 1, n))
    ys = rng.uniform(-0.6, 0.6, n)
    pts = np.column_stack([xs, ys])
    return Polyline(pts if rng.integers(2) else pts[::-1])


def random_simple_curve(rng: np.random.Generator) -> Polyline:
    return star_polygon(rng) if rng.integers(2) else monotone_polyline(rng)


def perturbed(curve: Polyline, rng: np.random.Generator, amplitude: float) -> Polyline:
    """Jitter every vertex by up to ``amplitude`` in each coordinate."""
    v = curve.vertices + rng.uniform(-amplitude, amplitude, curve.vertices.shape)
    return Polyline(v, closed=curve.closed)


def shared_end_pair(rng: np.random.Generator, n_inner: int | None = None) -> tuple[Polyline, Polyline]:
    """Two x-monotone curves from (0, 0) to (1, 0) with common first and last segments.

    Both start with the segment (0,0)-(a,0) and end with (1-a,0)-(1,0) for
    possibly different a, so end points and end tangents agree.
    """
    def one():
        k = int(rng.integers(1, 8)) if n_inner is None else n_inner
        a = rng.uniform(0.05, 0.15)
        xs = np.sort(rng.uniform(a + 0.02, 1 - a - 0.02, k))
        ys = rng.uniform(-0.3, 0.3, k)
        pts = np.vstack([[0.0, 0.0], [a, 0.0], np.column_stack([xs, ys]), [1 - a, 0.0], [1.0, 0.0]])
        keep = np.concatenate([[True], np.diff(pts[:, 0]) > 1e-6])
        return Polyline(pts[keep])

    return one(), one()


def staircase(rng: np.random.Generator, steps: int | None = None) -> Polyline:
    """Monotone staircase from (0, 0) to (1, 1) starting and ending with a horizontal run."""
    k = int(rng.integers(2, 7)) if steps is None else steps
    xs = np.sort(rng.uniform(0.05, 0.95, k))
    ys = np.sort(rng.uniform(0.0, 1.0, k - 1))
    pts = [(0.0, 0.0)]
    y = 0.0
    for i in range(k):
        pts.append((xs[i], y))
        y = ys[i] if i < k - 1 else 1.0
        pts.append((xs[i], y))
    pts.append((1.0, 1.0))
    return Polyline(np.array(pts))


def staircase_pair(rng: np.random.Generator) -> tuple[Polyline, Polyline]:
    return staircase(rng), staircase(rng)


def kappa_bound(curve: Polyline, step: float) -> float:
    """Smallest kappa for which sampled sub-curves stay in the two balls of radius kappa/2 |p - p'|.

    Brute force over the vertices of ``densify(curve, step)``.
    """
    P = densify(curve, step).vertices
    D = np.hypot(*(P[:, None, :] - P[None, :, :]).transpose(2, 0, 1))
    kappa = 1.0
    n = len(P)
    for i in range(n):
        for j in range(i + 2, n):
            if D[i, j] == 0.0:
                continue
            reach = np.minimum(D[i, i + 1 : j], D[j, i + 1 : j]).max()
            kappa = max(kappa, 2.0 * reach / D[i, j])
    return float(kappa)
