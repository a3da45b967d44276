"""Oriented polylines and the closest-point machinery everything else builds on.

A :class:`Polyline` is an ordered vertex array plus an open/closed flag.  The
orientation is the vertex order.  The unit normal of a directed segment a->b is
the direction rotated by -90 degrees (clockwise): for direction (dx, dy) the
normal is (dy, -dx).  A point to the right of the direction of travel therefore
has a positive signed line distance.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

DEFAULT_TOL = 1e-9

# rows of a (m, k) distance block; bounds memory for large landmark sets
_CHUNK_CELLS = 2_000_000


class Point2(NamedTuple):
    x: float
    y: float


class Locus(enum.IntEnum):
    SEGMENT_INTERIOR = 0
    INTERIOR_VERTEX = 1
    ENDPOINT = 2


class CurveError(ValueError):
    """Raised for polylines that violate the construction invariants."""


def _as_points(points) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(1, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise CurveError(f"expected an (n, 2) array of points, got shape {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class Polyline:
    """An oriented piecewise-linear curve.

    Parameters
    ----------
    vertices : array_like, shape (n, 2)
        Critical points in traversal order.  For a closed curve the wrap
        segment (last -> first) is implicit; a trailing copy of the first
        vertex is dropped.
    closed : bool
        Whether the curve is closed.
    """

    vertices: np.ndarray
    closed: bool = False

    def __post_init__(self):
        v = _as_points(self.vertices).copy()
        if not np.all(np.isfinite(v)):
            raise CurveError("vertices must be finite")
        if self.closed and len(v) > 1 and np.array_equal(v[0], v[-1]):
            v = v[:-1]
        if self.closed:
            if len(np.unique(v, axis=0)) < 3:
                raise CurveError("a closed polyline needs at least 3 distinct vertices")
        elif len(v) < 2:
            raise CurveError("an open polyline needs at least 2 vertices")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        if np.any(self.seg_lengths <= 0.0):
            bad = int(np.flatnonzero(self.seg_lengths <= 0.0)[0])
            raise CurveError(f"segment {bad} has zero length")

    def __eq__(self, other):
        if not isinstance(other, Polyline):
            return NotImplemented
        return self.closed == other.closed and np.array_equal(self.vertices, other.vertices)

    def __hash__(self):
        return hash((self.closed, self.vertices.tobytes()))

    def __len__(self):
        return len(self.vertices)

    @property
    def n_segments(self) -> int:
        return len(self.vertices) if self.closed else len(self.vertices) - 1

    @cached_property
    def seg_start(self) -> np.ndarray:
        return self.vertices[: self.n_segments]

    @cached_property
    def seg_end(self) -> np.ndarray:
        if self.closed:
            return np.roll(self.vertices, -1, axis=0)
        return self.vertices[1:]

    @cached_property
    def seg_vec(self) -> np.ndarray:
        return self.seg_end - self.seg_start

    @cached_property
    def seg_lengths(self) -> np.ndarray:
        return np.hypot(self.seg_vec[:, 0], self.seg_vec[:, 1])

    @cached_property
    def tangents(self) -> np.ndarray:
        """Unit direction of every segment."""
        return self.seg_vec / self.seg_lengths[:, None]

    @cached_property
    def normals(self) -> np.ndarray:
        """Unit normal of every segment, the tangent rotated by -90 degrees."""
        t = self.tangents
        return np.column_stack([t[:, 1], -t[:, 0]])

    @cached_property
    def cumulative_length(self) -> np.ndarray:
        """Arclength at the start of each segment, plus the total at the end."""
        return np.concatenate([[0.0], np.cumsum(self.seg_lengths)])

    @property
    def length(self) -> float:
        return float(self.cumulative_length[-1])

    @cached_property
    def turn_signs(self) -> np.ndarray:
        """Per-vertex turn direction: +1 left, -1 right, 0 straight or cusp.

        Open-curve endpoints get 0.  A left turn puts the reflex side of the
        corner on the normal side, so landmarks whose argmin is that vertex see
        a positive sign.
        """
        n = len(self.vertices)
        out = np.zeros(n, dtype=np.int8)
        for i in range(n):
            pair = self.adjacent_segments(i)
            if pair is None:
                continue
            t_in, t_out = self.tangents[pair[0]], self.tangents[pair[1]]
            cross = t_in[0] * t_out[1] - t_in[1] * t_out[0]
            if cross > DEFAULT_TOL:
                out[i] = 1
            elif cross < -DEFAULT_TOL:
                out[i] = -1
        return out

    def adjacent_segments(self, vertex: int) -> tuple[int, int] | None:
        """Indices of the (incoming, outgoing) segments at a vertex, None at open ends."""
        n = len(self.vertices)
        if self.closed:
            return ((vertex - 1) % n, vertex % n)
        if vertex <= 0 or vertex >= n - 1:
            return None
        return (vertex - 1, vertex)

    def is_endpoint(self, vertex: int) -> bool:
        return not self.closed and vertex in (0, len(self.vertices) - 1)

    def bounds(self) -> tuple[float, float, float, float]:
        lo = self.vertices.min(axis=0)
        hi = self.vertices.max(axis=0)
        return (float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1]))

    def point_at(self, s: float) -> np.ndarray:
        """Point at arclength ``s`` measured from the first vertex."""
        cum = self.cumulative_length
        s = min(max(s, 0.0), cum[-1])
        j = min(int(np.searchsorted(cum, s, side="right")) - 1, self.n_segments - 1)
        t = (s - cum[j]) / self.seg_lengths[j]
        return self.seg_start[j] + t * self.seg_vec[j]


@dataclass(frozen=True)
class Segment:
    """A directed segment a -> b."""

    a: Point2
    b: Point2

    def __post_init__(self):
        a = Point2(*map(float, self.a))
        b = Point2(*map(float, self.b))
        if not all(map(math.isfinite, (*a, *b))):
            raise CurveError("segment coordinates must be finite")
        if math.hypot(b.x - a.x, b.y - a.y) <= 0.0:
            raise CurveError("segment has zero length")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)


@dataclass(frozen=True)
class ClosestPointResult:
    point: Point2
    segment_index: int
    locus: Locus
    distance: float
    perp_signed: float
    vertex_index: int = -1
    t: float = 0.0


class ClosestPoints(NamedTuple):
    """Vectorized closest-point answers for a batch of query points."""

    segment: np.ndarray
    t: np.ndarray
    point: np.ndarray
    distance: np.ndarray
    locus: np.ndarray
    vertex: np.ndarray
    perp: np.ndarray

    def arclength(self, curve: Polyline) -> np.ndarray:
        return curve.cumulative_length[self.segment] + self.t * curve.seg_lengths[self.segment]


def _segment_blocks(curve: Polyline, Q: np.ndarray):
    """Per-(query, segment) parameter, foot point and distance."""
    a, d = curve.seg_start, curve.seg_vec
    rel = Q[:, None, :] - a[None, :, :]
    t = np.einsum("mkj,kj->mk", rel, d) / (curve.seg_lengths**2)[None, :]
    lo, hi = t <= 0.0, t >= 1.0
    t = np.clip(t, 0.0, 1.0)
    # exact copies of the vertices at clamped ends so shared vertices tie exactly
    foot = a[None, :, :] + t[:, :, None] * d[None, :, :]
    foot = np.where(lo[:, :, None], a[None, :, :], foot)
    foot = np.where(hi[:, :, None], curve.seg_end[None, :, :], foot)
    diff = Q[:, None, :] - foot
    dist = np.hypot(diff[..., 0], diff[..., 1])
    return t, lo, hi, foot, dist


def closest_points(curve: Polyline, Q) -> ClosestPoints:
    """Closest curve point for every row of ``Q``.

    Ties across segments go to the lowest segment index, except that a
    segment-interior foot wins over a vertex foot at the same distance.
    """
    Q = _as_points(Q)
    m, k = len(Q), curve.n_segments
    out_seg = np.empty(m, dtype=np.intp)
    out_t = np.empty(m)
    out_pt = np.empty((m, 2))
    out_d = np.empty(m)
    out_interior = np.empty(m, dtype=bool)
    step = max(1, _CHUNK_CELLS // max(k, 1))
    for s in range(0, m, step):
        q = Q[s : s + step]
        t, lo, hi, foot, dist = _segment_blocks(curve, q)
        interior = ~(lo | hi)
        dmin = dist.min(axis=1, keepdims=True)
        score = np.where(dist == dmin, np.where(interior, 0, 1), 2)
        j = np.argmin(score, axis=1)
        rows = np.arange(len(q))
        out_seg[s : s + step] = j
        out_t[s : s + step] = t[rows, j]
        out_pt[s : s + step] = foot[rows, j]
        out_d[s : s + step] = dist[rows, j]
        out_interior[s : s + step] = interior[rows, j]

    n = len(curve.vertices)
    vertex = np.where(out_t <= 0.0, out_seg, out_seg + 1)
    if curve.closed:
        vertex = vertex % n
    vertex = np.where(out_interior, -1, vertex)
    locus = np.full(m, Locus.SEGMENT_INTERIOR, dtype=np.int8)
    locus[~out_interior] = Locus.INTERIOR_VERTEX
    if not curve.closed:
        locus[(vertex == 0) | (vertex == n - 1)] = Locus.ENDPOINT
    perp = np.einsum("mj,mj->m", Q - curve.seg_start[out_seg], curve.normals[out_seg])
    return ClosestPoints(out_seg, out_t, out_pt, out_d, locus, vertex, perp)


def closest_point(curve: Polyline, q) -> ClosestPointResult:
    """Closest point of ``curve`` to a single query point.

    Examples
    --------
    >>> r = closest_point(Polyline([(-1, 0), (1, 0)]), (0, 1))
    >>> r.point, r.locus.name, r.distance, r.perp_signed
    (Point2(x=0.0, y=0.0), 'SEGMENT_INTERIOR', 1.0, -1.0)
    """
    cp = closest_points(curve, _as_points(q))
    locus = Locus(int(cp.locus[0]))
    perp = float(cp.perp[0]) if locus == Locus.SEGMENT_INTERIOR else math.nan
    return ClosestPointResult(
        point=Point2(float(cp.point[0, 0]), float(cp.point[0, 1])),
        segment_index=int(cp.segment[0]),
        locus=locus,
        distance=float(cp.distance[0]),
        perp_signed=perp,
        vertex_index=int(cp.vertex[0]),
        t=float(cp.t[0]),
    )


def argmin_is_unique(curve: Polyline, q, tol: float = DEFAULT_TOL) -> bool:
    """False when two distinct curve points are within ``tol`` of the minimum distance.

    Segments that report the same foot point (the two sides of a vertex)
    count once.
    """
    q = _as_points(q)
    _, _, _, foot, dist = _segment_blocks(curve, q)
    dist, foot = dist[0], foot[0]
    near = np.flatnonzero(dist <= dist.min() + tol)
    if len(near) <= 1:
        return True
    pts = foot[near]
    spread = np.hypot(*(pts - pts[0]).T)
    return bool(np.all(spread <= max(tol, 1e-12)))


def densify(curve: Polyline, step: float) -> Polyline:
    """Insert vertices so that no segment is longer than ``step``.

    Original vertices, orientation and the closed flag are preserved.
    """
    if not step > 0.0 or not math.isfinite(step):
        raise ValueError(f"step must be a positive finite number, got {step!r}")
    pieces = []
    for a, d, length in zip(curve.seg_start, curve.seg_vec, curve.seg_lengths):
        k = max(1, math.ceil(length / step - 1e-12))
        frac = np.arange(k)[:, None] / k
        pieces.append(a + frac * d)
    if not curve.closed:
        pieces.append(curve.vertices[-1:])
    return Polyline(np.vstack(pieces), closed=curve.closed)


def reverse(curve: Polyline) -> Polyline:
    """Same image, opposite orientation."""
    return Polyline(curve.vertices[::-1], closed=curve.closed)


def _orient(ax, ay, bx, by, cx, cy):
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def _point_segment_distance(P, A, B):
    """Distance from points P to segments A->B (broadcasting over leading axes)."""
    d = B - A
    len2 = np.einsum("...j,...j->...", d, d)
    t = np.clip(np.einsum("...j,...j->...", P - A, d) / len2, 0.0, 1.0)
    foot = A + t[..., None] * d
    diff = P - foot
    return np.hypot(diff[..., 0], diff[..., 1])


def segment_distances(p0, p1, A, B) -> np.ndarray:
    """Distance between the segment p0-p1 and each segment A[i]-B[i]."""
    p0 = np.asarray(p0, dtype=float)
    p1 = np.asarray(p1, dtype=float)
    o1 = _orient(*p0, *p1, A[:, 0], A[:, 1])
    o2 = _orient(*p0, *p1, B[:, 0], B[:, 1])
    o3 = _orient(A[:, 0], A[:, 1], B[:, 0], B[:, 1], *p0)
    o4 = _orient(A[:, 0], A[:, 1], B[:, 0], B[:, 1], *p1)
    crossing = (o1 * o2 < 0) & (o3 * o4 < 0)
    d = np.minimum.reduce(
        [
            _point_segment_distance(p0[None, :], A, B),
            _point_segment_distance(p1[None, :], A, B),
            _point_segment_distance(A, p0[None, :], p1[None, :]),
            _point_segment_distance(B, p0[None, :], p1[None, :]),
        ]
    )
    return np.where(crossing, 0.0, d)


def segment_intersects(s: Segment, curve: Polyline, tol: float = DEFAULT_TOL) -> bool:
    """Whether the open interior of ``s`` comes within ``tol`` of ``curve``.

    The interior is taken as ``s`` with a short piece trimmed off each end,
    so contact only at the end points of ``s`` does not count.
    """
    a = np.asarray(s.a, dtype=float)
    b = np.asarray(s.b, dtype=float)
    length = float(np.hypot(*(b - a)))
    trim = min(1e-6 * length + 10.0 * tol, 0.25 * length)
    u = (b - a) / length
    d = segment_distances(a + trim * u, b - trim * u, curve.seg_start, curve.seg_end)
    return bool(np.any(d <= tol))
