"""Distances between sketches and between curves.

``d_q`` is the normalized l^p distance between two feature vectors.  The curve
baselines are computed on vertex sequences:

* ``hausdorff`` evaluates exact point-to-polyline distances at the vertices of
  a densified copy, so each directed value is low by at most step/2.
* ``refined_hausdorff`` brackets the directed values by branch and bound to
  an absolute tolerance.
* ``discrete_frechet`` is the Eiter-Mannila dynamic program; for closed curves
  the best cyclic shift of the first curve is taken.  On inputs densified to
  step h it over-estimates the continuous Frechet distance by at most h.
* ``dtw`` uses squared Euclidean costs and returns the square root of the sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numba import njit

from .curves import Polyline, _point_segment_distance, closest_points, densify
from .features import FeatureVector


@dataclass(frozen=True)
class DistanceSpec:
    p: float = 2.0

    def __post_init__(self):
        if not self.p >= 1:
            raise ValueError(f"p must be in [1, inf], got {self.p!r}")


class ConfigMismatch(ValueError):
    pass


def _lp(diff: np.ndarray, p: float) -> np.ndarray:
    diff = np.abs(diff)
    if math.isinf(p):
        return diff.max(axis=-1)
    if p == 1:
        return diff.mean(axis=-1)
    if p == 2:
        return np.sqrt(np.mean(diff * diff, axis=-1))
    return np.mean(diff**p, axis=-1) ** (1.0 / p)


def d_q(u: FeatureVector, v: FeatureVector, spec: DistanceSpec = DistanceSpec()) -> float:
    """Normalized l^p distance between two sketches made with the same configuration.

    ``(mean |u_i - v_i|^p)^(1/p)`` for finite p, ``max |u_i - v_i|`` for p = inf.
    """
    if u.config.identity() != v.config.identity():
        raise ConfigMismatch("feature vectors come from different sketch configurations")
    if len(u.values) != len(v.values):
        raise ConfigMismatch(f"length mismatch: {len(u.values)} vs {len(v.values)}")
    return float(_lp(np.asarray(u.values) - np.asarray(v.values), spec.p))


def dq_matrix(values: np.ndarray, p: float = 2.0, other: np.ndarray | None = None) -> np.ndarray:
    """Pairwise ``d_q`` between the rows of ``values`` (and ``other`` if given)."""
    a = np.asarray(values, dtype=float)
    b = a if other is None else np.asarray(other, dtype=float)
    out = np.empty((len(a), len(b)))
    for i in range(len(a)):
        out[i] = _lp(b - a[i], p)
    return out


class HausdorffResult(NamedTuple):
    directed_12: float
    directed_21: float
    symmetric: float


def directed_hausdorff_sampled(a: Polyline, b: Polyline, step: float) -> float:
    return float(closest_points(b, densify(a, step).vertices).distance.max())


def hausdorff(c1: Polyline, c2: Polyline, step: float) -> HausdorffResult:
    """Densified Hausdorff distance; each directed value under-estimates by at most step/2."""
    d12 = directed_hausdorff_sampled(c1, c2, step)
    d21 = directed_hausdorff_sampled(c2, c1, step)
    return HausdorffResult(d12, d21, max(d12, d21))


def refined_directed_hausdorff(a: Polyline, b: Polyline, tol: float = 1e-10) -> tuple[float, float]:
    """Lower and upper bounds on the directed Hausdorff distance from ``a`` to ``b``.

    Distance to a single segment of ``b`` is convex along a piece of ``a``, so
    min over segments of max(distance at the two piece ends) bounds the piece
    from above.  Pieces whose bound cannot beat the best evaluated distance
    are dropped; the rest are halved until the bracket is narrower than ``tol``.
    """
    A, B = b.seg_start[None, :, :], b.seg_end[None, :, :]
    x0, x1 = a.seg_start, a.seg_end
    d0 = _point_segment_distance(x0[:, None, :], A, B)
    d1 = _point_segment_distance(x1[:, None, :], A, B)
    lower = float(max(d0.min(axis=1).max(), d1.min(axis=1).max()))
    upper = lower
    while len(x0):
        ub = np.maximum(d0, d1).min(axis=1)
        upper = max(lower, float(ub.max()))
        keep = ub > lower + tol
        if not keep.any():
            break
        x0, x1, d0, d1 = x0[keep], x1[keep], d0[keep], d1[keep]
        mid = 0.5 * (x0 + x1)
        dm = _point_segment_distance(mid[:, None, :], A, B)
        lower = max(lower, float(dm.min(axis=1).max()))
        x0, x1 = np.concatenate([x0, mid]), np.concatenate([mid, x1])
        d0, d1 = np.concatenate([d0, dm]), np.concatenate([dm, d1])
    return lower, upper


def refined_hausdorff(c1: Polyline, c2: Polyline, tol: float = 1e-10) -> HausdorffResult:
    """Hausdorff distance to within ``tol`` (reported values are the upper bounds)."""
    d12 = refined_directed_hausdorff(c1, c2, tol)[1]
    d21 = refined_directed_hausdorff(c2, c1, tol)[1]
    return HausdorffResult(d12, d21, max(d12, d21))


def _pairwise(P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    diff = P[:, None, :] - Q[None, :, :]
    return np.hypot(diff[..., 0], diff[..., 1])


@njit(cache=True)
def _dfd(dist):
    p, q = dist.shape
    ret = np.empty((p, q))
    ret[0, 0] = dist[0, 0]
    for i in range(1, p):
        ret[i, 0] = max(ret[i - 1, 0], dist[i, 0])
    for j in range(1, q):
        ret[0, j] = max(ret[0, j - 1], dist[0, j])
    for i in range(1, p):
        for j in range(1, q):
            ret[i, j] = max(min(ret[i - 1, j], ret[i, j - 1], ret[i - 1, j - 1]), dist[i, j])
    return ret[p - 1, q - 1]


@njit(cache=True)
def _dfd_cyclic(dist):
    # dist: (n, m) between the distinct vertices of two closed curves.  Each
    # loop is walked once and returns to its start; the first curve's start
    # vertex ranges over all shifts, the second curve starts at vertex 0.
    n, m = dist.shape
    best = np.inf
    ret = np.empty((n + 1, m + 1))
    for s in range(n):
        for i in range(n + 1):
            ii = (s + i) % n
            for j in range(m + 1):
                jj = j % m
                d = dist[ii, jj]
                if i == 0 and j == 0:
                    ret[i, j] = d
                elif i == 0:
                    ret[i, j] = max(ret[i, j - 1], d)
                elif j == 0:
                    ret[i, j] = max(ret[i - 1, j], d)
                else:
                    ret[i, j] = max(min(ret[i - 1, j], ret[i, j - 1], ret[i - 1, j - 1]), d)
        if ret[n, m] < best:
            best = ret[n, m]
    return best


def discrete_frechet(c1: Polyline, c2: Polyline) -> float:
    """Discrete Frechet distance between the vertex sequences of two curves.

    Examples
    --------
    >>> discrete_frechet(Polyline([(0, 0), (1, 0)]), Polyline([(0, 1), (1, 1)]))
    1.0
    """
    if c1.closed != c2.closed:
        raise ValueError("cannot compare an open curve with a closed one")
    dist = _pairwise(c1.vertices, c2.vertices)
    if c1.closed:
        return float(_dfd_cyclic(dist))
    return float(_dfd(dist))


@njit(cache=True)
def _dtw(cost):
    p, q = cost.shape
    acc = np.full((p + 1, q + 1), np.inf)
    acc[0, 0] = 0.0
    for i in range(1, p + 1):
        for j in range(1, q + 1):
            acc[i, j] = cost[i - 1, j - 1] + min(acc[i - 1, j], acc[i, j - 1], acc[i - 1, j - 1])
    return acc[p, q]


def dtw(c1, c2) -> float:
    """Dynamic time warping over vertex sequences with squared Euclidean cost.

    Accepts polylines or raw (n, 2) point arrays, so single points work too.
    """
    P = c1.vertices if isinstance(c1, Polyline) else np.atleast_2d(np.asarray(c1, dtype=float))
    Q = c2.vertices if isinstance(c2, Polyline) else np.atleast_2d(np.asarray(c2, dtype=float))
    cost = _pairwise(P, Q) ** 2
    return float(math.sqrt(_dtw(cost)))


def pairwise_curve_matrix(curves, metric: str, step: float = 0.01, threads: int = 1) -> np.ndarray:
    """Dense symmetric matrix of a curve baseline: hausdorff, frechet or dtw.

    Rows are computed in parallel when ``threads > 1``; the result does not
    depend on the thread count.
    """
    if metric not in ("hausdorff", "frechet", "dtw"):
        raise ValueError(f"unknown metric {metric!r}")
    curves = list(curves)
    n = len(curves)
    if metric == "frechet":
        if len({c.closed for c in curves}) > 1:
            raise ValueError("frechet needs all curves open or all closed")
        dense = [densify(c, step) for c in curves]

    def row(i):
        out = np.zeros(n)
        for j in range(i + 1, n):
            if metric == "hausdorff":
                out[j] = hausdorff(curves[i], curves[j], step).symmetric
            elif metric == "frechet":
                out[j] = discrete_frechet(dense[i], dense[j])
            else:
                out[j] = dtw(curves[i], curves[j])
        return out

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(row, range(n)))
    else:
        rows = [row(i) for i in range(n)]
    upper = np.vstack(rows) if rows else np.zeros((0, 0))
    return upper + upper.T
