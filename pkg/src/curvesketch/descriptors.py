"""Signed local feature size, signed medial axis membership and sigma selection."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curves import DEFAULT_TOL, Polyline, Segment, _as_points, _segment_blocks, segment_intersects


@dataclass(frozen=True)
class SlfsEstimate:
    """Sampled signed local feature size.

    ``value`` is ``math.inf`` when no sampled pair qualifies; ``witness`` then
    is None.
    """

    value: float
    witness: tuple[tuple[float, float], tuple[float, float]] | None
    sample_step: float

    @property
    def finite(self) -> bool:
        return math.isfinite(self.value)

    def to_dict(self) -> dict:
        return {
            "value": self.value if self.finite else "inf",
            "witness": None if self.witness is None else [list(self.witness[0]), list(self.witness[1])],
            "sample_step": self.sample_step,
        }


def regular_samples(curve: Polyline, step: float) -> tuple[np.ndarray, np.ndarray]:
    """Points strictly inside each segment together with their segment normals.

    A segment of length L gets the points i*L/k, i = 1..k-1, for
    k = 2^max(1, ceil(log2(L/step))).  Spacing is at most ``step``, the
    midpoint is always present and halving ``step`` keeps every old sample,
    so the sampled minimum can only decrease as the step shrinks.
    """
    if not step > 0.0 or not math.isfinite(step):
        raise ValueError(f"step must be a positive finite number, got {step!r}")
    pts, nrm = [], []
    for a, d, length, n in zip(curve.seg_start, curve.seg_vec, curve.seg_lengths, curve.normals):
        k = 2 ** max(1, math.ceil(math.log2(length / step)))
        frac = np.arange(1, k)[:, None] / k
        pts.append(a + frac * d)
        nrm.append(np.broadcast_to(n, (k - 1, 2)))
    return np.vstack(pts), np.vstack(nrm)


def slfs_estimate(curve: Polyline, step: float, tol: float = DEFAULT_TOL) -> SlfsEstimate:
    """Smallest distance between sampled regular points p, p' with
    <n_p, p - p'><n_p', p' - p> < 0 and an open segment pp' that misses the curve.

    Examples
    --------
    >>> slfs_estimate(Polyline([(0, 0), (1, 0)]), 0.1).value
    inf
    """
    P, N = regular_samples(curve, step)
    diff = P[:, None, :] - P[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    with np.errstate(invalid="ignore", divide="ignore"):
        e = diff / dist[..., None]
        # <n_p, e><n_p', -e> with e the unit vector from p' to p
        prod = -np.einsum("ij,ikj->ik", N, e) * np.einsum("kj,ikj->ik", N, e)
    iu = np.triu_indices(len(P), k=1)
    cand = np.flatnonzero(prod[iu] < -tol)
    order = cand[np.argsort(dist[iu][cand], kind="stable")]
    for c in order:
        i, k = iu[0][c], iu[1][c]
        if not segment_intersects(Segment(P[i], P[k]), curve, tol):
            witness = (tuple(map(float, P[i])), tuple(map(float, P[k])))
            return SlfsEstimate(float(dist[i, k]), witness, float(step))
    return SlfsEstimate(math.inf, None, float(step))


def _foot_sign(curve: Polyline, u: np.ndarray, seg: int, t: float) -> int:
    """Sign s with n_p(q) = s (q - p)/|q - p| for a closest point p on ``seg``."""
    if 0.0 < t < 1.0:
        return int(np.sign(np.dot(u, curve.normals[seg])))
    n = len(curve.vertices)
    v = seg if t <= 0.0 else seg + 1
    if curve.closed:
        v %= n
    if curve.is_endpoint(v):
        w = curve.normals[0 if v == 0 else curve.n_segments - 1]
        return int(np.sign(np.dot(u, w)))
    turn = int(curve.turn_signs[v])
    if turn != 0:
        return turn
    i_in, _ = curve.adjacent_segments(v)
    return int(np.sign(np.dot(u, curve.normals[i_in])))


def sma_membership(curve: Polyline, q, tol: float = DEFAULT_TOL) -> bool:
    """Whether ``q`` lies on the signed medial axis of ``curve``.

    Closest points within ``tol`` of the minimum distance are collected and
    those closer than ``tol`` to each other merged.  Writing
    n_p(q) = s_p (q - p)/|q - p|, both factors <q - p, p - p'> and
    <q - p', p' - p> are negative for distinct equidistant p, p', so the
    sign condition reduces to s_p * s_p' < 0.
    """
    q = _as_points(q)
    t, _, _, foot, dist = _segment_blocks(curve, q)
    t, foot, dist = t[0], foot[0], dist[0]
    dmin = float(dist.min())
    if dmin <= tol:
        return False
    reps, signs = [], []
    for j in np.flatnonzero(dist <= dmin + tol):
        p = foot[j]
        if any(math.hypot(*(p - r)) <= tol for r in reps):
            continue
        reps.append(p)
        signs.append(_foot_sign(curve, q[0] - p, int(j), float(t[j])))
    return 1 in signs and -1 in signs


def sigma_select(delta: float, epsilon: float) -> float:
    """Largest sigma allowed by the stability bound: delta / (4 (1 + sqrt(ln(2/epsilon)))).

    Examples
    --------
    >>> sigma_select(4.0, 2 / math.e)
    0.5
    """
    if not (delta > 0 and math.isfinite(delta)):
        raise ValueError(f"delta must be positive and finite, got {delta!r}")
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon!r}")
    if not epsilon < 2:
        raise ValueError(f"epsilon must be below 2, got {epsilon!r}")
    if epsilon > delta / 4:
        raise ValueError(f"epsilon must not exceed delta/4 = {delta / 4!r}, got {epsilon!r}")
    return delta / (4.0 * (1.0 + math.sqrt(math.log(2.0 / epsilon))))
