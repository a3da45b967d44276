"""Signed landmark features of oriented curves.

For a landmark q with closest curve point p at distance d the signed feature is

    v = (1/sigma) * <n_p(q), q - p> * exp(-d^2 / sigma^2)

where n_p(q) is the segment normal at regular points and, at a corner, the
unit vector of the corner's normal cone that maximizes |<u, q - p>|.  At the
two ends of an open curve the fixed tangent normal is used together with the
l1 norm of q - p in the (normal, tangent) frame:

    v = (1/sigma) * <n_p, (q - p)/d> * (|<q-p, n_p>| + |<q-p, t>|) * exp(-d^2 / sigma^2)

The unsigned variant is plain closest-point distance.
"""

from __future__ import annotations

import enum
import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .curves import DEFAULT_TOL, Locus, Polyline, _as_points, closest_point, closest_points

__all__ = [
    "ConeViolation",
    "FeatureVector",
    "LandmarkSet",
    "NormalConeQuery",
    "SketchConfig",
    "Variant",
    "field_raster",
    "mindist_feature",
    "sign_at_vertex",
    "signed_feature",
    "signed_features",
    "sketch",
    "sketch_many",
    "vertex_normal_cone",
]


class ConeViolation(ValueError):
    """q - p lies outside the normal cone, so the vertex cannot be the argmin."""


class Variant(str, enum.Enum):
    SIGNED = "signed"
    MINDIST = "mindist"


@dataclass(frozen=True, eq=False)
class LandmarkSet:
    """Ordered landmark points plus a record of how they were made."""

    points: np.ndarray
    provenance: dict = field(default_factory=lambda: {"kind": "explicit"})

    def __post_init__(self):
        pts = _as_points(self.points).copy()
        if len(pts) == 0:
            raise ValueError("landmark set is empty")
        if not np.all(np.isfinite(pts)):
            raise ValueError("landmarks must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    def digest(self) -> str:
        return hashlib.sha256(self.points.tobytes()).hexdigest()[:16]


@dataclass(frozen=True)
class SketchConfig:
    sigma: float
    variant: Variant
    landmarks: LandmarkSet

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.variant is Variant.SIGNED and not (math.isfinite(self.sigma) and self.sigma > 0):
            raise ValueError(f"sigma must be positive and finite, got {self.sigma!r}")

    def identity(self) -> tuple:
        sigma = None if self.variant is Variant.MINDIST else float(self.sigma)
        return (self.variant.value, sigma, self.landmarks.digest())


@dataclass(frozen=True)
class FeatureVector:
    values: np.ndarray
    config: SketchConfig
    curve_id: str = ""

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class NormalConeQuery:
    """Normal cone at a vertex together with the direction of q - p.

    ``theta`` is measured from ``facing * incoming_normal``.  ``facing`` is -1
    when q - p sits in the negated cone (the reflex side of a right turn).
    ``half_turn`` marks cones that span pi: open-curve ends, where the second
    normal is the negation of the first, and cusps.
    """

    incoming_normal: tuple[float, float]
    outgoing_normal: tuple[float, float]
    alpha: float
    theta: float
    facing: int = 1
    half_turn: bool = False


def _angle(u, v) -> float:
    # atan2 keeps precision for nearly parallel vectors, where acos does not
    cross = u[0] * v[1] - u[1] * v[0]
    dot = u[0] * v[0] + u[1] * v[1]
    return math.atan2(abs(cross), dot)


def vertex_normal_cone(curve: Polyline, vertex_index: int, q, tol: float = DEFAULT_TOL) -> NormalConeQuery:
    """Normal cone at a vertex that is the argmin for ``q``.

    Raises
    ------
    ConeViolation
        If q - p is outside the cone by more than ``tol`` radians.
    """
    p = curve.vertices[vertex_index]
    u = np.asarray(q, dtype=float) - p
    if math.hypot(*u) == 0.0:
        raise ValueError("q coincides with the vertex; the cone direction is undefined")

    if curve.is_endpoint(vertex_index):
        first = vertex_index == 0
        seg = 0 if first else curve.n_segments - 1
        w = curve.normals[seg]
        along = float(np.dot(u, curve.tangents[seg])) / math.hypot(*u)
        # the cone sweeps from w to -w through the outward tangent
        if (first and along > tol) or (not first and along < -tol):
            raise ConeViolation(f"q - p points along the curve at end vertex {vertex_index}")
        theta = _angle(w, u)
        return NormalConeQuery(tuple(w), tuple(-w), math.pi, theta, 1, True)

    i_in, i_out = curve.adjacent_segments(vertex_index)
    w_in, w_out = curve.normals[i_in], curve.normals[i_out]
    alpha = _angle(w_in, w_out)
    turn = int(curve.turn_signs[vertex_index])

    if turn == 0 and alpha > math.pi / 2:
        theta = _angle(w_in, u)
        return NormalConeQuery(tuple(w_in), tuple(w_out), alpha, theta, 1, True)

    facing = turn if turn != 0 else (1 if np.dot(w_in, u) >= 0 else -1)
    theta = _angle(facing * w_in, u)
    theta_out = _angle(facing * w_out, u)
    if theta > alpha + tol or theta_out > alpha + tol:
        raise ConeViolation(
            f"q - p is outside the normal cone at vertex {vertex_index} "
            f"(theta={theta:.6g}, alpha={alpha:.6g})"
        )
    theta = min(max(theta, 0.0), alpha)
    return NormalConeQuery(tuple(w_in), tuple(w_out), alpha, theta, facing, False)


def sign_at_vertex(cone: NormalConeQuery, tol: float = DEFAULT_TOL) -> int:
    """Sign of <n_p(q), q - p> for a vertex argmin.

    Inside a corner cone every admissible normal lies on the same side as
    q - p (or its negation), so the sign is the cone's facing.  For cones that
    span pi the normal is interpolated from n to -n, and
    <n_t, q - p> = |q - p| cos(pi * theta / alpha) decides the sign, with 0 on
    the bisector.
    """
    if cone.alpha <= tol:
        raise ValueError("degenerate cone (alpha = 0): use the regular-point normal")
    if cone.half_turn:
        if abs(cone.theta - cone.alpha / 2) <= tol:
            return 0
        return 1 if math.cos(math.pi * cone.theta / cone.alpha) > 0 else -1
    return int(cone.facing)


def _kernel(d, sigma):
    return np.exp(-((d / sigma) ** 2)) / sigma


def signed_feature(curve: Polyline, q, sigma: float, tol: float = DEFAULT_TOL) -> float:
    """Signed feature of one landmark, computed through the normal-cone route.

    Examples
    --------
    >>> seg = Polyline([(-1, 0), (1, 0)])
    >>> round(signed_feature(seg, (0, 1), 1.0), 6)
    -0.367879
    >>> round(signed_feature(seg, (2, 1), 1.0), 6)
    -0.191393
    """
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    r = closest_point(curve, q)
    d = r.distance
    if d <= tol:
        return 0.0
    weight = math.exp(-((d / sigma) ** 2)) / sigma
    if r.locus == Locus.SEGMENT_INTERIOR:
        return r.perp_signed * weight
    u = np.asarray(q, dtype=float) - np.asarray(r.point)
    if r.locus == Locus.ENDPOINT:
        seg = 0 if r.vertex_index == 0 else curve.n_segments - 1
        n, t = curve.normals[seg], curve.tangents[seg]
        un, ut = float(np.dot(u, n)), float(np.dot(u, t))
        return (un / d) * (abs(un) + abs(ut)) * weight
    cone = vertex_normal_cone(curve, r.vertex_index, q, tol=1e-6)
    if cone.alpha <= tol:
        i_in, _ = curve.adjacent_segments(r.vertex_index)
        return float(np.dot(curve.normals[i_in], u)) * weight
    return sign_at_vertex(cone, tol) * d * weight


def signed_features(curve: Polyline, Q, sigma: float, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Vectorized signed features for all rows of ``Q``."""
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    Q = _as_points(Q)
    cp = closest_points(curve, Q)
    d = cp.distance
    u = Q - cp.point
    out = cp.perp.copy()

    vert = cp.locus == Locus.INTERIOR_VERTEX
    if np.any(vert):
        vi = cp.vertex[vert]
        turn = curve.turn_signs[vi].astype(float)
        if curve.closed:
            seg_in = (vi - 1) % len(curve.vertices)
        else:
            seg_in = vi - 1
        # straight joins and cusps fall back to the incoming normal
        flat = turn == 0
        side = np.sign(np.einsum("mj,mj->m", u[vert], curve.normals[seg_in]))
        sign = np.where(flat, side, turn)
        out[vert] = sign * d[vert]

    end = cp.locus == Locus.ENDPOINT
    if np.any(end):
        seg = np.where(cp.vertex[end] == 0, 0, curve.n_segments - 1)
        un = np.einsum("mj,mj->m", u[end], curve.normals[seg])
        ut = np.einsum("mj,mj->m", u[end], curve.tangents[seg])
        with np.errstate(invalid="ignore", divide="ignore"):
            out[end] = (un / d[end]) * (np.abs(un) + np.abs(ut))

    out = out * _kernel(d, sigma)
    out[d <= tol] = 0.0
    return out


def mindist_feature(curve: Polyline, q) -> float:
    """Unsigned feature: distance from ``q`` to the curve."""
    return closest_point(curve, q).distance


def sketch(curve: Polyline, config: SketchConfig, curve_id: str = "") -> FeatureVector:
    """Feature vector of ``curve`` over the configured landmarks, in landmark order."""
    Q = config.landmarks.points
    if config.variant is Variant.SIGNED:
        values = signed_features(curve, Q, config.sigma)
    else:
        values = closest_points(curve, Q).distance
    values = np.ascontiguousarray(values)
    values.setflags(write=False)
    return FeatureVector(values, config, curve_id)


def sketch_many(curves, config: SketchConfig, ids=None, threads: int = 1) -> list[FeatureVector]:
    """Sketch a sequence of curves; output order follows input order for any thread count."""
    curves = list(curves)
    ids = list(ids) if ids is not None else [str(i) for i in range(len(curves))]
    if threads <= 1:
        return [sketch(c, config, i) for c, i in zip(curves, ids)]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda ci: sketch(ci[0], config, ci[1]), zip(curves, ids)))


def field_raster(curve: Polyline, domain, nx: int, ny: int, sigma: float) -> np.ndarray:
    """Signed feature on an ny-by-nx grid of cell centres.

    Row ``j`` holds the cells at the j-th y value from the bottom, x increasing
    along the row.
    """
    from .datasets import grid_landmarks

    lm = grid_landmarks(domain, nx, ny)
    return signed_features(curve, lm.points, sigma).reshape(ny, nx)
