"""Sample-level checks of the stability and interleaving bounds.

Each suite draws instances that meet the hypotheses of one bound, evaluates
both sides and counts violations ``lhs > rhs + atol``.  Fréchet distances
enter through the discrete surrogate on curves densified to step h, which
never under-estimates the continuous value; Hausdorff distances come from
the branch-and-bound evaluation, accurate to 1e-10.

Trials per suite:

* t3, t3_open, t4, t5, old_dq: landmark pairs or (q, curve, curve) triples.
* fix_endpoints, c4, h_lb, c6, c7, c2: curve pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..curves import Locus, Polyline, closest_points, densify
from ..datasets import grid_diagonal, grid_landmarks
from ..descriptors import sigma_select, slfs_estimate
from ..distances import _lp, discrete_frechet, refined_hausdorff
from ..features import signed_features
from . import fixtures as fx

SQRT2 = math.sqrt(2.0)


@dataclass
class SuiteReport:
    suite: str
    trials: int
    seed: int
    checked: int = 0
    skipped: int = 0
    violations: int = 0
    max_ratio: float = 0.0
    max_excess: float = -math.inf
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.checked > 0 and self.violations == 0

    def add(self, lhs, rhs, atol: float) -> None:
        lhs = np.atleast_1d(np.asarray(lhs, dtype=float))
        rhs = np.atleast_1d(np.asarray(rhs, dtype=float))
        self.checked += lhs.size
        self.violations += int(np.count_nonzero(lhs > rhs + atol))
        pos = rhs > 0
        if np.any(pos):
            self.max_ratio = max(self.max_ratio, float((lhs[pos] / rhs[pos]).max()))
        if lhs.size:
            self.max_excess = max(self.max_excess, float((lhs - rhs).max()))

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "trials": self.trials,
            "seed": self.seed,
            "checked": self.checked,
            "skipped": self.skipped,
            "violations": self.violations,
            "max_ratio": self.max_ratio,
            "max_excess": self.max_excess if self.checked else None,
            "status": "PASS" if self.passed else "FAIL",
            "notes": list(self.notes),
        }


def _rng(seed: int, *keys: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, *keys])))


def _expanded_bounds(curves, margin: float):
    allv = np.vstack([c.vertices for c in curves])
    lo, hi = allv.min(axis=0) - margin, allv.max(axis=0) + margin
    return (float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1]))


def _uniform(rng, box, n):
    lo, hi = np.array(box[:2]), np.array(box[2:])
    return lo + rng.random((n, 2)) * (hi - lo)


def _near_curve(rng, curve, n, radius):
    s = rng.uniform(0, curve.length, n)
    base = np.array([curve.point_at(x) for x in s])
    ang = rng.uniform(0, 2 * math.pi, n)
    r = radius * np.sqrt(rng.random(n))
    return base + r[:, None] * np.column_stack([np.cos(ang), np.sin(ang)])


def landmark_pairs(rng, curve: Polyline, sigma: float, n: int, end_fraction: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Random landmark pairs around ``curve``.

    A share ``end_fraction`` of the pairs starts within sigma/4 of an end
    point of an open curve, separation log-uniform in [1e-4, 1e-1] sigma.
    Half of the rest are close pairs (separation log-uniform in [1e-4, 1]
    sigma, first point within 3 sigma of the curve) and half are independent
    points in the padded bounding box.
    """
    def offsets(k, lo, hi):
        ang = rng.uniform(0, 2 * math.pi, k)
        r = sigma * 10.0 ** rng.uniform(lo, hi, k)
        return r[:, None] * np.column_stack([np.cos(ang), np.sin(ang)])

    n_end = int(n * end_fraction) if not curve.closed else 0
    n_local = (n - n_end) // 2
    n_global = n - n_end - n_local
    ends = curve.vertices[[0, -1]][rng.integers(2, size=n_end)]
    q1_end = ends + offsets(n_end, -4, -0.6)
    q2_end = q1_end + offsets(n_end, -4, -1)
    q1_local = _near_curve(rng, curve, n_local, 3 * sigma)
    q2_local = q1_local + offsets(n_local, -4, 0)
    box = _expanded_bounds([curve], 3 * sigma)
    q1 = np.vstack([q1_end, q1_local, _uniform(rng, box, n_global)])
    q2 = np.vstack([q2_end, q2_local, _uniform(rng, box, n_global)])
    return q1, q2


def _foot_signs(curve: Polyline, Q, cp) -> np.ndarray:
    """Sign of the feature at each query, with zeros mapped to +1."""
    v = signed_features(curve, Q, 1.0)
    return np.where(v < 0, -1, 1)


def axis_crossing(curve: Polyline, q1, q2, samples: int = 33, signed: bool = False) -> np.ndarray:
    """Whether the closest point jumps somewhere along each segment q1 -> q2.

    Closest points move no faster than the query along a polyline, except
    when the query crosses the medial axis.  A jump is a step where the foot
    moves more than twice the query step.  With ``signed`` the jump must
    also flip the sign of the feature, which marks the signed medial axis.
    """
    q1, q2 = np.atleast_2d(q1), np.atleast_2d(q2)
    t = np.linspace(0, 1, samples)
    pts = q1[:, None, :] + t[None, :, None] * (q2 - q1)[:, None, :]
    flat = pts.reshape(-1, 2)
    cp = closest_points(curve, flat)
    foot = cp.point.reshape(len(q1), samples, 2)
    dq = np.hypot(*(q2 - q1).T) / (samples - 1)
    dp = np.hypot(*np.diff(foot, axis=1).transpose(2, 0, 1))
    jump = dp > 2 * dq[:, None] + 1e-12
    if signed:
        s = _foot_signs(curve, flat, cp).reshape(len(q1), samples)
        jump &= s[:, 1:] != s[:, :-1]
    return jump.any(axis=1)


def _endpoint_argmin(curve, Q):
    return closest_points(curve, Q).locus == Locus.ENDPOINT


def _beyond_end(curve: Polyline, Q) -> np.ndarray:
    """Endpoint argmin with q - p pointing past the end along the tangent."""
    cp = closest_points(curve, Q)
    end = cp.locus == Locus.ENDPOINT
    out = np.zeros(len(Q), dtype=bool)
    if np.any(end):
        first = cp.vertex[end] == 0
        tangent = np.where(first[:, None], -curve.tangents[0], curve.tangents[-1])
        u = Q[end] - cp.point[end]
        out[end] = np.einsum("mj,mj->m", u, tangent) > 1e-12
    return out


def _split(total: int, per: int) -> list[int]:
    k = max(1, math.ceil(total / per))
    base = [total // k] * k
    for i in range(total - sum(base)):
        base[i] += 1
    return base


# landmark stability ---------------------------------------------------------


def suite_t3(trials: int, seed: int) -> SuiteReport:
    """Closed convex polygons: |v1 - v2| <= |q1 - q2| / sigma."""
    rep = SuiteReport("t3", trials, seed)
    for i, n in enumerate(_split(trials, 1000)):
        rng = _rng(seed, i)
        curve = fx.random_convex_polygon(rng, scale=rng.uniform(0.5, 2.0))
        x0, y0, x1, y1 = curve.bounds()
        sigma = math.hypot(x1 - x0, y1 - y0) * rng.uniform(0.05, 1.0)
        q1, q2 = landmark_pairs(rng, curve, sigma, n)
        dv = np.abs(signed_features(curve, q1, sigma) - signed_features(curve, q2, sigma))
        rep.add(dv, np.hypot(*(q1 - q2).T) / sigma, 1e-9)
    return rep


def suite_t3_open(trials: int, seed: int, end_fraction: float = 0.2) -> SuiteReport:
    """Open curves with infinite slfs: |v1 - v2| <= sqrt(2) |q1 - q2| / sigma.

    Pairs that cross the medial axis while one of them takes an end point as
    closest point are excluded.  Near an end point the feature's local
    Lipschitz constant is 1.5275/sigma, so close pairs there can exceed the
    bound by up to 8%.
    """
    rep = SuiteReport("t3_open", trials, seed)
    for i, n in enumerate(_split(trials, 1000)):
        rng = _rng(seed, i)
        kind = i % 3
        if kind == 0:
            curve = fx.segment_fixture(rng)
        elif kind == 1:
            curve = fx.open_convex_arc(rng)
        else:
            curve = fx.u_hairpin(rng.uniform(0.2, 1.0), rng.uniform(2.0, 6.0))
        x0, y0, x1, y1 = curve.bounds()
        diam = math.hypot(x1 - x0, y1 - y0)
        if slfs_estimate(curve, diam / 50).finite:
            rep.skipped += n
            rep.notes.append(f"instance {i}: sampled slfs is finite, skipped")
            continue
        sigma = diam * rng.uniform(0.05, 1.0)
        q1, q2 = landmark_pairs(rng, curve, sigma, n, end_fraction)
        bad = axis_crossing(curve, q1, q2) & (_endpoint_argmin(curve, q1) | _endpoint_argmin(curve, q2))
        rep.skipped += int(bad.sum())
        q1, q2 = q1[~bad], q2[~bad]
        dv = np.abs(signed_features(curve, q1, sigma) - signed_features(curve, q2, sigma))
        rep.add(dv, SQRT2 * np.hypot(*(q1 - q2).T) / sigma, 1e-9)
    return rep


def suite_t4(trials: int, seed: int, step: float = 0.05, end_fraction: float = 0.2) -> SuiteReport:
    """Coil fixture with finite slfs: |v1 - v2| <= max(eps, 2 |q1 - q2| / sigma).

    delta is the sampled slfs, eps = delta / 8 and sigma the largest value
    the hypothesis allows.  Pairs that cross the signed medial axis while one
    of them sits past an end point along its tangent are excluded.
    """
    rep = SuiteReport("t4", trials, seed)
    for i, n in enumerate(_split(trials, 2000)):
        rng = _rng(seed, i)
        curve = fx.coil(rng.uniform(0.3, 1.5))
        est = slfs_estimate(curve, step)
        delta = est.value
        eps = delta / 8
        sigma = sigma_select(delta, eps)
        q1, q2 = landmark_pairs(rng, curve, sigma, n, end_fraction)
        bad = axis_crossing(curve, q1, q2, signed=True) & (_beyond_end(curve, q1) | _beyond_end(curve, q2))
        rep.skipped += int(bad.sum())
        q1, q2 = q1[~bad], q2[~bad]
        dv = np.abs(signed_features(curve, q1, sigma) - signed_features(curve, q2, sigma))
        rep.add(dv, np.maximum(eps, 2 * np.hypot(*(q1 - q2).T) / sigma), 1e-9)
        rep.notes.append(f"instance {i}: delta={delta:.6g} eps={eps:.6g} sigma={sigma:.6g}")
    return rep


# curve stability -------------------------------------------------------------


def _frechet_surrogate(c1: Polyline, c2: Polyline, h: float) -> float:
    return discrete_frechet(densify(c1, h), densify(c2, h))


def suite_t5(trials: int, seed: int, h: float = 0.02, curves: str = "mixed") -> SuiteReport:
    """Perturbed curves: |v(g) - v(g')| <= c/sigma (dF + h) at landmarks
    meeting condition (1) (same sign) or (3) (far from both curves).

    ``curves`` picks closed star polygons, open x-monotone polylines or a
    mix.  c is sqrt(2), or 1 when every curve is closed.  On open curves the
    end-point feature depends on the end tangent as well as on the distance,
    so condition (1) does not bound it and violations appear there.
    """
    if curves not in ("mixed", "closed", "open"):
        raise ValueError(f"curves must be mixed, closed or open, got {curves!r}")
    const = 1.0 if curves == "closed" else SQRT2
    rep = SuiteReport("t5", trials, seed)
    for i, n in enumerate(_split(trials, 200)):
        rng = _rng(seed, i)
        if curves == "closed":
            g = fx.star_polygon(rng)
        elif curves == "open":
            g = fx.monotone_polyline(rng)
        else:
            g = fx.random_simple_curve(rng)
        g2 = fx.perturbed(g, rng, rng.uniform(0.01, 0.1))
        sigma = rng.uniform(0.1, 1.0)
        dF = _frechet_surrogate(g, g2, h)
        dH = refined_hausdorff(g, g2).symmetric
        Q = _uniform(rng, _expanded_bounds([g, g2], 2 * sigma), n)
        v1, v2 = signed_features(g, Q, sigma), signed_features(g2, Q, sigma)
        ok = v1 * v2 >= 0
        if dH > 0 and 2 * sigma / dH > 1:
            # dH <= dF, so this threshold is at least the true one
            far = sigma * (1 + math.sqrt(math.log(2 * sigma / dH)))
            d1 = closest_points(g, Q).distance
            d2 = closest_points(g2, Q).distance
            ok |= (d1 >= far) & (d2 >= far)
        rep.skipped += int((~ok).sum())
        rep.add(np.abs(v1 - v2)[ok], np.full(int(ok.sum()), const * (dF + h) / sigma), 1e-9)
    return rep


def _grid_for(curves, nx: int, ny: int, margin: float):
    box = _expanded_bounds(curves, margin)
    return box, grid_landmarks(box, nx, ny).points


def suite_fix_endpoints(trials: int, seed: int, h: float = 0.01, constant: float = SQRT2) -> SuiteReport:
    """Curves sharing end points and end tangents: d_Q^{sigma,p} <= constant/sigma (dF + h), p in {1, 2, inf}."""
    rep = SuiteReport("fix_endpoints", trials, seed)
    for i in range(trials):
        rng = _rng(seed, i)
        g, g2 = fx.shared_end_pair(rng)
        sigma = rng.uniform(0.05, 1.0)
        _, Q = _grid_for([g, g2], 20, 20, 0.25)
        dv = signed_features(g, Q, sigma) - signed_features(g2, Q, sigma)
        rhs = constant * (_frechet_surrogate(g, g2, h) + h) / sigma
        rep.add([_lp(dv, p) for p in (1.0, 2.0, math.inf)], [rhs] * 3, 1e-9)
    return rep


def suite_c4(trials: int, seed: int, h: float = 0.02) -> SuiteReport:
    """Nested convex closed pairs, same orientation: d_Q^{sigma,p} <= (dF + h)/sigma, p in {1, 2, inf}."""
    rep = SuiteReport("c4", trials, seed)
    for i in range(trials):
        rng = _rng(seed, i)
        g, g2 = fx.nested_convex_pair(rng)
        sigma = rng.uniform(0.1, 2.0)
        _, Q = _grid_for([g, g2], 20, 20, 0.5)
        dv = signed_features(g, Q, sigma) - signed_features(g2, Q, sigma)
        rhs = (_frechet_surrogate(g, g2, h) + h) / sigma
        rep.add([_lp(dv, p) for p in (1.0, 2.0, math.inf)], [rhs] * 3, 1e-9)
    return rep


# interleaving ----------------------------------------------------------------


def _large_sigma_setup(curves, n: int):
    box = _expanded_bounds(curves, 0.0)
    diam = math.hypot(box[2] - box[0], box[3] - box[1])
    sigma = 10.0 * diam
    Q = grid_landmarks(box, n, n).points
    return sigma, Q, grid_diagonal(box, n, n)


def _closed_pair(rng):
    if rng.integers(2):
        return fx.nested_convex_pair(rng)
    g = fx.star_polygon(rng)
    return g, fx.perturbed(g, rng, rng.uniform(0.01, 0.2))


def suite_h_lb(trials: int, seed: int, grid: int = 64) -> SuiteReport:
    """Closed curves, sigma = 10 diam: d_H / sigma <= d_Q^{sigma,inf} + grid diagonal / sigma."""
    rep = SuiteReport("h_lb", trials, seed)
    for i in range(trials):
        rng = _rng(seed, i)
        g, g2 = _closed_pair(rng)
        sigma, Q, diag = _large_sigma_setup([g, g2], grid)
        dq = _lp(signed_features(g, Q, sigma) - signed_features(g2, Q, sigma), math.inf)
        dH = refined_hausdorff(g, g2).symmetric
        rep.add(dH / sigma, dq + diag / sigma, 1e-12)
    return rep


def suite_c6(trials: int, seed: int, grid: int = 64, h: float = 0.02) -> SuiteReport:
    """Nested convex closed pairs, sigma = 10 diam:
    |sigma d_Q^{sigma,inf} - d_H| <= grid diagonal + h + 0.01 d_H.

    h is the Fréchet surrogate step; the 0.01 d_H term covers the factor
    exp(-d^2/sigma^2) >= exp(-0.01) left by a finite sigma.
    """
    rep = SuiteReport("c6", trials, seed)
    for i in range(trials):
        rng = _rng(seed, i)
        g, g2 = fx.nested_convex_pair(rng)
        sigma, Q, diag = _large_sigma_setup([g, g2], grid)
        dq = _lp(signed_features(g, Q, sigma) - signed_features(g2, Q, sigma), math.inf)
        dH = refined_hausdorff(g, g2).symmetric
        rep.add(abs(sigma * dq - dH), diag + h + 0.01 * dH, 1e-12)
    return rep


def suite_c7(trials: int, seed: int, grid: int = 64, h: float = 0.01) -> SuiteReport:
    """kappa-bounded staircases with shared ends, sigma = 10 diam:
    (dF - h)/(sigma (kappa + 1)) <= d_Q^{sigma,inf} + diag/sigma and
    d_Q^{sigma,inf} <= sqrt(2)/sigma (dF + h), with dF the discrete surrogate."""
    rep = SuiteReport("c7", trials, seed)
    for i in range(trials):
        rng = _rng(seed, i)
        g, g2 = fx.staircase_pair(rng)
        kappa = max(fx.kappa_bound(g, 0.02), fx.kappa_bound(g2, 0.02))
        sigma, Q, diag = _large_sigma_setup([g, g2], grid)
        dq = _lp(signed_features(g, Q, sigma) - signed_features(g2, Q, sigma), math.inf)
        dF = _frechet_surrogate(g, g2, h)
        rep.add((dF - h) / (sigma * (kappa + 1)), dq + diag / sigma, 1e-12)
        rep.add(dq, SQRT2 * (dF + h) / sigma, 1e-12)
    return rep


def suite_old_dq(trials: int, seed: int) -> SuiteReport:
    """|v^mD_q(g) - v^mD_q(g')| <= d_H(g, g') for any curves and q."""
    rep = SuiteReport("old_dq", trials, seed)
    for i, n in enumerate(_split(trials, 100)):
        rng = _rng(seed, i)
        g, g2 = fx.random_simple_curve(rng), fx.random_simple_curve(rng)
        Q = _uniform(rng, _expanded_bounds([g, g2], 1.0), n)
        dv = np.abs(closest_points(g, Q).distance - closest_points(g2, Q).distance)
        rep.add(dv, np.full(n, refined_hausdorff(g, g2).symmetric), 1e-9)
    return rep


def suite_c2(trials: int, seed: int, grid: int = 64) -> SuiteReport:
    """|d_Q^{mD,inf} - d_H| <= grid diagonal on a grid over the joint bounding box."""
    rep = SuiteReport("c2", trials, seed)
    for i in range(trials):
        rng = _rng(seed, i)
        g, g2 = fx.random_simple_curve(rng), fx.random_simple_curve(rng)
        box = _expanded_bounds([g, g2], 0.0)
        Q = grid_landmarks(box, grid, grid).points
        dq = float(np.abs(closest_points(g, Q).distance - closest_points(g2, Q).distance).max())
        rep.add(abs(dq - refined_hausdorff(g, g2).symmetric), grid_diagonal(box, grid, grid), 1e-9)
    return rep


SUITES = {
    "t3": suite_t3,
    "t3_open": suite_t3_open,
    "t4": suite_t4,
    "t5": suite_t5,
    "fix_endpoints": suite_fix_endpoints,
    "c4": suite_c4,
    "h_lb": suite_h_lb,
    "c6": suite_c6,
    "c7": suite_c7,
    "old_dq": suite_old_dq,
    "c2": suite_c2,
}


def verify_theorem_suite(suite_id: str, trials: int, seed: int, **options) -> SuiteReport:
    if suite_id not in SUITES:
        raise ValueError(f"unknown suite {suite_id!r}; choose from {', '.join(SUITES)}")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    return SUITES[suite_id](trials, seed, **options)
