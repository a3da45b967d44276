import math

import numpy as np
import pytest

from curvesketch.analysis import fixtures as fx
from curvesketch.analysis.verify import (
    SUITES,
    SuiteReport,
    axis_crossing,
    landmark_pairs,
    verify_theorem_suite,
)
from curvesketch.curves import Polyline
from curvesketch.distances import discrete_frechet
from curvesketch.features import signed_feature, signed_features

PASSING = ["t3", "t4", "fix_endpoints", "c4", "h_lb", "c6", "c7", "old_dq", "c2"]


@pytest.mark.parametrize("name", PASSING)
def test_suites_pass_small(name):
    rep = verify_theorem_suite(name, 200 if name in ("t3", "t4", "old_dq") else 10, 3)
    assert rep.passed, rep.to_dict()


def test_t5_closed_curves_pass():
    assert verify_theorem_suite("t5", 100, 0, curves="closed").passed


def test_unknown_suite():
    with pytest.raises(ValueError):
        verify_theorem_suite("t9", 10, 0)
    assert set(PASSING) | {"t3_open", "t5"} == set(SUITES)


def test_report_bookkeeping():
    rep = SuiteReport("x", 3, 0)
    rep.add([0.5, 1.2, 1.0], [1.0, 1.0, 1.0], 1e-9)
    d = rep.to_dict()
    assert (d["checked"], d["violations"], d["status"]) == (3, 1, "FAIL")
    assert d["max_ratio"] == pytest.approx(1.2)


def test_endpoint_lipschitz_constant_exceeds_sqrt2():
    # the open-curve bound needs |grad v| <= sqrt(2)/sigma; near an end point it reaches ~1.5275/sigma
    seg = Polyline([(-1.0, 0.0), (0.0, 0.0)])
    sigma, r, h = 1.0, 1e-3, 1e-7
    worst = 0.0
    for phi in np.linspace(-math.pi / 2 + 1e-3, math.pi / 2 - 1e-3, 2001):
        q = np.array([r * math.cos(phi), r * math.sin(phi)])
        gx = (signed_feature(seg, q + (h, 0), sigma) - signed_feature(seg, q - (h, 0), sigma)) / (2 * h)
        gy = (signed_feature(seg, q + (0, h), sigma) - signed_feature(seg, q - (0, h), sigma)) / (2 * h)
        worst = max(worst, math.hypot(gx, gy))
    assert worst * sigma == pytest.approx(1.5275, abs=1e-3)
    assert worst * sigma > math.sqrt(2)


def test_open_curve_frechet_counterexample():
    # equal start, end tangent tilted by delta: v changes by ~ delta (1 + r/L) / sigma at q past the end
    sigma, L, r, delta = 1.0, 0.1, 0.3, 1e-4
    g = Polyline([(0, 0), (L, 0)])
    g2 = Polyline([(0, 0), (L, delta)])
    q = (L + r, 0.0)
    dv = abs(signed_feature(g, q, sigma) - signed_feature(g2, q, sigma))
    dF = discrete_frechet(g, g2)
    assert dF == pytest.approx(delta)
    assert dv / (dF / sigma) == pytest.approx((1 + r / L) * math.exp(-(r / sigma) ** 2), rel=5e-3)
    assert dv > math.sqrt(2) * dF / sigma


def test_t3_open_shows_endpoint_excess():
    rep = verify_theorem_suite("t3_open", 3000, 0)
    assert rep.violations > 0 and rep.max_ratio < 1.5275 / math.sqrt(2) + 1e-3


def test_landmark_pairs_and_axis_crossing(rng):
    curve = fx.coil(0.5)
    q1, q2 = landmark_pairs(rng, curve, 0.1, 300, end_fraction=0.2)
    assert q1.shape == q2.shape == (300, 2)
    diamond = fx.regular_polygon(4)
    cross = axis_crossing(diamond, np.array([[0.3, 0.05]]), np.array([[0.3, -0.05]]))
    same = axis_crossing(diamond, np.array([[0.3, 0.1]]), np.array([[0.35, 0.12]]))
    assert cross[0] and not same[0]


def test_fixtures_meet_hypotheses(rng):
    for _ in range(10):
        g, g2 = fx.shared_end_pair(rng)
        np.testing.assert_array_equal(g.vertices[[0, -1]], g2.vertices[[0, -1]])
        np.testing.assert_array_equal(g.tangents[[0, -1]], g2.tangents[[0, -1]])
        inner, outer = fx.nested_convex_pair(rng)
        assert inner.closed and outer.closed
        vals = signed_features(outer, inner.vertices, 1.0)
        assert np.all(np.sign(vals) == np.sign(vals[0]))
