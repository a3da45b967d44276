import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvesketch.analysis import fixtures as fx
from curvesketch.curves import Locus, Polyline, closest_points, reverse
from curvesketch.datasets import grid_landmarks
from curvesketch.features import (
    ConeViolation,
    LandmarkSet,
    NormalConeQuery,
    SketchConfig,
    Variant,
    field_raster,
    mindist_feature,
    sign_at_vertex,
    signed_feature,
    signed_features,
    sketch,
    sketch_many,
    vertex_normal_cone,
)

SEG = Polyline([(-1, 0), (1, 0)])
E = math.e


def test_signed_feature_examples():
    assert signed_feature(SEG, (0, 1), 1.0) == pytest.approx(-1 / E, abs=1e-15)
    assert signed_feature(SEG, (0, -1), 1.0) == pytest.approx(1 / E, abs=1e-15)
    # endpoint l1 form with the negative exponent
    assert signed_feature(SEG, (2, 1), 1.0) == pytest.approx(-math.sqrt(2) * math.exp(-2), abs=1e-15)
    assert signed_feature(SEG, (0.3, 0), 0.5) == 0.0


def test_mindist_examples():
    assert mindist_feature(SEG, (0, 0)) == 0.0
    assert mindist_feature(SEG, (0, 1)) == 1.0
    assert mindist_feature(SEG, (2, 1)) == pytest.approx(math.sqrt(2), abs=1e-15)


def test_vertex_cone_examples():
    corner = Polyline([(0, 1), (0, 0), (1, 0)])
    cone = vertex_normal_cone(corner, 1, (-1, -1))
    assert cone.incoming_normal == (-1.0, 0.0) and cone.outgoing_normal == (0.0, -1.0)
    assert cone.alpha == pytest.approx(math.pi / 2) and cone.theta == pytest.approx(math.pi / 4)
    end = vertex_normal_cone(Polyline([(0, 0), (1, 0)]), 0, (-1, 0.5))
    assert end.half_turn and end.alpha == pytest.approx(math.pi)
    assert end.incoming_normal == (0.0, -1.0) and end.outgoing_normal == (0.0, 1.0)


def test_cone_violation():
    corner = Polyline([(0, 1), (0, 0), (1, 0)])
    with pytest.raises(ConeViolation):
        vertex_normal_cone(corner, 1, (1, 1))


def test_sign_at_vertex_half_turn_rule():
    def cone(theta):
        return NormalConeQuery((0.0, -1.0), (0.0, 1.0), math.pi, theta, 1, True)

    assert sign_at_vertex(cone(0.0)) == 1
    assert sign_at_vertex(cone(math.pi / 2)) == 0
    assert sign_at_vertex(cone(math.pi)) == -1
    with pytest.raises(ValueError):
        sign_at_vertex(NormalConeQuery((0.0, -1.0), (0.0, -1.0), 0.0, 0.0))


def test_corner_sign_follows_turn():
    # left turn: the exterior of a counter-clockwise corner is on the right side
    corner = Polyline([(0, 1), (0, 0), (1, 0)])
    assert sign_at_vertex(vertex_normal_cone(corner, 1, (-1, -1))) == 1
    assert signed_feature(corner, (-1, -1), 1.0) > 0
    assert signed_feature(reverse(corner), (-1, -1), 1.0) < 0


def test_collinear_vertex_is_continuous():
    line = Polyline([(0, 0), (1, 0), (2, 0)])
    a = signed_feature(line, (1 - 1e-9, 0.5), 1.0)
    b = signed_feature(line, (1, 0.5), 1.0)
    assert a == pytest.approx(b, abs=1e-8)


def test_vectorized_matches_scalar(rng):
    for _ in range(20):
        g = fx.random_simple_curve(rng)
        Q = rng.uniform(-1.5, 1.5, size=(200, 2))
        sigma = rng.uniform(0.1, 1.0)
        vec = signed_features(g, Q, sigma)
        scalar = np.array([signed_feature(g, q, sigma) for q in Q])
        np.testing.assert_allclose(vec, scalar, atol=1e-12)


def test_magnitude_bounds(rng):
    for _ in range(20):
        g = fx.random_simple_curve(rng)
        sigma = rng.uniform(0.05, 1.0)
        Q = rng.uniform(-2, 2, size=(500, 2))
        v = signed_features(g, Q, sigma) * sigma
        end = closest_points(g, Q).locus == Locus.ENDPOINT
        assert np.all(np.abs(v[~end]) <= 1 / math.sqrt(2 * E) + 1e-12)
        assert np.all(np.abs(v[end]) <= 1 / math.sqrt(E) + 1e-12)


def test_kernel_lipschitz():
    sigma = 0.7
    x = np.linspace(0, 5, 200001)
    f = x / sigma * np.exp(-(x / sigma) ** 2)
    assert np.max(np.abs(np.diff(f)) / np.diff(x)) <= 1 / sigma + 1e-9


@settings(max_examples=50, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.1, 2))
def test_segment_field_is_antisymmetric(x, y, sigma):
    assert signed_feature(SEG, (x, y), sigma) == pytest.approx(-signed_feature(SEG, (x, -y), sigma), abs=1e-15)


def test_sketch_examples(rng):
    g = fx.regular_polygon(6)
    on_curve = LandmarkSet(np.vstack([g.vertices, (g.vertices + np.roll(g.vertices, -1, 0)) / 2]))
    cfg = SketchConfig(0.5, Variant.SIGNED, on_curve)
    np.testing.assert_allclose(sketch(g, cfg).values, 0.0, atol=1e-15)
    lm = grid_landmarks((-1.5, -1.5, 1.5, 1.5), 7, 7)
    md = SketchConfig(0.5, Variant.MINDIST, lm)
    np.testing.assert_allclose(sketch(reverse(g), md).values, sketch(g, md).values, atol=1e-15)
    out = sketch(g, SketchConfig(0.5, "signed", lm))
    assert len(out) == 49 and not out.values.flags.writeable


def test_sketch_many_is_thread_independent(rng):
    curves = [fx.random_simple_curve(rng) for _ in range(12)]
    cfg = SketchConfig(0.4, Variant.SIGNED, grid_landmarks((-1, -1, 1, 1), 9, 9))
    a = np.vstack([v.values for v in sketch_many(curves, cfg, threads=1)])
    b = np.vstack([v.values for v in sketch_many(curves, cfg, threads=4)])
    np.testing.assert_array_equal(a, b)


def test_config_validation():
    lm = LandmarkSet([(0, 0)])
    with pytest.raises(ValueError):
        SketchConfig(0.0, Variant.SIGNED, lm)
    with pytest.raises(ValueError):
        LandmarkSet(np.zeros((0, 2)))
    assert SketchConfig(0.0, Variant.MINDIST, lm).identity()[1] is None


def test_field_raster_symmetry():
    R = field_raster(SEG, (-2, -2, 2, 2), 8, 8, 1.0)
    np.testing.assert_allclose(R, -R[::-1], atol=1e-15)
    np.testing.assert_allclose(field_raster(reverse(SEG), (-2, -2, 2, 2), 8, 8, 1.0), -R, atol=1e-15)
    line = field_raster(SEG, (-1, -0.5, 1, 0.5), 6, 5, 1.0)
    np.testing.assert_array_equal(line[2], 0.0)
