import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvesketch.curves import (
    CurveError,
    Locus,
    Polyline,
    Segment,
    argmin_is_unique,
    closest_point,
    closest_points,
    densify,
    reverse,
    segment_intersects,
)

SQUARE = Polyline([(0, 0), (1, 0), (1, 1), (0, 1)], closed=True)

coords = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


@st.composite
def polylines(draw, closed=None):
    closed = draw(st.booleans()) if closed is None else closed
    n = draw(st.integers(3 if closed else 2, 8))
    pts = np.array(draw(st.lists(st.tuples(coords, coords), min_size=n, max_size=n)))
    steps = np.diff(pts, axis=0)
    if np.any(np.hypot(*steps.T) < 1e-3):
        pts = np.cumsum(np.vstack([pts[:1], np.sign(steps + 0.5) * (np.abs(steps) + 0.01)]), axis=0)
    if closed and np.hypot(*(pts[0] - pts[-1])) < 1e-3:
        pts[-1] += 0.5
    if closed and len(np.unique(pts, axis=0)) < 3:
        pts = np.array([(0, 0), (1, 0), (0, 1)], dtype=float)
    return Polyline(pts, closed=closed)


def test_construction_errors():
    with pytest.raises(CurveError):
        Polyline([(0, 0)])
    with pytest.raises(CurveError):
        Polyline([(0, 0), (0, 0), (1, 0)])
    with pytest.raises(CurveError):
        Polyline([(0, 0), (1, 0)], closed=True)
    with pytest.raises(CurveError):
        Polyline([(0, 0), (math.nan, 0)])
    with pytest.raises(CurveError):
        Segment((0, 0), (0, 0))


def test_closed_drops_repeated_first_vertex():
    c = Polyline([(0, 0), (1, 0), (0, 1), (0, 0)], closed=True)
    assert len(c) == 3 and c.n_segments == 3


def test_normal_convention_points_right():
    c = Polyline([(0, 0), (1, 0)])
    np.testing.assert_array_equal(c.normals[0], [0.0, -1.0])


def test_closest_point_examples():
    seg = Polyline([(-1, 0), (1, 0)])
    r = closest_point(seg, (0, 1))
    assert r.point == (0.0, 0.0) and r.locus == Locus.SEGMENT_INTERIOR
    assert r.distance == 1.0 and r.perp_signed == -1.0
    r = closest_point(seg, (2, 1))
    assert r.point == (1.0, 0.0) and r.locus == Locus.ENDPOINT
    assert r.distance == pytest.approx(math.sqrt(2), abs=1e-15)
    r = closest_point(Polyline([(0, 1), (0, 0), (1, 0)]), (-1, -1))
    assert r.point == (0.0, 0.0) and r.locus == Locus.INTERIOR_VERTEX and r.vertex_index == 1
    assert r.distance == pytest.approx(math.sqrt(2), abs=1e-15)


def test_closed_curve_has_no_endpoints():
    r = closest_point(SQUARE, (-1, -1))
    assert r.locus == Locus.INTERIOR_VERTEX and r.vertex_index == 0


@settings(max_examples=60, deadline=None)
@given(polylines(), st.tuples(coords, coords))
def test_closest_point_matches_dense_brute_force(curve, q):
    dense = densify(curve, 0.01).vertices
    brute = np.hypot(*(dense - np.asarray(q)).T).min()
    d = closest_points(curve, np.array([q])).distance[0]
    assert d <= brute + 1e-12
    assert brute - d <= 0.005 + 1e-12


def test_densify_examples():
    seg = Polyline([(0, 0), (1, 0)])
    np.testing.assert_allclose(densify(seg, 0.5).vertices, [(0, 0), (0.5, 0), (1, 0)], atol=1e-12)
    assert densify(seg, 2) == seg
    sq = densify(SQUARE, 0.25)
    assert sq.closed and sq.n_segments == 16


@settings(max_examples=40, deadline=None)
@given(polylines(), st.floats(0.05, 3))
def test_densify_keeps_vertices_and_bounds_length(curve, step):
    d = densify(curve, step)
    assert d.seg_lengths.max() <= step * (1 + 1e-9)
    assert d.closed == curve.closed
    assert d.length == pytest.approx(curve.length, rel=1e-12)
    for v in curve.vertices:
        assert np.min(np.hypot(*(d.vertices - v).T)) == 0.0


def test_reverse_examples():
    assert reverse(Polyline([(0, 0), (1, 0)])) == Polyline([(1, 0), (0, 0)])
    tri = Polyline([(0, 0), (1, 0), (0, 1)], closed=True)
    assert reverse(tri) == Polyline([(0, 1), (1, 0), (0, 0)], closed=True)


@settings(max_examples=40, deadline=None)
@given(polylines())
def test_reverse_is_involution_and_flips_normals(curve):
    r = reverse(curve)
    assert reverse(r) == curve
    if not curve.closed:
        np.testing.assert_allclose(r.normals[::-1], -curve.normals, atol=1e-15)


def test_segment_intersects_examples():
    vertical = Polyline([(0, 0), (0, 2)])
    assert segment_intersects(Segment((-1, 1), (1, 1)), vertical)
    assert not segment_intersects(Segment((-1, -1), (1, -1)), vertical)
    assert not segment_intersects(Segment((0, 0), (1, 0)), vertical)
    assert not segment_intersects(Segment((1, 1), (0, 1)), vertical)


def test_argmin_uniqueness():
    seg = Polyline([(-1, 0), (1, 0)])
    assert argmin_is_unique(seg, (0.3, 1))
    hair = Polyline([(0, 0), (10, 0), (10, 1), (0, 1)])
    assert not argmin_is_unique(hair, (5, 0.5))
    assert argmin_is_unique(hair, (5, 0.3))
    # the two sides of a corner report one foot point
    assert argmin_is_unique(Polyline([(0, 1), (0, 0), (1, 0)]), (-1, -1))


def test_point_at_and_bounds():
    assert tuple(SQUARE.point_at(2.5)) == (0.5, 1.0)
    assert SQUARE.bounds() == (0.0, 0.0, 1.0, 1.0)
    assert SQUARE.length == 4.0
