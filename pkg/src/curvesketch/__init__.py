"""Orientation-aware landmark sketches of planar polylines."""

from .curves import Locus, Point2, Polyline, Segment, closest_point, closest_points, densify, reverse, segment_intersects
from .descriptors import SlfsEstimate, sigma_select, slfs_estimate, sma_membership
from .distances import DistanceSpec, d_q, discrete_frechet, dtw, hausdorff, refined_hausdorff
from .features import (
    ConeViolation,
    FeatureVector,
    LandmarkSet,
    SketchConfig,
    Variant,
    field_raster,
    mindist_feature,
    sign_at_vertex,
    signed_feature,
    sketch,
    vertex_normal_cone,
)

__version__ = "0.1.0"

__all__ = [
    "ConeViolation",
    "DistanceSpec",
    "FeatureVector",
    "LandmarkSet",
    "Locus",
    "Point2",
    "Polyline",
    "Segment",
    "SketchConfig",
    "SlfsEstimate",
    "Variant",
    "closest_point",
    "closest_points",
    "d_q",
    "densify",
    "discrete_frechet",
    "dtw",
    "field_raster",
    "hausdorff",
    "mindist_feature",
    "refined_hausdorff",
    "reverse",
    "segment_intersects",
    "sigma_select",
    "sign_at_vertex",
    "signed_feature",
    "sketch",
    "slfs_estimate",
    "sma_membership",
    "vertex_normal_cone",
]
