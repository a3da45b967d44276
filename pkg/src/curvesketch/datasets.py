"""Synthetic directional trajectories, landmark grids and domain normalization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import Polyline
from .features import LandmarkSet

LABEL_AB = "A->B"
LABEL_BA = "B->A"


@dataclass(frozen=True)
class Rect:
    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self):
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise ValueError(f"degenerate rectangle {self}")

    @classmethod
    def parse(cls, value) -> "Rect":
        if isinstance(value, Rect):
            return value
        if isinstance(value, str):
            value = [float(v) for v in value.split(",")]
        if len(value) != 4:
            raise ValueError("a rectangle needs xmin,ymin,xmax,ymax")
        return cls(*map(float, value))

    @property
    def diameter(self) -> float:
        return float(np.hypot(self.xmax - self.xmin, self.ymax - self.ymin))

    def as_list(self) -> list[float]:
        return [self.xmin, self.ymin, self.xmax, self.ymax]

    def sample(self, rng: np.random.Generator, n: int | None = None) -> np.ndarray:
        size = (2,) if n is None else (n, 2)
        u = rng.random(size)
        return np.array([self.xmin, self.ymin]) + u * np.array(
            [self.xmax - self.xmin, self.ymax - self.ymin]
        )


@dataclass(frozen=True)
class DirectionalSpec:
    n_per_class: int = 100
    seed: int = 0
    a_box: Rect = Rect(-1.0, -1.0, 1.0, 1.0)
    b_box: Rect = Rect(98.0, -1.0, 99.0, 1.0)
    n_mid: int = 98
    mid_height: float = 5.0

    def mid_box(self, i: int) -> Rect:
        """The i-th intermediate box, i = 1..n_mid."""
        return Rect(float(i), -self.mid_height, float(i + 1), self.mid_height)


def curve_rng(seed: int, label_index: int, k: int) -> np.random.Generator:
    """Stream for curve ``k`` of class ``label_index``.

    PCG64 seeded from ``SeedSequence([seed, label_index, k])`` so any curve can
    be regenerated without producing the ones before it.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, label_index, k])))


def _directional_curve(spec: DirectionalSpec, rng: np.random.Generator, forward: bool) -> Polyline:
    boxes = [spec.a_box] + [spec.mid_box(i) for i in range(1, spec.n_mid + 1)] + [spec.b_box]
    if not forward:
        boxes = boxes[::-1]
    return Polyline(np.array([box.sample(rng) for box in boxes]))


def gen_directional(spec: DirectionalSpec = DirectionalSpec()) -> tuple[list[Polyline], list[str]]:
    """Curves from A to B and from B to A through the same column of boxes.

    The B->A class draws fresh points with the boxes visited in reverse order,
    so both classes share one vertex distribution and differ only in direction.
    Returns the curves and their labels, A->B first.
    """
    curves, labels = [], []
    for label_index, (label, forward) in enumerate(((LABEL_AB, True), (LABEL_BA, False))):
        for k in range(spec.n_per_class):
            curves.append(_directional_curve(spec, curve_rng(spec.seed, label_index, k), forward))
            labels.append(label)
    return curves, labels


@dataclass(frozen=True)
class AffineTransform:
    """Per-axis map x' = (x - offset) * scale."""

    offset: tuple[float, float]
    scale: tuple[float, float]

    def apply(self, points) -> np.ndarray:
        return (np.asarray(points, dtype=float) - np.array(self.offset)) * np.array(self.scale)

    def invert(self, points) -> np.ndarray:
        return np.asarray(points, dtype=float) / np.array(self.scale) + np.array(self.offset)

    def to_dict(self) -> dict:
        return {"offset": list(self.offset), "scale": list(self.scale)}


def normalize_to_unit(curves: list[Polyline]) -> tuple[list[Polyline], AffineTransform]:
    """Send the joint bounding box of ``curves`` onto [0, 1]^2, axis by axis."""
    allv = np.vstack([c.vertices for c in curves])
    lo, hi = allv.min(axis=0), allv.max(axis=0)
    extent = hi - lo
    scale = np.where(extent > 0, 1.0 / np.where(extent > 0, extent, 1.0), 1.0)
    tf = AffineTransform((float(lo[0]), float(lo[1])), (float(scale[0]), float(scale[1])))
    return [Polyline(tf.apply(c.vertices), closed=c.closed) for c in curves], tf


def grid_landmarks(domain, nx: int, ny: int) -> LandmarkSet:
    """Cell centres of an nx-by-ny grid over ``domain``, x varying fastest."""
    rect = Rect.parse(domain)
    if nx < 1 or ny < 1:
        raise ValueError("grid dimensions must be positive")
    xs = rect.xmin + (np.arange(nx) + 0.5) * (rect.xmax - rect.xmin) / nx
    ys = rect.ymin + (np.arange(ny) + 0.5) * (rect.ymax - rect.ymin) / ny
    gx, gy = np.meshgrid(xs, ys)
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    return LandmarkSet(pts, {"kind": "grid", "domain": rect.as_list(), "nx": nx, "ny": ny})


def grid_diagonal(domain, nx: int, ny: int) -> float:
    rect = Rect.parse(domain)
    return float(np.hypot((rect.xmax - rect.xmin) / nx, (rect.ymax - rect.ymin) / ny))
