"""Figures for the CLI report paths, rendered off-screen to PNG."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

_SAVE = {"dpi": 120, "metadata": {"Software": None}, "bbox_inches": "tight"}


def _save(fig, path) -> None:
    fig.savefig(path, format="png", **_SAVE)
    plt.close(fig)


def _draw_curve(ax, curve, color, label=None, arrows: bool = True):
    v = curve.vertices
    if curve.closed:
        v = np.vstack([v, v[:1]])
    ax.plot(v[:, 0], v[:, 1], color=color, lw=1.2, label=label)
    if arrows and len(v) > 1:
        mid = len(v) // 2
        a, b = v[mid - 1], v[mid]
        ax.annotate("", xy=b, xytext=a, arrowprops={"arrowstyle": "->", "color": color})


def plot_curves(path, curves, labels=None, max_curves: int = 200) -> None:
    """Curves colored by label, with an arrow showing each orientation."""
    labels = list(labels) if labels is not None else [""] * len(curves)
    kinds = sorted(set(labels))
    cmap = plt.get_cmap("tab10")
    fig, ax = plt.subplots(figsize=(6, 4))
    seen = set()
    for c, lab in list(zip(curves, labels))[:max_curves]:
        color = cmap(kinds.index(lab) % 10)
        _draw_curve(ax, c, color, label=lab if lab and lab not in seen else None, arrows=len(curves) <= 20)
        seen.add(lab)
    if any(kinds):
        ax.legend(loc="best", fontsize=8)
    ax.set_aspect("auto")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    _save(fig, path)


def plot_field(path, raster, domain, curve=None, title: str = "") -> None:
    """Signed field on its grid (red positive, blue negative) with the curve on top."""
    r = np.asarray(raster, dtype=float)
    m = float(np.abs(r).max()) or 1.0
    fig, ax = plt.subplots(figsize=(5, 5))
    im = ax.imshow(r, origin="lower", extent=(domain[0], domain[2], domain[1], domain[3]),
                   cmap="RdBu_r", vmin=-m, vmax=m, interpolation="nearest")
    fig.colorbar(im, ax=ax, shrink=0.8)
    if curve is not None:
        _draw_curve(ax, curve, "black")
    if title:
        ax.set_title(title)
    _save(fig, path)


def plot_matrix(path, matrix, ids) -> None:
    fig, ax = plt.subplots(figsize=(5, 4.5))
    im = ax.imshow(np.asarray(matrix, dtype=float), cmap="viridis")
    fig.colorbar(im, ax=ax, shrink=0.8)
    if len(ids) <= 30:
        ax.set_xticks(range(len(ids)), ids, rotation=90, fontsize=7)
        ax.set_yticks(range(len(ids)), ids, fontsize=7)
    _save(fig, path)


def plot_errors(path, reports: dict) -> None:
    """Box plot of per-repeat test errors, one box per named report."""
    names = list(reports)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.boxplot([reports[n].errors for n in names])
    ax.set_xticks(range(1, len(names) + 1), names)
    ax.set_ylim(-0.02, 1.02)
    ax.set_ylabel("test error")
    _save(fig, path)


def plot_suites(path, reports) -> None:
    """Largest observed lhs/rhs ratio per suite against the bound at 1."""
    names = [r.suite for r in reports]
    ratios = [r.max_ratio for r in reports]
    colors = ["tab:green" if r.passed else "tab:red" for r in reports]
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.bar(names, ratios, color=colors)
    ax.axhline(1.0, color="black", lw=0.8, ls="--")
    ax.set_ylabel("max lhs / rhs")
    ax.tick_params(axis="x", rotation=45)
    _save(fig, path)
