"""Matplotlib figures written as byte-stable SVG files."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import numpy as np
from matplotlib.figure import Figure
from matplotlib.patches import Polygon as PolygonPatch

from .geometry import GeometryError, Polytope

STYLE = {
    "svg.hashsalt": "normedvol",
    "svg.fonttype": "none",
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "figure.figsize": (4.0, 4.0),
}

COLORS = ["#1f4e79", "#c0504d", "#4f8a3a", "#7f6084"]


class UnsupportedPlotError(GeometryError):
    pass


def _coords(p):
    if isinstance(p, Polytope):
        if p.dim != 2:
            raise UnsupportedPlotError("only planar bodies can be drawn")
        return p.vertices
    arr = np.asarray(p, float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise UnsupportedPlotError("only planar bodies can be drawn")
    return arr


def polygons_figure(polys, labels=None) -> Figure:
    """Closed outlines of planar bodies; each patch gets the gid of its label."""
    labels = labels or [f"poly{i}" for i in range(len(polys))]
    with matplotlib.rc_context(STYLE):
        fig = Figure()
        ax = fig.add_subplot()
        pts = []
        for i, (p, lab) in enumerate(zip(polys, labels)):
            xy = _coords(p)
            pts.append(xy)
            patch = PolygonPatch(xy, closed=True, fill=i == 0, alpha=0.25 if i == 0 else 1.0,
                                 edgecolor=COLORS[i % len(COLORS)], facecolor=COLORS[i % len(COLORS)],
                                 linewidth=1.2, label=lab)
            patch.set_gid(lab)
            ax.add_patch(patch)
        allp = np.vstack(pts)
        pad = 0.05 * np.ptp(allp, axis=0).max()
        ax.set_xlim(allp[:, 0].min() - pad, allp[:, 0].max() + pad)
        ax.set_ylim(allp[:, 1].min() - pad, allp[:, 1].max() + pad)
        ax.set_aspect("equal")
        ax.legend(loc="upper right", frameon=False)
    return fig


def profile_figure(x, y, xlabel="t", ylabel="value", gid="profile") -> Figure:
    with matplotlib.rc_context(STYLE):
        fig = Figure(figsize=(5.0, 3.2))
        ax = fig.add_subplot()
        (line,) = ax.plot(np.asarray(x, float), np.asarray(y, float), color=COLORS[0], lw=1.2)
        line.set_gid(gid)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        fig.tight_layout()
    return fig


def histogram_figure(values, xlabel, marker=None) -> Figure:
    with matplotlib.rc_context(STYLE):
        fig = Figure(figsize=(5.0, 3.2))
        ax = fig.add_subplot()
        ax.hist(np.asarray(values, float), bins=50, color=COLORS[0])
        if marker is not None:
            ax.axvline(marker, color=COLORS[1], lw=1.0, ls="--")
        ax.set_xlabel(xlabel)
        ax.set_ylabel("count")
        fig.tight_layout()
    return fig


def save_svg(fig: Figure, path) -> None:
    with matplotlib.rc_context(STYLE):
        fig.savefig(path, format="svg", metadata={"Date": None, "Creator": None})


def emit_svg(data, path, kind: str = "polygons", labels=None) -> None:
    """Write polygons (``kind='polygons'``) or an ``(x, y)`` profile to ``path``."""
    if kind == "polygons":
        fig = polygons_figure(data, labels)
    elif kind == "profile":
        x, y = data
        fig = profile_figure(x, y)
    else:
        raise ValueError(f"unknown plot kind {kind!r}")
    save_svg(fig, path)
