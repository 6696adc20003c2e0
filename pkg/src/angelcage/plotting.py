"""Figures for traces, distance curves and k sweeps.

Figures are built on bare ``matplotlib.figure.Figure`` objects (no pyplot
state) and saved as SVG.  Artists carry ``gid`` values so the SVG can be
checked structurally: ``start``, ``end``, ``path``, ``cage-r<k>``, ``curve``,
``caged`` and ``never-left``.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib
import numpy as np
from matplotlib.figure import Figure
from matplotlib.patches import Circle

SVG_RC = {
    "svg.fonttype": "none",
    "svg.hashsalt": "angelcage",
}


def _figure(width=5.0, height=5.0) -> Figure:
    fig = Figure(figsize=(width, height))
    fig.add_subplot(1, 1, 1)
    return fig


def _pad(lo, hi, frac=0.05):
    span = hi - lo
    pad = frac * span if span > 0 else 1.0
    return lo - pad, hi + pad


def footprint_figure(positions, inner_k: float | None = None, title: str | None = None) -> Figure:
    """Plot a walk's footprints, starting point and end point.

    Uses the first two coordinates; a 1-D walk is drawn against the step index.
    A single position yields exactly one marker.
    """
    pos = np.asarray(positions, dtype=np.int64)
    if pos.ndim != 2 or len(pos) == 0:
        raise ValueError("positions must be a non-empty (steps, dim) array")
    fig = _figure()
    ax = fig.axes[0]
    if pos.shape[1] == 1:
        xs, ys = np.arange(len(pos)), pos[:, 0]
        ax.set_xlabel("step")
        ax.set_ylabel("x1")
    else:
        xs, ys = pos[:, 0], pos[:, 1]
        ax.set_xlabel("x1")
        ax.set_ylabel("x2")
        ax.set_aspect("equal")
    if len(pos) == 1:
        ax.scatter(xs, ys, s=30, c="black", zorder=3, gid="start")
    else:
        ax.plot(xs, ys, lw=0.6, color="tab:blue", alpha=0.8, gid="path")
        ax.scatter(xs[:1], ys[:1], s=30, c="black", zorder=3, gid="start")
        ax.scatter(xs[-1:], ys[-1:], s=40, c="red", zorder=4, gid="end")
    lo_x, hi_x = float(xs.min()), float(xs.max())
    lo_y, hi_y = float(ys.min()), float(ys.max())
    if inner_k is not None and pos.shape[1] >= 2:
        ax.add_patch(Circle((0, 0), inner_k, fill=False, lw=1.2, color="gray",
                            gid=f"cage-r{inner_k:g}"))
        lo_x, hi_x = min(lo_x, -inner_k), max(hi_x, inner_k)
        lo_y, hi_y = min(lo_y, -inner_k), max(hi_y, inner_k)
    ax.set_xlim(*_pad(lo_x, hi_x))
    ax.set_ylim(*_pad(lo_y, hi_y))
    if title:
        ax.set_title(title)
    return fig


def curve_figure(x, y, xlabel="step", ylabel="mean distance", label=None) -> Figure:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    fig = _figure(6.0, 4.0)
    ax = fig.axes[0]
    ax.plot(x, y, lw=1.2, label=label, gid="curve")
    ax.set_xlim(*_pad(float(x.min()), float(x.max()), 0.0 if len(x) > 1 else 0.05))
    ax.set_ylim(*_pad(float(np.nanmin(y)), float(np.nanmax(y))))
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if label:
        ax.legend(loc="upper left")
    return fig


def sweep_figure(k, caged, never_left=None, title=None) -> Figure:
    """Caged rate (dashed) and never-left rate (solid) against k."""
    k = np.asarray(k, dtype=float)
    fig = _figure(6.0, 4.0)
    ax = fig.axes[0]
    ax.plot(k, caged, ls="--", color="tab:red", label="caged after N moves", gid="caged")
    if never_left is not None:
        nl = np.asarray(never_left, dtype=float)
        if not np.all(np.isnan(nl)):
            ax.plot(k, nl, ls="-", color="tab:blue", label="never left", gid="never-left")
    ax.set_xlim(*_pad(float(k.min()), float(k.max()), 0.0 if len(k) > 1 else 0.05))
    ax.set_ylim(-0.02, 1.02)
    ax.set_xlabel("k")
    ax.set_ylabel("probability")
    ax.legend(loc="best")
    if title:
        ax.set_title(title)
    return fig


def save_figure(fig: Figure, path) -> Path:
    path = Path(path)
    with matplotlib.rc_context(SVG_RC):
        fig.savefig(path, format="svg", metadata={"Date": None})
    return path
