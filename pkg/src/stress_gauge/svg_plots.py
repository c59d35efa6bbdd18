"""Dependency-free SVG plots: stress-scale curves, Shepard diagrams, scatters.

Static SVG 1.1 documents with a fixed 800x600 viewBox. Output is plain text
built with fixed-precision formatting, so identical inputs always produce
byte-identical files (the plots participate in golden tests). The root
element carries ``data-*`` attributes describing the axis ranges and plot
rectangle so tests can invert the coordinate transform.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .core import EmbeddingMatrix, ShepardPairs
from .errors import InvalidRequest, ShapeMismatch
from .metrics import CurveSample
from .monotone import IsotonicFit

__all__ = ["plot_stress_scale_curve", "plot_shepard", "plot_embedding"]

WIDTH, HEIGHT = 800, 600
_MARGIN_LEFT, _MARGIN_RIGHT, _MARGIN_TOP, _MARGIN_BOTTOM = 70, 24, 24, 56

_PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b")


@dataclass(frozen=True)
class _Frame:
    """Linear data-to-pixel transform for the fixed plot rectangle."""

    xmin: float
    xmax: float
    ymin: float
    ymax: float

    @staticmethod
    def around(xs, ys) -> "_Frame":
        xmin, xmax = float(np.min(xs)), float(np.max(xs))
        ymin, ymax = float(np.min(ys)), float(np.max(ys))
        if xmax == xmin:
            xmin, xmax = xmin - 0.5, xmax + 0.5
        if ymax == ymin:
            ymin, ymax = ymin - 0.5, ymax + 0.5
        return _Frame(xmin, xmax, ymin, ymax)

    @property
    def left(self) -> float:
        return _MARGIN_LEFT

    @property
    def right(self) -> float:
        return WIDTH - _MARGIN_RIGHT

    @property
    def top(self) -> float:
        return _MARGIN_TOP

    @property
    def bottom(self) -> float:
        return HEIGHT - _MARGIN_BOTTOM

    def x(self, v: float) -> float:
        frac = (v - self.xmin) / (self.xmax - self.xmin)
        return self.left + frac * (self.right - self.left)

    def y(self, v: float) -> float:
        frac = (v - self.ymin) / (self.ymax - self.ymin)
        return self.bottom - frac * (self.bottom - self.top)


def _header(frame: _Frame, title: str) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        (
            '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}" '
            f'data-xmin="{frame.xmin!r}" data-xmax="{frame.xmax!r}" '
            f'data-ymin="{frame.ymin!r}" data-ymax="{frame.ymax!r}" '
            f'data-plot-left="{frame.left:.2f}" data-plot-right="{frame.right:.2f}" '
            f'data-plot-top="{frame.top:.2f}" data-plot-bottom="{frame.bottom:.2f}">'
        ),
        f'<title>{title}</title>',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]


def _axes(frame: _Frame, x_label: str, y_label: str, n_ticks: int = 5) -> list[str]:
    parts = [
        f'<g stroke="#333333" stroke-width="1" fill="none">',
        f'<line x1="{frame.left:.2f}" y1="{frame.bottom:.2f}" x2="{frame.right:.2f}" y2="{frame.bottom:.2f}"/>',
        f'<line x1="{frame.left:.2f}" y1="{frame.bottom:.2f}" x2="{frame.left:.2f}" y2="{frame.top:.2f}"/>',
        "</g>",
        '<g font-family="sans-serif" font-size="12" fill="#333333">',
    ]
    for v in np.linspace(frame.xmin, frame.xmax, n_ticks):
        px = frame.x(float(v))
        parts.append(
            f'<line x1="{px:.2f}" y1="{frame.bottom:.2f}" x2="{px:.2f}" '
            f'y2="{frame.bottom + 5:.2f}" stroke="#333333"/>'
        )
        parts.append(
            f'<text x="{px:.2f}" y="{frame.bottom + 20:.2f}" text-anchor="middle">{v:.4g}</text>'
        )
    for v in np.linspace(frame.ymin, frame.ymax, n_ticks):
        py = frame.y(float(v))
        parts.append(
            f'<line x1="{frame.left - 5:.2f}" y1="{py:.2f}" x2="{frame.left:.2f}" '
            f'y2="{py:.2f}" stroke="#333333"/>'
        )
        parts.append(
            f'<text x="{frame.left - 9:.2f}" y="{py + 4:.2f}" text-anchor="end">{v:.4g}</text>'
        )
    parts.append(
        f'<text x="{(frame.left + frame.right) / 2:.2f}" y="{HEIGHT - 12}" '
        f'text-anchor="middle">{x_label}</text>'
    )
    parts.append(
        f'<text x="16" y="{(frame.top + frame.bottom) / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {(frame.top + frame.bottom) / 2:.2f})">{y_label}</text>'
    )
    parts.append("</g>")
    return parts


def _write(path, parts: list[str]) -> None:
    Path(path).write_text("\n".join(parts) + "\n", encoding="utf-8")


def plot_stress_scale_curve(
    samples: Sequence[CurveSample],
    annotations: Optional[tuple[float, float]] = None,
    path="curve.svg",
) -> None:
    """Polyline of metric value against embedding scale, minimum point marked.

    ``annotations`` is the (scale, value) pair to mark; by default the sample
    with the smallest value is marked.
    """
    if len(samples) < 2:
        raise InvalidRequest("a curve needs at least 2 samples")
    ordered = sorted(samples, key=lambda s: s.alpha)
    alphas = np.array([s.alpha for s in ordered])
    values = np.array([s.value for s in ordered])
    if annotations is None:
        k = int(np.argmin(values))
        annotations = (float(alphas[k]), float(values[k]))

    frame = _Frame.around(alphas, np.append(values, annotations[1]))
    parts = _header(frame, "stress-scale curve")
    parts.extend(_axes(frame, "scale factor", "stress"))
    points = " ".join(f"{frame.x(a):.2f},{frame.y(v):.2f}" for a, v in zip(alphas, values))
    parts.append(
        f'<polyline class="curve" fill="none" stroke="#1f77b4" stroke-width="2" points="{points}"/>'
    )
    ax, av = annotations
    parts.append(
        f'<circle class="minimum" cx="{frame.x(ax):.2f}" cy="{frame.y(av):.2f}" r="4" '
        'fill="#d62728" stroke="none"/>'
    )
    parts.append(
        f'<text x="{frame.x(ax) + 8:.2f}" y="{frame.y(av) - 8:.2f}" font-family="sans-serif" '
        f'font-size="12" fill="#d62728">min at {ax:.6g}</text>'
    )
    parts.append("</svg>")
    _write(path, parts)


def plot_shepard(pairs: ShepardPairs, fit: IsotonicFit, path="shepard.svg") -> None:
    """Shepard diagram with the monotone fitted step-line overlaid.

    The scatter shows one dot per point pair (high-dimensional distance on
    the x-axis, embedded distance on the y-axis); the step-line runs through
    the isotonic disparities in fitting order.
    """
    if len(pairs) == 0:
        raise InvalidRequest("no pairs to plot")
    if fit.fitted.shape[0] != len(pairs):
        raise ShapeMismatch("fit length does not match the number of pairs")
    order = np.lexsort((pairs.d_low, pairs.d_high))
    xs = pairs.d_high[order]
    fitted = fit.fitted

    frame = _Frame.around(pairs.d_high, np.concatenate([pairs.d_low, fitted]))
    parts = _header(frame, "Shepard diagram")
    parts.extend(_axes(frame, "high-dimensional distance", "embedded distance"))
    parts.append('<g class="pairs" fill="#1f77b4" fill-opacity="0.5" stroke="none">')
    for dh, dl in zip(pairs.d_high, pairs.d_low):
        parts.append(f'<circle cx="{frame.x(dh):.2f}" cy="{frame.y(dl):.2f}" r="2"/>')
    parts.append("</g>")
    # step-line: horizontal to the next x, then vertical to the next disparity
    step_points = [f"{frame.x(xs[0]):.2f},{frame.y(fitted[0]):.2f}"]
    for k in range(1, len(xs)):
        step_points.append(f"{frame.x(xs[k]):.2f},{frame.y(fitted[k - 1]):.2f}")
        step_points.append(f"{frame.x(xs[k]):.2f},{frame.y(fitted[k]):.2f}")
    parts.append(
        '<polyline class="isotonic-fit" fill="none" stroke="#d62728" stroke-width="2" '
        f'points="{" ".join(step_points)}"/>'
    )
    parts.append("</svg>")
    _write(path, parts)


def plot_embedding(
    embedding: EmbeddingMatrix, labels: Optional[Sequence[str]] = None, path="embedding.svg"
) -> None:
    """Scatter of a 2-d embedding, optionally colored by label class."""
    values = embedding.values
    if values.shape[1] < 2:
        raise InvalidRequest("scatter plot needs at least 2 columns")
    if labels is not None and len(labels) != values.shape[0]:
        raise ShapeMismatch("one label per row required")
    frame = _Frame.around(values[:, 0], values[:, 1])
    parts = _header(frame, "embedding")
    parts.extend(_axes(frame, "component 1", "component 2"))
    classes = sorted(set(labels)) if labels is not None else []
    color_of = {c: _PALETTE[i % len(_PALETTE)] for i, c in enumerate(classes)}
    parts.append('<g class="points" stroke="none">')
    for i, (px, py) in enumerate(zip(values[:, 0], values[:, 1])):
        color = color_of[labels[i]] if labels is not None else "#1f77b4"
        parts.append(
            f'<circle cx="{frame.x(px):.2f}" cy="{frame.y(py):.2f}" r="3" fill="{color}"/>'
        )
    parts.append("</g>")
    parts.append("</svg>")
    _write(path, parts)
