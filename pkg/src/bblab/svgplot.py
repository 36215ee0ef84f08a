"""Minimal self-contained SVG line plots.

Plots are a convenience next to the CSV outputs, so this stays tiny: a
fixed canvas, linear axes with five ticks, one polyline per series and
a small legend. No external plotting dependency.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

_WIDTH = 720.0
_HEIGHT = 480.0
_LEFT, _RIGHT, _TOP, _BOTTOM = 76.0, 24.0, 44.0, 56.0
_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
_TICKS = 5


def _finite_pairs(xs, ys):
    return [
        (float(x), float(y))
        for x, y in zip(xs, ys)
        if math.isfinite(x) and math.isfinite(y)
    ]


def _span(values):
    lo, hi = min(values), max(values)
    if lo == hi:
        pad = 0.5 if lo == 0.0 else 0.1 * abs(lo)
        return lo - pad, hi + pad
    return lo, hi


def render_lines(series, title="", xlabel="", ylabel="") -> str:
    """Render series of (label, xs, ys) to an SVG document string."""
    cleaned = [(str(label), _finite_pairs(xs, ys)) for label, xs, ys in series]
    cleaned = [(label, pts) for label, pts in cleaned if pts]
    if not cleaned:
        raise ValueError("nothing to plot: no finite points")
    x_lo, x_hi = _span([p[0] for _, pts in cleaned for p in pts])
    y_lo, y_hi = _span([p[1] for _, pts in cleaned for p in pts])
    plot_w = _WIDTH - _LEFT - _RIGHT
    plot_h = _HEIGHT - _TOP - _BOTTOM

    def sx(x):
        return _LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w

    def sy(y):
        return _TOP + (y_hi - y) / (y_hi - y_lo) * plot_h

    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'width="{_WIDTH:g}" height="{_HEIGHT:g}" '
        f'viewBox="0 0 {_WIDTH:g} {_HEIGHT:g}">',
        f'<rect width="{_WIDTH:g}" height="{_HEIGHT:g}" fill="white"/>',
        f'<rect x="{_LEFT:g}" y="{_TOP:g}" width="{plot_w:g}" '
        f'height="{plot_h:g}" fill="none" stroke="black"/>',
    ]
    for i in range(_TICKS):
        frac = i / (_TICKS - 1)
        xv = x_lo + frac * (x_hi - x_lo)
        yv = y_lo + frac * (y_hi - y_lo)
        px = sx(xv)
        py = sy(yv)
        parts.append(
            f'<line x1="{px:.2f}" y1="{_TOP + plot_h:g}" x2="{px:.2f}" '
            f'y2="{_TOP + plot_h + 6:g}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{px:.2f}" y="{_TOP + plot_h + 20:g}" '
            f'font-size="12" text-anchor="middle">{xv:.4g}</text>'
        )
        parts.append(
            f'<line x1="{_LEFT - 6:g}" y1="{py:.2f}" x2="{_LEFT:g}" '
            f'y2="{py:.2f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{_LEFT - 10:g}" y="{py + 4:.2f}" '
            f'font-size="12" text-anchor="end">{yv:.4g}</text>'
        )
    for k, (label, pts) in enumerate(cleaned):
        color = _PALETTE[k % len(_PALETTE)]
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
            f'points="{coords}"/>'
        )
        ly = _TOP + 14 + 16 * k
        parts.append(
            f'<line x1="{_LEFT + plot_w - 150:g}" y1="{ly:g}" '
            f'x2="{_LEFT + plot_w - 126:g}" y2="{ly:g}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{_LEFT + plot_w - 120:g}" y="{ly + 4:g}" '
            f'font-size="12">{escape(label)}</text>'
        )
    if title:
        parts.append(
            f'<text x="{_WIDTH / 2:g}" y="24" font-size="15" '
            f'text-anchor="middle">{escape(title)}</text>'
        )
    if xlabel:
        parts.append(
            f'<text x="{_LEFT + plot_w / 2:g}" y="{_HEIGHT - 14:g}" '
            f'font-size="13" text-anchor="middle">{escape(xlabel)}</text>'
        )
    if ylabel:
        parts.append(
            f'<text x="18" y="{_TOP + plot_h / 2:g}" font-size="13" '
            f'text-anchor="middle" '
            f'transform="rotate(-90 18 {_TOP + plot_h / 2:g})">'
            f"{escape(ylabel)}</text>"
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_lines(path, series, title="", xlabel="", ylabel="") -> None:
    """Render and write an SVG plot to path."""
    doc = render_lines(series, title=title, xlabel=xlabel, ylabel=ylabel)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(doc)
