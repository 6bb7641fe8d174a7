"""Minimal self-contained SVG line plots (polylines, axes, tick labels)."""

from __future__ import annotations

import numpy as np

__all__ = ["line_plot"]

_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
           "#8c564b", "#17becf", "#7f7f7f"]

_W, _H = 640, 420
_ML, _MR, _MT, _MB = 64, 20, 36, 48


def _ticks(lo: float, hi: float, n: int = 5):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / n
    mag = 10.0 ** np.floor(np.log10(raw))
    for m in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= m * mag:
            step = m * mag
            break
    start = np.ceil(lo / step) * step
    return np.arange(start, hi + 0.5 * step, step)


def line_plot(series, labels, title: str = "", xlabel: str = "",
              ylabel: str = "") -> str:
    """Render (x, y) series as an SVG document string."""
    xs = np.concatenate([np.asarray(s[0], dtype=float) for s in series])
    ys = np.concatenate([np.asarray(s[1], dtype=float) for s in series])
    x_lo, x_hi = float(xs.min()), float(xs.max())
    y_lo, y_hi = float(ys.min()), float(ys.max())
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 1.0, y_hi + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad
    pw, ph = _W - _ML - _MR, _H - _MT - _MB

    def px(x):
        return _ML + (x - x_lo) / (x_hi - x_lo) * pw

    def py(y):
        return _MT + (y_hi - y) / (y_hi - y_lo) * ph

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<rect x="{_ML}" y="{_MT}" width="{pw}" height="{ph}" fill="none" '
        f'stroke="black"/>',
    ]
    if title:
        parts.append(f'<text x="{_W / 2}" y="20" text-anchor="middle" '
                     f'font-size="14">{title}</text>')
    for xv in _ticks(x_lo, x_hi):
        xp = px(xv)
        parts.append(f'<line x1="{xp:.1f}" y1="{_MT + ph}" x2="{xp:.1f}" '
                     f'y2="{_MT + ph + 5}" stroke="black"/>')
        parts.append(f'<text x="{xp:.1f}" y="{_MT + ph + 18}" '
                     f'text-anchor="middle">{xv:g}</text>')
    for yv in _ticks(y_lo, y_hi):
        yp = py(yv)
        parts.append(f'<line x1="{_ML - 5}" y1="{yp:.1f}" x2="{_ML}" '
                     f'y2="{yp:.1f}" stroke="black"/>')
        parts.append(f'<text x="{_ML - 8}" y="{yp + 4:.1f}" '
                     f'text-anchor="end">{yv:g}</text>')
    if xlabel:
        parts.append(f'<text x="{_ML + pw / 2}" y="{_H - 10}" '
                     f'text-anchor="middle">{xlabel}</text>')
    if ylabel:
        parts.append(f'<text x="16" y="{_MT + ph / 2}" text-anchor="middle" '
                     f'transform="rotate(-90 16 {_MT + ph / 2})">{ylabel}</text>')
    for k, ((x, y), label) in enumerate(zip(series, labels)):
        color = _COLORS[k % len(_COLORS)]
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, y))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                     f'stroke-width="1.5"/>')
        if label:
            ly = _MT + 16 + 16 * k
            parts.append(f'<line x1="{_ML + pw - 110}" y1="{ly - 4}" '
                         f'x2="{_ML + pw - 90}" y2="{ly - 4}" stroke="{color}" '
                         f'stroke-width="1.5"/>')
            parts.append(f'<text x="{_ML + pw - 84}" y="{ly}">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
