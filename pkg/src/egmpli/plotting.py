"""Minimal SVG line plots (polylines on a shared axis box)."""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

_COLORS = ("#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e")
_W, _H, _M = 800, 400, 50
_MAX_POINTS = 4000


def _decimate(x: np.ndarray, ys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if x.size <= _MAX_POINTS:
        return x, ys
    step = int(np.ceil(x.size / _MAX_POINTS))
    return x[::step], ys[::step]


def line_plot_svg(x, series: dict[str, np.ndarray], xlabel: str = "", ylabel: str = "") -> str:
    x = np.asarray(x, dtype=float)
    if x.size < 2 or not series:
        raise ValueError("need at least two points and one series")
    lo = min(float(np.min(v)) for v in series.values())
    hi = max(float(np.max(v)) for v in series.values())
    if hi == lo:
        hi, lo = hi + 1.0, lo - 1.0
    x0, x1 = float(x[0]), float(x[-1])

    def px(v):
        return _M + (v - x0) / (x1 - x0) * (_W - 2 * _M)

    def py(v):
        return _H - _M - (v - lo) / (hi - lo) * (_H - 2 * _M)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">',
        f'<rect x="{_M}" y="{_M}" width="{_W - 2 * _M}" height="{_H - 2 * _M}" fill="none" stroke="#888"/>',
        f'<text x="{_W / 2}" y="{_H - 10}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>',
        f'<text x="12" y="{_H / 2}" font-size="12" transform="rotate(-90 12 {_H / 2})">{escape(ylabel)}</text>',
        f'<text x="{_M}" y="{_M - 5}" font-size="10">{hi:.4g}</text>',
        f'<text x="{_M}" y="{_H - _M + 12}" font-size="10">{lo:.4g}</text>',
    ]
    for i, (name, y) in enumerate(series.items()):
        color = _COLORS[i % len(_COLORS)]
        xs, yv = _decimate(x, np.asarray(y, dtype=float))
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(xs, yv))
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1" points="{pts}"/>')
        parts.append(f'<text x="{_W - _M - 120}" y="{_M + 15 + 14 * i}" font-size="11" fill="{color}">{escape(name)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
