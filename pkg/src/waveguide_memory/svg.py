"""Minimal SVG line charts: axes, ticks, legend and an optional log y-axis."""
from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

__all__ = ["line_chart"]

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#000000", "#9467bd", "#ff7f0e", "#8c564b")
_DASHES = {"solid": "", "dashed": "6,4", "dotted": "2,3"}


def _ticks(lo, hi, n=5):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=10 * mag)
    start = math.ceil(lo / step) * step
    return [start + i * step for i in range(int((hi - start) / step + 1e-9) + 1)]


def line_chart(series, *, title="", xlabel="", ylabel="", logy=False, styles=None,
               width=640, height=420, max_points=2000):
    """Render ``{label: (x, y)}`` as an SVG document string.

    ``styles`` maps a label to ``"solid"``, ``"dashed"`` or ``"dotted"``.
    With ``logy`` the values are plotted as ``log10(y)`` and non-positive
    samples are dropped.
    """
    styles = styles or {}
    margin = dict(left=70, right=150, top=40, bottom=55)
    pw = width - margin["left"] - margin["right"]
    ph = height - margin["top"] - margin["bottom"]

    prepared = {}
    for label, (x, y) in series.items():
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if logy:
            keep = y > 0
            x, y = x[keep], np.log10(y[keep])
        keep = np.isfinite(x) & np.isfinite(y)
        x, y = x[keep], y[keep]
        if x.size > max_points:
            idx = np.unique(np.linspace(0, x.size - 1, max_points).astype(int))
            x, y = x[idx], y[idx]
        prepared[label] = (x, y)

    xs = np.concatenate([p[0] for p in prepared.values()] or [np.zeros(1)])
    ys = np.concatenate([p[1] for p in prepared.values()] or [np.zeros(1)])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pad = 0.04 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    def px(v):
        return margin["left"] + (v - x0) / (x1 - x0) * pw

    def py(v):
        return margin["top"] + (1 - (v - y0) / (y1 - y0)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{margin["left"]}" y="{margin["top"]}" width="{pw}" height="{ph}" '
        'fill="none" stroke="#444"/>',
    ]
    for t in _ticks(x0, x1):
        out.append(f'<line x1="{px(t):.2f}" y1="{margin["top"] + ph}" x2="{px(t):.2f}" '
                   f'y2="{margin["top"] + ph + 5}" stroke="#444"/>')
        out.append(f'<text x="{px(t):.2f}" y="{margin["top"] + ph + 18}" text-anchor="middle">{t:g}</text>')
    for t in _ticks(y0, y1):
        label = f"1e{t:g}" if logy else f"{t:g}"
        out.append(f'<line x1="{margin["left"] - 5}" y1="{py(t):.2f}" x2="{margin["left"]}" '
                   f'y2="{py(t):.2f}" stroke="#444"/>')
        out.append(f'<text x="{margin["left"] - 8}" y="{py(t) + 4:.2f}" text-anchor="end">{label}</text>')
    if title:
        out.append(f'<text x="{margin["left"] + pw / 2}" y="22" text-anchor="middle" '
                   f'font-size="14">{escape(title)}</text>')
    out.append(f'<text x="{margin["left"] + pw / 2}" y="{height - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text transform="translate(16,{margin["top"] + ph / 2}) rotate(-90)" '
               f'text-anchor="middle">{escape(ylabel)}</text>')

    for i, (label, (x, y)) in enumerate(prepared.items()):
        color = _PALETTE[i % len(_PALETTE)]
        dash = _DASHES.get(styles.get(label, "solid"), "")
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x.tolist(), y.tolist()))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.6"{dash_attr} points="{pts}"/>')
        ly = margin["top"] + 14 + 18 * i
        lx = margin["left"] + pw + 12
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 24}" y2="{ly}" stroke="{color}" '
                   f'stroke-width="1.6"{dash_attr}/>')
        out.append(f'<text x="{lx + 30}" y="{ly + 4}">{escape(str(label))}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
