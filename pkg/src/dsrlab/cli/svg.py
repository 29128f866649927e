"""Minimal deterministic SVG line/marker plots."""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
            "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"]

W, H = 640, 420
LEFT, RIGHT, TOP, BOTTOM = 70, 170, 40, 55


@dataclass
class Series:
    label: str
    x: list
    y: list
    markers: bool = False


def _nice_ticks(lo, hi, n=5):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    start = math.ceil(lo / step) * step
    ticks = []
    t = start
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 12))
        t += step
    return ticks


def _fmt(v):
    return f"{v:.6g}"


def line_plot(series, title="", xlabel="", ylabel="", logx=False) -> str:
    """Render series as an SVG document string."""
    xs = [x for s in series for x in s.x]
    ys = [y for s in series for y in s.y]
    if logx:
        xs = [math.log10(x) for x in xs if x > 0]
    x0, x1 = (min(xs), max(xs)) if xs else (0.0, 1.0)
    y0, y1 = (min(ys), max(ys)) if ys else (0.0, 1.0)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    pad = 0.05 * (y1 - y0 or 1.0)
    y0, y1 = y0 - pad, y1 + pad
    pw, ph = W - LEFT - RIGHT, H - TOP - BOTTOM

    def px(x):
        v = math.log10(x) if logx else x
        return LEFT + (v - x0) / (x1 - x0) * pw

    def py(y):
        return TOP + (1.0 - (y - y0) / (y1 - y0)) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
           f'viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">',
           f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
           f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>']
    if title:
        out.append(f'<text x="{LEFT + pw / 2:.1f}" y="{TOP - 14}" text-anchor="middle" '
                   f'font-size="14">{escape(title)}</text>')
    if logx:
        xt = [10.0 ** k for k in range(math.floor(x0), math.ceil(x1) + 1)
              if x0 - 1e-9 <= k <= x1 + 1e-9]
    else:
        xt = _nice_ticks(x0, x1)
    for t in xt:
        X = px(t)
        out.append(f'<line x1="{X:.2f}" y1="{TOP + ph}" x2="{X:.2f}" y2="{TOP + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{X:.2f}" y="{TOP + ph + 18}" text-anchor="middle">{_fmt(t)}</text>')
    for t in _nice_ticks(y0, y1):
        Y = py(t)
        out.append(f'<line x1="{LEFT - 5}" y1="{Y:.2f}" x2="{LEFT}" y2="{Y:.2f}" stroke="black"/>')
        out.append(f'<text x="{LEFT - 8}" y="{Y + 4:.2f}" text-anchor="end">{_fmt(t)}</text>')
    out.append(f'<text x="{LEFT + pw / 2:.1f}" y="{H - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{TOP + ph / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 16 {TOP + ph / 2:.1f})">{escape(ylabel)}</text>')
    for k, s in enumerate(series):
        color = _PALETTE[k % len(_PALETTE)]
        pts = [(px(x), py(y)) for x, y in zip(s.x, s.y) if not logx or x > 0]
        if s.markers:
            for X, Y in pts:
                out.append(f'<circle cx="{X:.2f}" cy="{Y:.2f}" r="3" fill="none" stroke="{color}"/>')
        elif pts:
            d = " ".join(f"{X:.2f},{Y:.2f}" for X, Y in pts)
            out.append(f'<polyline points="{d}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        ly = TOP + 12 + 16 * k
        lx = LEFT + pw + 12
        if s.markers:
            out.append(f'<circle cx="{lx + 10}" cy="{ly - 4}" r="3" fill="none" stroke="{color}"/>')
        else:
            out.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 20}" y2="{ly - 4}" '
                       f'stroke="{color}" stroke-width="1.5"/>')
        out.append(f'<text x="{lx + 26}" y="{ly}">{escape(s.label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
