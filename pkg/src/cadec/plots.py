"""Minimal self-contained SVG 1.1 renderers (no plotting library)."""
from __future__ import annotations

import math
from typing import Callable, Sequence
from xml.sax.saxutils import escape

W, H = 640, 420
ML, MR, MT, MB = 60, 20, 30, 50


def _header(title: str) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" '
        f'viewBox="0 0 {W} {H}">',
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
        f'<text x="{W / 2:.1f}" y="18" text-anchor="middle" font-family="sans-serif" '
        f'font-size="14">{escape(title)}</text>',
    ]


def _axes(x0, x1, y0, y1, xlabel, ylabel, fmt=lambda v: f"{v:g}") -> list[str]:
    out = [
        f'<line x1="{ML}" y1="{H - MB}" x2="{W - MR}" y2="{H - MB}" stroke="black"/>',
        f'<line x1="{ML}" y1="{MT}" x2="{ML}" y2="{H - MB}" stroke="black"/>',
    ]
    for i in range(5):
        fx = x0 + (x1 - x0) * i / 4
        fy = y0 + (y1 - y0) * i / 4
        px = ML + (W - ML - MR) * i / 4
        py = H - MB - (H - MT - MB) * i / 4
        out.append(f'<text x="{px:.1f}" y="{H - MB + 16}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="11">{fmt(fx)}</text>')
        out.append(f'<text x="{ML - 6}" y="{py + 4:.1f}" text-anchor="end" '
                   f'font-family="sans-serif" font-size="11">{fmt(fy)}</text>')
    out.append(f'<text x="{(ML + W - MR) / 2:.1f}" y="{H - 12}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="12">{escape(xlabel)}</text>')
    out.append(f'<text x="14" y="{(MT + H - MB) / 2:.1f}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="12" '
               f'transform="rotate(-90 14 {(MT + H - MB) / 2:.1f})">{escape(ylabel)}</text>')
    return out


def _scale(v, lo, hi, plo, phi):
    return plo + (v - lo) / (hi - lo) * (phi - plo) if hi > lo else plo


def histogram_svg(edges: Sequence[float], heights: Sequence[float], *,
                  title: str = "", xlabel: str = "value", ylabel: str = "density",
                  reference: Callable[[float], float] | None = None,
                  reference_points: int = 512,
                  overlay: Sequence[float] | None = None) -> str:
    """One bar per bin; optional reference density polyline and overlay step line."""
    x0, x1 = float(edges[0]), float(edges[-1])
    ref_xy = []
    if reference is not None:
        for i in range(reference_points):
            x = x0 + (x1 - x0) * (i + 0.5) / reference_points
            try:
                y = float(reference(x))
            except ValueError:
                continue
            if math.isfinite(y):
                ref_xy.append((x, y))
    top = max([*heights, *(overlay or []), *(y for _, y in ref_xy), 1e-12])
    y1 = top * 1.05
    px = lambda x: _scale(x, x0, x1, ML, W - MR)
    py = lambda y: _scale(min(y, y1), 0.0, y1, H - MB, MT)
    out = _header(title) + _axes(x0, x1, 0.0, y1, xlabel, ylabel, fmt=lambda v: f"{v:.3g}")
    for a, b, h in zip(edges[:-1], edges[1:], heights):
        out.append(f'<rect x="{px(a):.2f}" y="{py(h):.2f}" width="{px(b) - px(a):.2f}" '
                   f'height="{py(0) - py(h):.2f}" fill="#7aa6d6" stroke="#3b6ea5" stroke-width="0.5"/>')
    if overlay is not None:
        pts = []
        for a, b, h in zip(edges[:-1], edges[1:], overlay):
            pts += [f"{px(a):.2f},{py(h):.2f}", f"{px(b):.2f},{py(h):.2f}"]
        out.append(f'<polyline points="{" ".join(pts)}" fill="none" stroke="#d95f02" stroke-width="1.5"/>')
    if ref_xy:
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in ref_xy)
        out.append(f'<polyline points="{pts}" fill="none" stroke="black" stroke-width="1.5"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def loglog_svg(xs: Sequence[float], ys: Sequence[float], slope: float | None,
               intercept: float | None, *, title: str = "",
               xlabel: str = "log n", ylabel: str = "log mean") -> str:
    """Scatter of (log x, log y) with the fitted line and slope annotation."""
    lx = [math.log(x) for x, y in zip(xs, ys) if x > 0 and y > 0]
    ly = [math.log(y) for x, y in zip(xs, ys) if x > 0 and y > 0]
    if not lx:
        return "\n".join(_header(title) + ["</svg>"]) + "\n"
    x0, x1 = min(lx), max(lx)
    y0, y1 = min(ly), max(ly)
    if slope is not None:
        y0 = min(y0, intercept + slope * x0)
        y1 = max(y1, intercept + slope * x1)
    pad = 0.05 * (y1 - y0 or 1.0)
    y0, y1 = y0 - pad, y1 + pad
    if x1 == x0:
        x1 = x0 + 1.0
    px = lambda x: _scale(x, x0, x1, ML, W - MR)
    py = lambda y: _scale(y, y0, y1, H - MB, MT)
    out = _header(title) + _axes(x0, x1, y0, y1, xlabel, ylabel, fmt=lambda v: f"{v:.2f}")
    for a, b in zip(lx, ly):
        out.append(f'<circle cx="{px(a):.2f}" cy="{py(b):.2f}" r="3" fill="#3b6ea5"/>')
    if slope is not None:
        out.append(f'<line x1="{px(x0):.2f}" y1="{py(intercept + slope * x0):.2f}" '
                   f'x2="{px(x1):.2f}" y2="{py(intercept + slope * x1):.2f}" stroke="#d95f02" stroke-width="1.5"/>')
        out.append(f'<text x="{ML + 10}" y="{MT + 16}" font-family="sans-serif" font-size="12">'
                   f'slope = {slope:.4f}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
