"""Minimal deterministic SVG renderings (no plotting dependencies).

Output is plain string assembly: identical inputs give byte-identical
files, which the reproducibility checks rely on.
"""
from __future__ import annotations

import math

import numpy as np

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
_W = _H = 480.0
_MARGIN = 48.0


def _num(x: float) -> str:
    return "%.2f" % x


def _header(title: str) -> list[str]:
    return [
        '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" '
        'viewBox="0 0 %d %d">' % (_W, _H, _W, _H),
        '<rect width="%d" height="%d" fill="white"/>' % (_W, _H),
        '<text x="%s" y="20" font-family="sans-serif" font-size="14">%s</text>'
        % (_num(_MARGIN), title),
    ]


def _axes(lo: float, hi: float) -> list[str]:
    span = _W - 2 * _MARGIN
    parts = [
        '<rect x="%s" y="%s" width="%s" height="%s" fill="none" stroke="#888"/>'
        % (_num(_MARGIN), _num(_MARGIN), _num(span), _num(span)),
        '<text x="%s" y="%s" font-family="sans-serif" font-size="10">%g</text>'
        % (_num(_MARGIN), _num(_H - _MARGIN + 14), lo),
        '<text x="%s" y="%s" font-family="sans-serif" font-size="10">%g</text>'
        % (_num(_W - _MARGIN - 20), _num(_H - _MARGIN + 14), hi),
    ]
    return parts


def diagram_svg(points: list[tuple[int, float, float]], title: str) -> str:
    """Scatter of (birth, death) with the diagonal; one color per degree.

    Infinite deaths are clipped to the frame top and drawn hollow.
    """
    finite = [d for _, b, d in points if math.isfinite(d)] + \
             [b for _, b, _ in points]
    hi = max(finite) if finite else 1.0
    hi = hi * 1.05 if hi > 0 else 1.0
    lo = min(0.0, min(finite) if finite else 0.0)
    span = _W - 2 * _MARGIN

    def sx(x):
        return _MARGIN + (x - lo) / (hi - lo) * span

    def sy(y):
        return _H - _MARGIN - (y - lo) / (hi - lo) * span

    out = _header(title) + _axes(lo, hi)
    out.append('<line x1="%s" y1="%s" x2="%s" y2="%s" stroke="#bbb"/>'
               % (_num(sx(lo)), _num(sy(lo)), _num(sx(hi)), _num(sy(hi))))
    degrees = sorted({k for k, _, _ in points})
    for di, k in enumerate(degrees):
        color = _PALETTE[di % len(_PALETTE)]
        out.append('<text x="%s" y="%s" font-family="sans-serif" font-size="11" '
                   'fill="%s">degree %d</text>'
                   % (_num(_W - _MARGIN - 80), _num(_MARGIN + 14 + 13 * di), color, k))
        for kk, b, d in points:
            if kk != k:
                continue
            if math.isfinite(d):
                out.append('<circle cx="%s" cy="%s" r="3" fill="%s"/>'
                           % (_num(sx(b)), _num(sy(d)), color))
            else:
                out.append('<circle cx="%s" cy="%s" r="3" fill="none" stroke="%s"/>'
                           % (_num(sx(b)), _num(_MARGIN), color))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def bars_svg(values: np.ndarray, title: str, errors: np.ndarray | None = None) -> str:
    """Bar chart of per-variable scores with optional error whiskers."""
    values = np.asarray(values, dtype=float)
    p = len(values)
    top = max(float(values.max(initial=0.0)), 1e-12)
    if errors is not None:
        top = max(top, float((values + errors).max(initial=0.0)))
    top *= 1.1
    span = _W - 2 * _MARGIN
    bw = span / max(p, 1)
    out = _header(title) + _axes(0, top)
    for j, val in enumerate(values):
        x = _MARGIN + j * bw + 0.15 * bw
        h = val / top * span
        y = _H - _MARGIN - h
        out.append('<rect x="%s" y="%s" width="%s" height="%s" fill="%s"/>'
                   % (_num(x), _num(y), _num(0.7 * bw), _num(h), _PALETTE[0]))
        if errors is not None and errors[j] > 0:
            cx = x + 0.35 * bw
            e = errors[j] / top * span
            out.append('<line x1="%s" y1="%s" x2="%s" y2="%s" stroke="#333"/>'
                       % (_num(cx), _num(y - e), _num(cx), _num(min(y + e, _H - _MARGIN))))
        out.append('<text x="%s" y="%s" font-family="sans-serif" font-size="9" '
                   'text-anchor="middle">%d</text>'
                   % (_num(x + 0.35 * bw), _num(_H - _MARGIN + 12), j + 1))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def path_svg(points: np.ndarray, title: str) -> str:
    """Gradient path projected onto its first two principal coordinates."""
    pts = np.asarray(points, dtype=float)
    centered = pts - pts.mean(axis=0)
    # deterministic principal axes: fix each axis sign by its largest loading
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    axes = vt[:2] if vt.shape[0] >= 2 else np.vstack([vt, np.zeros_like(vt[:1])])
    for i in range(axes.shape[0]):
        lead = np.argmax(np.abs(axes[i]))
        if axes[i][lead] < 0:
            axes[i] = -axes[i]
    proj = centered @ axes.T
    lo = float(proj.min(initial=-1e-9))
    hi = float(proj.max(initial=1e-9))
    if hi - lo < 1e-12:
        hi = lo + 1.0
    span = _W - 2 * _MARGIN

    def s(xy):
        x = _MARGIN + (xy[0] - lo) / (hi - lo) * span
        y = _H - _MARGIN - (xy[1] - lo) / (hi - lo) * span
        return _num(x), _num(y)

    out = _header(title) + _axes(lo, hi)
    coords = " ".join(",".join(s(xy)) for xy in proj)
    out.append('<polyline points="%s" fill="none" stroke="%s" stroke-width="1.5"/>'
               % (coords, _PALETTE[0]))
    x0, y0 = s(proj[0])
    x1, y1 = s(proj[-1])
    out.append('<circle cx="%s" cy="%s" r="4" fill="%s"/>' % (x0, y0, _PALETTE[2]))
    out.append('<circle cx="%s" cy="%s" r="4" fill="%s"/>' % (x1, y1, _PALETTE[1]))
    out.append("</svg>")
    return "\n".join(out) + "\n"
