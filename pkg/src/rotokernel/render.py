"""Deterministic SVG figures: polygon outline, filled kernel, dashed clip lines.

Output is plain text built from fixed-precision numbers, so identical
geometry always gives identical bytes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

OUTLINE = "#1f2937"
FILL = "#60a5fa"
CLIP = "#dc2626"
MARGIN = 0.05


def _f(v: float) -> str:
    v = float(v)
    s = format(v, ".12g") if abs(v) > 1e-13 else "0"
    return "0" if s == "-0" else s


@dataclass(frozen=True)
class ClipLine:
    anchor: tuple[float, float]
    angle: float
    label: str = ""


def _viewbox(xy: np.ndarray):
    lo, hi = xy.min(axis=0), xy.max(axis=0)
    span = np.maximum(hi - lo, 1e-12)
    pad = MARGIN * span
    return lo - pad, hi + pad


def _line_in_box(line: ClipLine, lo, hi):
    """Segment of an infinite line inside the box, or None."""
    p = np.asarray(line.anchor, dtype=float)
    d = np.array([math.cos(line.angle), math.sin(line.angle)])
    t0, t1 = -math.inf, math.inf
    for k in range(2):
        if abs(d[k]) < 1e-15:
            if not lo[k] <= p[k] <= hi[k]:
                return None
            continue
        a, b = (lo[k] - p[k]) / d[k], (hi[k] - p[k]) / d[k]
        t0, t1 = max(t0, min(a, b)), min(t1, max(a, b))
    if t1 <= t0:
        return None
    return p + t0 * d, p + t1 * d


def _points(xy) -> str:
    return " ".join(f"{_f(x)},{_f(y)}" for x, y in xy)


def polygon_svg(polygon_xy, kernel_xy=None, lines=(), title: str = "") -> str:
    """One panel: polygon outline, kernel filled (if any), clip lines dashed.

    World y points up; the flip is done by a single group transform.
    """
    xy = np.asarray(polygon_xy, dtype=float)
    lo, hi = _viewbox(xy)
    w, h = hi - lo
    stroke = 0.004 * math.hypot(w, h)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_f(lo[0])} {_f(-hi[1])} {_f(w)} {_f(h)}" width="480" height="{_f(480 * h / w)}">',
    ]
    if title:
        out.append(f"<title>{title}</title>")
    out.append('<g transform="scale(1,-1)">')
    if kernel_xy is not None and len(kernel_xy) >= 3:
        out.append(f'<polygon class="kernel" points="{_points(kernel_xy)}" fill="{FILL}" fill-opacity="0.6" stroke="none"/>')
    out.append(f'<polygon class="outline" points="{_points(xy)}" fill="none" stroke="{OUTLINE}" stroke-width="{_f(stroke)}"/>')
    dash = f"{_f(4 * stroke)},{_f(3 * stroke)}"
    for ln in lines:
        seg = _line_in_box(ln, lo, hi)
        if seg is None:
            continue
        (x1, y1), (x2, y2) = seg
        lab = f' data-label="{ln.label}"' if ln.label else ""
        out.append(
            f'<line class="clip"{lab} x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
            f'stroke="{CLIP}" stroke-width="{_f(0.75 * stroke)}" stroke-dasharray="{dash}"/>'
        )
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def intervals_svg(intervals, domain=(-0.5 * math.pi, 0.5 * math.pi), title: str = "") -> str:
    """Angle axis over ``domain`` with the nonempty intervals as filled bars."""
    a, b = domain
    W, H, pad = 600.0, 60.0, 20.0

    def x(t):
        return pad + (W - 2 * pad) * (t - a) / (b - a)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_f(W)} {_f(H)}" width="{_f(W)}" height="{_f(H)}">',
    ]
    if title:
        out.append(f"<title>{title}</title>")
    out.append(f'<line x1="{_f(pad)}" y1="40" x2="{_f(W - pad)}" y2="40" stroke="{OUTLINE}" stroke-width="1"/>')
    for lo, hi in intervals:
        out.append(f'<rect class="interval" x="{_f(x(lo))}" y="20" width="{_f(max(x(hi) - x(lo), 0.5))}" height="16" fill="{FILL}"/>')
    for t, lab in ((a, _f(a)), (0.0, "0"), (b, _f(b))):
        if a <= t <= b:
            out.append(f'<text x="{_f(x(t))}" y="54" font-size="9" text-anchor="middle">{lab}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
