"""The {0deg}-kernel of a simple polygon at a fixed rotation.

The kernel is the part of P between two lines parallel to the sweep
direction: one through the lowest reflex minimum and one through the
highest reflex maximum (with the extreme vertices of P standing in when
no such reflex vertex exists).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DisconnectedKernel
from .geom_core import (
    EPS_LEN,
    HALF_PI,
    Point,
    SimplePolygon,
    as_point,
    clip_many,
    line_at_angle,
    normalize_angle,
    rotate_points,
)

REFLEX_MAX = "ReflexMax"
REFLEX_MIN = "ReflexMin"


@dataclass(frozen=True)
class ReflexExtremum:
    kind: str
    vertex_indices: tuple[int, ...]
    level: float


@dataclass(frozen=True)
class Strip:
    north_level: float
    south_level: float
    north_source: ReflexExtremum | int
    south_source: ReflexExtremum | int

    @property
    def inverted(self) -> bool:
        return self.south_level > self.north_level + EPS_LEN

    @property
    def north_index(self) -> int:
        s = self.north_source
        return s if isinstance(s, int) else s.vertex_indices[0]

    @property
    def south_index(self) -> int:
        s = self.south_source
        return s if isinstance(s, int) else s.vertex_indices[0]

    @property
    def north_is_fallback(self) -> bool:
        return isinstance(self.north_source, int)

    @property
    def south_is_fallback(self) -> bool:
        return isinstance(self.south_source, int)


@dataclass(frozen=True)
class Chain:
    """Boundary piece of P inside the strip: clipped start, P vertices, clipped end."""

    start: Point
    indices: tuple[int, ...]
    end: Point


@dataclass
class KernelRegion:
    theta: float
    polygon: SimplePolygon | None
    area: float = 0.0
    perimeter: float = 0.0
    left_chain: Chain | None = None
    right_chain: Chain | None = None
    degenerate: bool = False
    supports: dict = field(default_factory=dict)

    @property
    def is_empty(self) -> bool:
        return self.polygon is None

    def vertex_list(self) -> list[list[float]]:
        if self.polygon is None:
            return []
        return self.polygon.xy.tolist()


def _heights(xy: np.ndarray, theta: float) -> np.ndarray:
    return -xy[:, 0] * math.sin(theta) + xy[:, 1] * math.cos(theta)


def reflex_extrema(P: SimplePolygon, theta: float = 0.0) -> list[ReflexExtremum]:
    """Reflex maxima and minima with respect to the direction ``theta``.

    An edge parallel to the direction with two reflex endpoints is reported
    as one extremum carrying both indices.
    """
    h = _heights(P.xy, theta)
    reflex = P.reflex_mask
    n = P.n
    out = []
    for i in range(n):
        if not reflex[i]:
            continue
        hp, hv, hn = h[i - 1], h[i], h[(i + 1) % n]
        if abs(hp - hv) <= EPS_LEN:
            continue  # reported from the other endpoint of the flat edge
        idx: tuple[int, ...] = (i,)
        if abs(hn - hv) <= EPS_LEN:
            j = (i + 1) % n
            if not reflex[j]:
                continue
            hn = h[(i + 2) % n]
            idx = (i, j)
        if hp < hv - EPS_LEN and hn < hv - EPS_LEN:
            out.append(ReflexExtremum(REFLEX_MAX, idx, float(hv)))
        elif hp > hv + EPS_LEN and hn > hv + EPS_LEN:
            out.append(ReflexExtremum(REFLEX_MIN, idx, float(hv)))
    return out


def strip(P: SimplePolygon, theta: float = 0.0) -> Strip:
    h = _heights(P.xy, theta)
    ext = reflex_extrema(P, theta)
    maxima = [e for e in ext if e.kind == REFLEX_MAX]
    minima = [e for e in ext if e.kind == REFLEX_MIN]
    if maxima:
        south = max(maxima, key=lambda e: e.level)
        south_level = south.level
    else:
        south = int(np.argmin(h))
        south_level = float(h[south])
    if minima:
        north = min(minima, key=lambda e: e.level)
        north_level = north.level
    else:
        north = int(np.argmax(h))
        north_level = float(h[north])
    return Strip(north_level, south_level, north, south)


def _chains(xr: np.ndarray, lo: float, hi: float):
    """Left and right chains of P inside the horizontal strip [lo, hi]
    (P already rotated into the working frame)."""
    n = len(xr)
    y = xr[:, 1]
    low = y <= lo + EPS_LEN
    high = y >= hi - EPS_LEN
    right = left = None

    def cross(i, j, level):
        if abs(xr[j, 1] - xr[i, 1]) <= EPS_LEN or abs(xr[i, 1] - level) <= EPS_LEN:
            return xr[i].copy()
        t = (level - xr[i, 1]) / (xr[j, 1] - xr[i, 1])
        return xr[i] + t * (xr[j] - xr[i])

    for i in range(n):
        j = (i + 1) % n
        for src, dst, level_a, level_b, kind in ((low, high, lo, hi, "right"), (high, low, hi, lo, "left")):
            if not (src[i] and not src[j]):
                continue
            # walk the strictly-inside run that follows vertex i
            k = j
            inner = []
            while not low[k] and not high[k]:
                inner.append(k)
                k = (k + 1) % n
                if k == i:
                    break
            if not dst[k]:
                continue
            start = cross(i, inner[0] if inner else k, level_a)
            last = inner[-1] if inner else i
            end = xr[k].copy() if abs(xr[k, 1] - level_b) <= EPS_LEN else cross(k, last, level_b)
            ch = (start, tuple(inner), end)
            if kind == "right" and right is None:
                right = ch
            elif kind == "left" and left is None:
                left = ch
    return left, right


def kernel_at(P: SimplePolygon, theta: float = 0.0) -> KernelRegion:
    """The {0deg}-kernel of P for the orientation rotated by ``theta``."""
    theta = normalize_angle(theta, -HALF_PI, math.pi)
    st = strip(P, theta)
    supports = {"north": st.north_index, "south": st.south_index, "north_fallback": st.north_is_fallback, "south_fallback": st.south_is_fallback}
    if st.inverted:
        return KernelRegion(theta, None, supports=supports)
    if abs(st.north_level - st.south_level) <= EPS_LEN:
        return KernelRegion(theta, None, degenerate=True, supports=supports)
    xr = rotate_points(P.xy, -theta)
    Pr = SimplePolygon.trusted(xr)
    lo, hi = st.south_level, st.north_level
    pieces = clip_many(Pr, [(line_at_angle((0.0, hi), 0.0), "right"), (line_at_angle((0.0, lo), 0.0), "left")])
    if not pieces:
        return KernelRegion(theta, None, degenerate=True, supports=supports)
    if len(pieces) > 1:
        raise DisconnectedKernel(f"strip clip produced {len(pieces)} components at theta={theta!r}", [SimplePolygon.trusted(rotate_points(q.xy, theta)) for q in pieces])
    a, per = _kernels.strip_measures(np.ascontiguousarray(xr), lo, hi, EPS_LEN)
    left, right = _chains(xr, lo, hi)

    def back(ch):
        if ch is None:
            return None
        s, idx, e = ch
        pts = rotate_points(np.array([s, e]), theta)
        return Chain(as_point(pts[0]), idx, as_point(pts[1]))

    poly = SimplePolygon.trusted(rotate_points(pieces[0].xy, theta))
    return KernelRegion(theta, poly, float(a), float(per), back(left), back(right), supports=supports)


def kernel_area_perimeter(P: SimplePolygon, theta: float = 0.0) -> tuple[float, float]:
    k = kernel_at(P, theta)
    return (k.area, k.perimeter) if not k.is_empty else (0.0, 0.0)


def strip_supports(P: SimplePolygon, thetas) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Batched strip levels and supporting vertices for many angles.

    Returns (south_level, north_level, south_index, north_index); a
    negative index ``-1 - i`` marks vertex ``i`` used as hull fallback.
    """
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    return _kernels.strip_levels(np.ascontiguousarray(P.xy), np.ascontiguousarray(P.reflex_mask), np.cos(thetas), np.sin(thetas), EPS_LEN)


def nonempty_mask(P: SimplePolygon, thetas) -> np.ndarray:
    S, N, _, _ = strip_supports(P, thetas)
    return S <= N + EPS_LEN
