"""Planar primitives: points, angle-parameterised lines, polygons, hulls,
halfplane clipping and the closed-form line intersections used by the
rotating sweeps.

Tolerances are absolute and assume coordinates bounded by ``COORD_LIMIT``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import _kernels
from .errors import DegenerateIntersection, HullsIntersect, InvalidPolygon

EPS_ANGLE = 1e-12
EPS_LEN = 1e-9
# on-line tolerance for convex halfplane intersections; kept far below EPS_LEN so
# nearly parallel constraints at tiny rotations are still ordered correctly
HPI_EPS = 1e-13
COORD_LIMIT = 1e6
HALF_PI = 0.5 * math.pi

# above this size the quadratic self-intersection test is skipped
SIMPLICITY_CHECK_LIMIT = 2000


class Point(NamedTuple):
    x: float
    y: float


def as_point(p) -> Point:
    return Point(float(p[0]), float(p[1]))


def normalize_angle(theta: float, lo: float = -HALF_PI, period: float = math.pi) -> float:
    """Map ``theta`` into ``[lo, lo + period)``."""
    t = (theta - lo) % period
    if t >= period:  # float rounding of the modulo
        t = 0.0
    return lo + t


def direction(theta: float) -> np.ndarray:
    return np.array([math.cos(theta), math.sin(theta)])


def rotate_points(xy: np.ndarray, theta: float) -> np.ndarray:
    """Rotate an (n, 2) array counter-clockwise by ``theta`` about the origin."""
    c, s = math.cos(theta), math.sin(theta)
    xy = np.asarray(xy, dtype=float)
    return np.column_stack([c * xy[..., 0] - s * xy[..., 1], s * xy[..., 0] + c * xy[..., 1]])


def orientation(p, q, r) -> int:
    """Sign of (q - p) x (r - p); zero when the turn angle is below ~1e-9 rad
    or the cross product is within rounding of the coordinates."""
    ux, uy = q[0] - p[0], q[1] - p[1]
    vx, vy = r[0] - p[0], r[1] - p[1]
    cross = ux * vy - uy * vx
    mag = max(1.0, abs(p[0]), abs(p[1]), abs(q[0]), abs(q[1]), abs(r[0]), abs(r[1]))
    if abs(cross) <= 1e-9 * math.hypot(ux, uy) * math.hypot(vx, vy) + 1e-14 * mag * mag:
        return 0
    return 1 if cross > 0 else -1


# --------------------------------------------------------------------------
# lines
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Line:
    """Line through ``anchor`` with direction angle ``angle`` in [0, pi).

    Implicit form: (x - u.x) sin(angle) - (y - u.y) cos(angle) = 0; the
    value is positive on the right of the direction vector.
    """

    anchor: Point
    angle: float

    @property
    def a(self) -> float:
        return math.sin(self.angle)

    @property
    def b(self) -> float:
        return -math.cos(self.angle)

    @property
    def c(self) -> float:
        return -(self.anchor.x * math.sin(self.angle) - self.anchor.y * math.cos(self.angle))

    @property
    def coefficients(self) -> tuple[float, float, float]:
        return self.a, self.b, self.c

    @property
    def offset(self) -> float:
        """Signed offset x sin - y cos, constant along the line."""
        return -self.c

    def value(self, p) -> float:
        return (p[0] - self.anchor.x) * math.sin(self.angle) - (p[1] - self.anchor.y) * math.cos(self.angle)

    def __eq__(self, other):
        if not isinstance(other, Line):
            return NotImplemented
        da = abs(self.angle - other.angle)
        da = min(da, math.pi - da)
        return da <= EPS_ANGLE and abs(self.offset - other.offset) <= EPS_LEN

    __hash__ = None


def line_at_angle(u, theta: float) -> Line:
    """Line through ``u`` forming angle ``theta`` with the positive x-axis."""
    return Line(as_point(u), normalize_angle(theta, 0.0, math.pi))


def line_through(p, q) -> Line:
    return line_at_angle(p, math.atan2(q[1] - p[1], q[0] - p[0]))


def intersect_with_horizontal(u, theta: float, y0: float) -> Point:
    s = math.sin(theta)
    if abs(s) <= EPS_ANGLE:
        raise DegenerateIntersection("line is horizontal")
    return Point(u[0] + (y0 - u[1]) * math.cos(theta) / s, float(y0))


def intersect_with_vertical(u, theta: float, x0: float) -> Point:
    c = math.cos(theta)
    if abs(c) <= EPS_ANGLE:
        raise DegenerateIntersection("line is vertical")
    return Point(float(x0), u[1] + (x0 - u[0]) * math.sin(theta) / c)


def orthogonal_pair_coefficients(u, w):
    """Double-angle coefficients of the intersection of the theta-line through
    ``u`` with the (theta + 90deg)-line through ``w``.

    Returns ``(cx, cy)``, each ``(c0, c1, c2)`` with
    coordinate = (c0 + c1 cos 2theta + c2 sin 2theta) / 2.
    """
    cx = (u[0] + w[0], w[0] - u[0], w[1] - u[1])
    cy = (u[1] + w[1], u[1] - w[1], w[0] - u[0])
    return cx, cy


def eval_double_angle(coef, theta):
    c0, c1, c2 = coef
    t2 = np.multiply(2.0, theta)
    return 0.5 * (c0 + c1 * np.cos(t2) + c2 * np.sin(t2))


def intersect_orthogonal_pair(u, w, theta: float) -> Point:
    if abs(theta) <= EPS_ANGLE:
        return intersect_with_vertical(u, 0.0, w[0])
    if abs(theta - HALF_PI) <= EPS_ANGLE:
        return intersect_with_horizontal(u, HALF_PI, w[1])
    s, c = math.sin(theta), math.cos(theta)
    x = u[0] * s * s + w[0] * c * c + (w[1] - u[1]) * s * c
    y = u[1] * c * c + w[1] * s * s + (w[0] - u[0]) * s * c
    return Point(x, y)


# --------------------------------------------------------------------------
# polygons
# --------------------------------------------------------------------------


def _signed_area(xy: np.ndarray) -> float:
    x, y = xy[:, 0], xy[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _clean_ring(xy: np.ndarray) -> np.ndarray:
    """Drop repeated and collinear consecutive vertices."""
    pts = np.asarray(xy, dtype=float).reshape(-1, 2)
    while len(pts) >= 3:
        nxt = np.roll(pts, -1, axis=0)
        dup = np.hypot(*(nxt - pts).T) <= EPS_LEN
        if dup.any():
            pts = pts[~dup]
            continue
        prv = np.roll(pts, 1, axis=0)
        nxt = np.roll(pts, -1, axis=0)
        u = pts - prv
        v = nxt - prv
        cross = u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]
        mag = np.maximum(1.0, np.max(np.abs(np.stack([prv, pts, nxt])), axis=(0, 2)))
        tol = 1e-9 * np.hypot(*u.T) * np.hypot(*v.T) + 1e-14 * mag * mag
        flat = np.abs(cross) <= tol
        if not flat.any():
            break
        # remove every other flat vertex per pass so neighbours are re-tested
        drop = flat & ~np.roll(flat, 1)
        if not drop.any():
            drop = flat.copy()
            drop[1:] = False
        pts = pts[~drop]
    return pts


def _segments_cross(p1, p2, p3, p4) -> bool:
    o1 = orientation(p1, p2, p3)
    o2 = orientation(p1, p2, p4)
    o3 = orientation(p3, p4, p1)
    o4 = orientation(p3, p4, p2)
    if o1 != o2 and o3 != o4:
        return True

    def on_seg(p, q, r):
        return min(p[0], q[0]) - EPS_LEN <= r[0] <= max(p[0], q[0]) + EPS_LEN and min(p[1], q[1]) - EPS_LEN <= r[1] <= max(p[1], q[1]) + EPS_LEN

    return (o1 == 0 and on_seg(p1, p2, p3)) or (o2 == 0 and on_seg(p1, p2, p4)) or (o3 == 0 and on_seg(p3, p4, p1)) or (o4 == 0 and on_seg(p3, p4, p2))


def is_simple_ring(xy: np.ndarray) -> bool:
    """Quadratic check that no two non-adjacent edges touch."""
    n = len(xy)
    a = xy
    b = np.roll(xy, -1, axis=0)
    # bounding-box prefilter, then exact predicate on candidates
    lo = np.minimum(a, b) - EPS_LEN
    hi = np.maximum(a, b) + EPS_LEN
    ov = (lo[:, None, 0] <= hi[None, :, 0]) & (lo[None, :, 0] <= hi[:, None, 0])
    ov &= (lo[:, None, 1] <= hi[None, :, 1]) & (lo[None, :, 1] <= hi[:, None, 1])
    ii, jj = np.nonzero(np.triu(ov, 2))
    for i, j in zip(ii.tolist(), jj.tolist()):
        if i == 0 and j == n - 1:
            continue
        if _segments_cross(a[i], b[i], a[j], b[j]):
            return False
    return True


class SimplePolygon:
    """Counter-clockwise simple polygon stored as an (n, 2) float array.

    Repeated and collinear consecutive vertices are merged on construction.
    With ``orient="auto"`` a clockwise ring is reversed (``was_reversed`` is
    set) instead of rejected.
    """

    __slots__ = ("_xy", "was_reversed", "_reflex")

    def __init__(self, vertices, *, orient: str = "require", check_simple: bool | None = None, clean: bool = True):
        xy = np.asarray(vertices, dtype=float).reshape(-1, 2)
        if not np.all(np.isfinite(xy)):
            raise InvalidPolygon("non-finite coordinate")
        if xy.size and np.max(np.abs(xy)) > COORD_LIMIT:
            raise InvalidPolygon(f"coordinates exceed {COORD_LIMIT:g}")
        if clean:
            xy = _clean_ring(xy)
        if len(xy) < 3:
            raise InvalidPolygon("polygon needs at least 3 non-collinear vertices")
        area = _signed_area(xy)
        self.was_reversed = False
        if area < 0:
            if orient != "auto":
                raise InvalidPolygon("vertices must be counter-clockwise")
            xy = xy[::-1].copy()
            self.was_reversed = True
        elif area == 0:
            raise InvalidPolygon("zero-area polygon")
        if check_simple is None:
            check_simple = len(xy) <= SIMPLICITY_CHECK_LIMIT
        if check_simple and not is_simple_ring(xy):
            raise InvalidPolygon("boundary self-intersects")
        xy.setflags(write=False)
        self._xy = xy
        self._reflex = None

    @classmethod
    def trusted(cls, xy) -> "SimplePolygon":
        """Wrap an array already known to be a valid ccw ring."""
        obj = cls.__new__(cls)
        arr = np.array(xy, dtype=float).reshape(-1, 2)
        arr.setflags(write=False)
        obj._xy = arr
        obj.was_reversed = False
        obj._reflex = None
        return obj

    @property
    def xy(self) -> np.ndarray:
        return self._xy

    @property
    def n(self) -> int:
        return len(self._xy)

    def __len__(self):
        return len(self._xy)

    @property
    def vertices(self) -> list[Point]:
        return [Point(float(x), float(y)) for x, y in self._xy]

    def __repr__(self):
        return f"SimplePolygon(n={self.n})"

    def __eq__(self, other):
        if not isinstance(other, SimplePolygon):
            return NotImplemented
        return self._xy.shape == other._xy.shape and np.array_equal(self._xy, other._xy)

    __hash__ = None

    @property
    def reflex_mask(self) -> np.ndarray:
        if self._reflex is None:
            prev = np.roll(self._xy, 1, axis=0)
            nxt = np.roll(self._xy, -1, axis=0)
            cross = (self._xy[:, 0] - prev[:, 0]) * (nxt[:, 1] - prev[:, 1]) - (self._xy[:, 1] - prev[:, 1]) * (nxt[:, 0] - prev[:, 0])
            r = cross < 0
            r.setflags(write=False)
            self._reflex = r
        return self._reflex

    def rotated(self, theta: float) -> "SimplePolygon":
        return SimplePolygon.trusted(rotate_points(self._xy, theta))

    def bbox(self) -> tuple[float, float, float, float]:
        lo = self._xy.min(axis=0)
        hi = self._xy.max(axis=0)
        return float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])

    def diameter(self) -> float:
        x0, y0, x1, y1 = self.bbox()
        return math.hypot(x1 - x0, y1 - y0)

    def contains(self, p, eps: float = EPS_LEN) -> bool:
        """Closed point-in-polygon test; boundary points within ``eps`` count."""
        return point_in_polygon(self._xy, p, eps)


def point_in_polygon(xy: np.ndarray, p, eps: float = EPS_LEN) -> bool:
    px, py = float(p[0]), float(p[1])
    a = xy
    b = np.roll(xy, -1, axis=0)
    d = b - a
    L2 = np.einsum("ij,ij->i", d, d)
    t = np.clip(((px - a[:, 0]) * d[:, 0] + (py - a[:, 1]) * d[:, 1]) / np.where(L2 > 0, L2, 1.0), 0.0, 1.0)
    cx = a[:, 0] + t * d[:, 0] - px
    cy = a[:, 1] + t * d[:, 1] - py
    if np.min(cx * cx + cy * cy) <= eps * eps:
        return True
    above_a = a[:, 1] > py
    above_b = b[:, 1] > py
    cr = above_a != above_b
    if not np.any(cr):
        return False
    xs = a[cr, 0] + (py - a[cr, 1]) * d[cr, 0] / d[cr, 1]
    return bool(np.count_nonzero(xs > px) % 2)


def area(P: SimplePolygon) -> float:
    return _signed_area(P.xy)


def perimeter(P: SimplePolygon) -> float:
    d = np.roll(P.xy, -1, axis=0) - P.xy
    return float(np.sum(np.hypot(d[:, 0], d[:, 1])))


def ring_measures(xy) -> tuple[float, float]:
    xy = np.asarray(xy, dtype=float).reshape(-1, 2)
    if len(xy) < 3:
        return 0.0, 0.0
    d = np.roll(xy, -1, axis=0) - xy
    return _signed_area(xy), float(np.sum(np.hypot(d[:, 0], d[:, 1])))


# --------------------------------------------------------------------------
# convex hulls and chains
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ConvexChain:
    vertices: np.ndarray
    ccw: bool = True

    def __len__(self):
        return len(self.vertices)

    @property
    def points(self) -> list[Point]:
        return [Point(float(x), float(y)) for x, y in self.vertices]

    def is_empty(self) -> bool:
        return len(self.vertices) == 0


def convex_hull_indices(points) -> np.ndarray:
    """Indices into ``points`` of their ccw convex hull, starting at the
    lexicographically smallest point; collinear points are dropped."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        return np.zeros(0, dtype=np.int64)
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    srt = pts[order]
    # drop exact duplicates so the scan sees distinct points
    keep = np.ones(len(srt), dtype=bool)
    keep[1:] = np.any(np.diff(srt, axis=0) != 0.0, axis=1)
    order, srt = order[keep], srt[keep]
    if len(srt) <= 2:
        return order.astype(np.int64)
    h = _kernels.hull(np.ascontiguousarray(srt), 1e-9)
    if len(h) < 2:
        h = np.array([0, len(srt) - 1])
    return order[h].astype(np.int64)


def convex_hull(points) -> ConvexChain:
    """Counter-clockwise hull by the monotone-chain scan; collinear points
    are dropped, degenerate inputs give 1- or 2-vertex chains."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    return ConvexChain(pts[convex_hull_indices(pts)].copy())


# --------------------------------------------------------------------------
# halfplane clipping
# --------------------------------------------------------------------------


def _keep_sign(keep: str) -> float:
    if keep in ("right", "below_or_right", -1):
        return -1.0
    if keep in ("left", 1):
        return 1.0
    raise ValueError(f"keep must be 'left' or 'right', got {keep!r}")


def clip_halfplane(P: SimplePolygon, L: Line, keep: str) -> list[SimplePolygon]:
    """P intersected with a closed halfplane of ``L``.

    ``keep`` is "left" or "right" of the line's direction vector.  The result
    may have several components (or none).
    """
    sgn = _keep_sign(keep)
    xy = P.xy
    # s <= 0 is kept
    s = sgn * (xy[:, 0] * L.a + xy[:, 1] * L.b + L.c)
    s = np.where(np.abs(s) <= EPS_LEN, 0.0, s)
    if np.all(s <= 0):
        return [P]
    if not np.any(s < 0):
        return []
    # ring with crossing points inserted
    pts: list = []
    sides: list = []
    n = len(xy)
    for i in range(n):
        j = (i + 1) % n
        pts.append(xy[i])
        sides.append(int(np.sign(s[i])))
        if s[i] * s[j] < 0:
            t = s[i] / (s[i] - s[j])
            pts.append(xy[i] + t * (xy[j] - xy[i]))
            sides.append(0)
    m = len(pts)
    grad = np.array([L.a, L.b]) * sgn
    along = np.array([-grad[1], grad[0]])
    tpos = [float(np.dot(p, along)) for p in pts]

    entries: dict[int, float] = {}
    exits: dict[int, float] = {}
    start = next(i for i in range(m) if sides[i] != 0)
    k = 1
    while k <= m:
        idx = (start + k) % m
        if sides[idx] != 0:
            k += 1
            continue
        run = []
        while sides[(start + k) % m] == 0:
            run.append((start + k) % m)
            k += 1
        prev_side = sides[(run[0] - 1) % m]
        next_side = sides[(start + k) % m]
        if prev_side < 0 < next_side:
            exits[run[-1]] = tpos[run[-1]]
        elif prev_side > 0 > next_side:
            entries[run[0]] = tpos[run[0]]
    if not entries:
        return [P]
    ent_sorted = sorted(entries, key=lambda e: entries[e])
    ent_t = [entries[e] for e in ent_sorted]
    pair = {}
    for x, tx in exits.items():
        # next entry along the keep-side boundary direction
        idx = int(np.searchsorted(ent_t, tx - EPS_LEN))
        pair[x] = ent_sorted[idx % len(ent_sorted)]
    used = set()
    comps = []
    for e0 in ent_sorted:
        if e0 in used:
            continue
        ring = []
        e = e0
        guard = 0
        while True:
            used.add(e)
            k = e
            while True:
                ring.append(pts[k])
                if k in exits:
                    break
                k = (k + 1) % m
                guard += 1
                if guard > 4 * m:
                    raise RuntimeError("clip_halfplane failed to close a component")
            e = pair[k]
            if e == e0:
                break
        arr = _clean_ring(np.array(ring))
        if len(arr) >= 3 and _signed_area(arr) > EPS_LEN * EPS_LEN:
            comps.append(SimplePolygon.trusted(arr))
    return comps


def clip_many(P: SimplePolygon, constraints: Sequence[tuple[Line, str]]) -> list[SimplePolygon]:
    """Clip by several closed halfplanes, keeping every component."""
    parts = [P]
    for L, keep in constraints:
        nxt = []
        for q in parts:
            nxt.extend(clip_halfplane(q, L, keep))
        parts = nxt
        if not parts:
            break
    return parts


def halfplane_row(L: Line, keep: str) -> np.ndarray:
    """Row (a, b, c) such that the kept side is a*x + b*y + c <= 0."""
    sgn = _keep_sign(keep)
    return sgn * np.array([L.a, L.b, L.c])


def halfplane_intersection(rows: np.ndarray, ids=None, bound: float = 4 * COORD_LIMIT):
    """Convex polygon {a x + b y + c <= 0 for all rows} with per-edge ids.

    Returns (xy, edge_ids); edge i runs from xy[i] to xy[i+1] and lies on
    constraint ``edge_ids[i]`` (-1 for the outer bounding box).
    """
    rows = np.ascontiguousarray(rows, dtype=float).reshape(-1, 3)
    if ids is None:
        ids = np.arange(len(rows), dtype=np.int64)
    ids = np.ascontiguousarray(ids, dtype=np.int64)
    xy, eid = _kernels.halfplane_polygon(rows, ids, float(bound), HPI_EPS)
    xy = np.asarray(xy)
    eid = np.asarray(eid)
    if len(xy) >= 3:
        xy, eid = _dedupe_ring(xy, eid)
    return xy, eid


def _dedupe_ring(xy, eid):
    keep = np.ones(len(xy), dtype=bool)
    m = len(xy)
    for i in range(m):
        j = (i + 1) % m
        if keep[j] and math.hypot(*(xy[j] - xy[i])) <= EPS_LEN and i != j:
            keep[i] = False
    if keep.sum() < 3:
        return xy[:0], eid[:0]
    return xy[keep], eid[keep]


def clipped_measures(P: SimplePolygon, rows_stack: np.ndarray, dirs_stack: np.ndarray):
    """Area and perimeter of P clipped by every halfplane row of each slice
    of ``rows_stack`` (shape (T, k, 3)); ``dirs_stack`` has shape
    (T, n + k, 2) with unit directions for P's edges then the rows' lines."""
    return _kernels.clip_measures(np.ascontiguousarray(P.xy), np.ascontiguousarray(rows_stack, dtype=float), np.ascontiguousarray(dirs_stack, dtype=float), EPS_LEN * EPS_LEN)


def edge_directions(P: SimplePolygon) -> np.ndarray:
    d = np.roll(P.xy, -1, axis=0) - P.xy
    return d / np.hypot(d[:, 0], d[:, 1])[:, None]


# --------------------------------------------------------------------------
# tangents between convex hulls
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class InternalTangent:
    line: Line
    point_a: Point
    point_b: Point
    index_a: int
    index_b: int


def _start_index(v: np.ndarray) -> int:
    return int(np.lexsort((v[:, 0], v[:, 1]))[0])


def minkowski_difference(A: np.ndarray, B: np.ndarray):
    """Vertices of conv(A) - conv(B) for ccw convex chains, with provenance
    (index into A, index into B) per vertex.  Linear-time edge merge."""
    negB = -B
    ia0 = _start_index(A)
    ib0 = _start_index(negB)
    na, nb = len(A), len(B)

    def edges(P, i0):
        m = len(P)
        if m == 1:
            return []
        return [(P[(i0 + k + 1) % m] - P[(i0 + k) % m], k) for k in range(m)]

    ea = edges(A, ia0)
    eb = edges(negB, ib0)

    def ang(v):
        a = math.atan2(v[1], v[0])
        return a + 2 * math.pi if a < 0 else a

    out = [A[ia0] + negB[ib0]]
    prov = [(ia0, ib0)]
    i = j = 0
    ca, cb = ia0, ib0
    while i < len(ea) or j < len(eb):
        if j >= len(eb) or (i < len(ea) and ang(ea[i][0]) <= ang(eb[j][0])):
            ca = (ca + 1) % na
            i += 1
        else:
            cb = (cb + 1) % nb
            j += 1
        out.append(A[ca] + negB[cb])
        prov.append((ca, cb))
    out = out[:-1] if len(out) > 1 else out
    prov = prov[:-1] if len(prov) > 1 else prov
    return np.array(out), prov


def _origin_in_convex(M: np.ndarray) -> bool:
    m = len(M)
    o = (0.0, 0.0)
    if m == 1:
        return math.hypot(*M[0]) <= EPS_LEN
    if m == 2 or abs(_signed_area(M)) <= EPS_LEN * EPS_LEN:
        # degenerate: segment containment
        i0, i1 = np.argmin(M[:, 0] + 1e-3 * M[:, 1]), np.argmax(M[:, 0] + 1e-3 * M[:, 1])
        a, b = M[i0], M[i1]
        if orientation(a, b, o) != 0:
            return False
        return min(a[0], b[0]) - EPS_LEN <= 0 <= max(a[0], b[0]) + EPS_LEN and min(a[1], b[1]) - EPS_LEN <= 0 <= max(a[1], b[1]) + EPS_LEN
    for k in range(m):
        if orientation(M[k], M[(k + 1) % m], o) < 0:
            return False
    return True


def hulls_intersect(A: ConvexChain, B: ConvexChain) -> bool:
    if A.is_empty() or B.is_empty():
        return False
    M, _ = minkowski_difference(A.vertices, B.vertices)
    return _origin_in_convex(M)


def common_internal_tangents(A: ConvexChain, B: ConvexChain) -> tuple[InternalTangent, InternalTangent]:
    """The two lines tangent to both hulls with the hulls on opposite sides.

    Returned as ``(cw, ccw)``: ordered by the angle of the vector from the
    tangency point on B to the one on A, clockwise-most first.
    """
    if A.is_empty() or B.is_empty():
        raise ValueError("tangents need two non-empty hulls")
    M, prov = minkowski_difference(A.vertices, B.vertices)
    if _origin_in_convex(M):
        raise HullsIntersect("hulls intersect")
    ref = M.mean(axis=0)
    if math.hypot(*ref) <= EPS_LEN:
        ref = M[0]
    ref_ang = math.atan2(ref[1], ref[0])
    rel = np.array([normalize_angle(math.atan2(v[1], v[0]) - ref_ang, -math.pi, 2 * math.pi) for v in M])
    # among angular ties prefer the vertex nearest the origin (the tangency
    # points closest together)
    dist = np.hypot(M[:, 0], M[:, 1])
    lo = min(range(len(M)), key=lambda k: (rel[k], dist[k]))
    hi = min(range(len(M)), key=lambda k: (-rel[k], dist[k]))
    out = []
    for k in (lo, hi):
        ia, ib = prov[k]
        pa, pb = A.vertices[ia], B.vertices[ib]
        d = M[k]
        out.append(InternalTangent(line_at_angle(pa, math.atan2(d[1], d[0])), as_point(pa), as_point(pb), ia, ib))
    return out[0], out[1]
