"""The {0deg, 90deg}-kernel of an orthogonal polygon under rotation.

Edge labels name the side of P an edge bounds: travelling ccw, a rightward
edge is an S-edge, upward E, leftward N, downward W.  A reflex vertex is
named by its two incident edges (NE, NW, SE, SW).

For theta in (0, pi/2) the kernel is cut out by one line per reflex vertex
(parallel to theta for NW/SE, to theta + 90 for NE/SW) and by two lines per
innermost extremity.  Only the support vertices of the four reflex classes
matter, and those are read off four small convex hull arcs.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DisconnectedKernel, NotOrthogonal, TiedExtremities
from .geom_core import (
    EPS_LEN,
    HALF_PI,
    ConvexChain,
    SimplePolygon,
    clip_many,
    convex_hull,
    convex_hull_indices,
    halfplane_intersection,
    line_at_angle,
    minkowski_difference,
    ring_measures,
)
from .steady_kernel import KernelRegion

LABELS = ("N", "E", "S", "W")
KINDS = ("NE", "NW", "SW", "SE")

# direction of travel -> label of the edge
_DIR_LABEL = {(1, 0): "S", (0, 1): "E", (-1, 0): "N", (0, -1): "W"}


@dataclass
class OrthoClassification:
    polygon: SimplePolygon
    edge_labels: list[str]
    dents: dict[str, list[int]]
    extremities: dict[str, list[int]]
    reflex_kinds: dict[int, str]

    def vertices_of(self, kind: str) -> np.ndarray:
        idx = [i for i, k in self.reflex_kinds.items() if k == kind]
        return self.polygon.xy[sorted(idx)] if idx else np.zeros((0, 2))

    def indices_of(self, kind: str) -> list[int]:
        return sorted(i for i, k in self.reflex_kinds.items() if k == kind)


def _edge_dirs(xy: np.ndarray) -> np.ndarray:
    """Unit axis direction (dx, dy) per edge as an (n, 2) int array."""
    d = np.roll(xy, -1, axis=0) - xy
    ax, ay = np.abs(d[:, 0]), np.abs(d[:, 1])
    hor = ay <= EPS_LEN * np.maximum(1.0, ax)
    ver = ax <= EPS_LEN * np.maximum(1.0, ay)
    bad = np.nonzero(hor == ver)[0]
    if len(bad):
        dx, dy = d[bad[0]]
        raise NotOrthogonal(f"edge {int(bad[0])} with direction ({dx:.6g}, {dy:.6g}) is not axis-parallel")
    out = np.zeros((len(d), 2), dtype=np.int64)
    out[hor, 0] = np.sign(d[hor, 0])
    out[ver, 1] = np.sign(d[ver, 1])
    return out


def classify(P: SimplePolygon, require_orthogonal: bool = True) -> OrthoClassification:
    """Label edges, dents, extremities and reflex vertices of an orthogonal polygon."""
    dirs = _edge_dirs(P.xy)
    n = P.n
    horiz = dirs[:, 0] != 0
    par = np.nonzero(horiz == np.roll(horiz, 1))[0]
    if len(par):
        i = int(par[0])
        raise NotOrthogonal(f"edges {i - 1 if i else n - 1} and {i} are parallel")
    # S=right, E=up, N=left, W=down
    code = np.where(horiz, np.where(dirs[:, 0] > 0, 0, 2), np.where(dirs[:, 1] > 0, 1, 3))
    names = np.array(["S", "E", "N", "W"])
    labels = names[code].tolist()
    reflex = P.reflex_mask
    ridx = np.nonzero(reflex)[0]
    inc, out = code[ridx - 1], code[ridx]
    has_n = (inc == 2) | (out == 2)
    has_e = (inc == 1) | (out == 1)
    kind_names = np.where(has_n, np.where(has_e, "NE", "NW"), np.where(has_e, "SE", "SW"))
    kinds = dict(zip(ridx.tolist(), kind_names.tolist()))
    nxt = np.roll(reflex, -1)
    dmask, emask = reflex & nxt, ~reflex & ~nxt
    dents = {k: np.nonzero(dmask & (code == c))[0].tolist() for c, k in enumerate(("S", "E", "N", "W"))}
    ext = {k: np.nonzero(emask & (code == c))[0].tolist() for c, k in enumerate(("S", "E", "N", "W"))}
    dents = {k: dents[k] for k in LABELS}
    ext = {k: ext[k] for k in LABELS}
    return OrthoClassification(P, labels, dents, ext, kinds)


def _as_cls(P_or_cls) -> OrthoClassification:
    return P_or_cls if isinstance(P_or_cls, OrthoClassification) else classify(P_or_cls)


def _edge_level(xy: np.ndarray, i: int, axis: int) -> float:
    return float(xy[i, axis])


def kernel_axis_aligned(P) -> KernelRegion:
    """The theta = 0 kernel: P below the lowermost N-dent, above the topmost
    S-dent, right of the rightmost W-dent and left of the leftmost E-dent."""
    cls = _as_cls(P)
    poly = cls.polygon
    xy = poly.xy
    cuts = []
    if cls.dents["N"]:
        y = min(_edge_level(xy, i, 1) for i in cls.dents["N"])
        cuts.append((line_at_angle((0.0, y), 0.0), "right"))
    if cls.dents["S"]:
        y = max(_edge_level(xy, i, 1) for i in cls.dents["S"])
        cuts.append((line_at_angle((0.0, y), 0.0), "left"))
    if cls.dents["W"]:
        x = max(_edge_level(xy, i, 0) for i in cls.dents["W"])
        cuts.append((line_at_angle((x, 0.0), HALF_PI), "right"))
    if cls.dents["E"]:
        x = min(_edge_level(xy, i, 0) for i in cls.dents["E"])
        cuts.append((line_at_angle((x, 0.0), HALF_PI), "left"))
    pieces = clip_many(poly, cuts)
    if not pieces:
        return KernelRegion(0.0, None)
    if len(pieces) > 1:
        raise DisconnectedKernel(f"axis-aligned clip produced {len(pieces)} components", pieces)
    k = pieces[0]
    a, per = ring_measures(k.xy)
    return KernelRegion(0.0, k, a, per)


# --------------------------------------------------------------------------
# family Q
# --------------------------------------------------------------------------

_UP, _DOWN, _LEFT, _RIGHT = (0, 1), (0, -1), (-1, 0), (1, 0)

# (name, allowed directions) for the eight boundary parts, anchors between them
_PHASES = (
    ("E-chain", {_UP, _LEFT, _RIGHT}),
    ("NE-staircase", {_LEFT, _UP}),
    ("N-chain", {_LEFT, _UP, _DOWN}),
    ("NW-staircase", {_DOWN, _LEFT}),
    ("W-chain", {_DOWN, _LEFT, _RIGHT}),
    ("SW-staircase", {_RIGHT, _DOWN}),
    ("S-chain", {_RIGHT, _UP, _DOWN}),
    ("SE-staircase", {_UP, _RIGHT}),
)


@dataclass(frozen=True)
class FamilyQDecision:
    member: bool
    witness_edge: int | None = None
    part: str | None = None
    reason: str = ""
    anchors: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.member


def _anchors(cls: OrthoClassification) -> dict[str, int]:
    xy = cls.polygon.xy
    n = cls.polygon.n
    ext = cls.extremities

    def pick(label, key):
        return min(ext[label], key=lambda i: (key(i), i))

    lo = lambda i, ax: min(xy[i, ax], xy[(i + 1) % n, ax])  # noqa: E731
    hi = lambda i, ax: max(xy[i, ax], xy[(i + 1) % n, ax])  # noqa: E731
    return {
        "E_low": pick("E", lambda i: lo(i, 1)),
        "E_top": pick("E", lambda i: -hi(i, 1)),
        "N_right": pick("N", lambda i: -hi(i, 0)),
        "N_left": pick("N", lambda i: lo(i, 0)),
        "W_top": pick("W", lambda i: -hi(i, 1)),
        "W_low": pick("W", lambda i: lo(i, 1)),
        "S_left": pick("S", lambda i: lo(i, 0)),
        "S_right": pick("S", lambda i: -hi(i, 0)),
    }


def is_in_family_Q(P) -> FamilyQDecision:
    """Decide whether the ccw boundary splits into the eight monotone parts.

    On failure the witness is the first edge (walking ccw from the
    lowermost E-extremity) that breaks the pattern.
    """
    cls = _as_cls(P)
    n = cls.polygon.n
    dirs = _edge_dirs(cls.polygon.xy)
    anc = _anchors(cls)
    start = anc["E_low"]
    order = ("E_low", "E_top", "N_right", "N_left", "W_top", "W_low", "S_left", "S_right")
    pos = [(anc[k] - start) % n for k in order]
    for k in range(1, len(pos)):
        if pos[k] < pos[k - 1]:
            return FamilyQDecision(False, anc[order[k]], _PHASES[k][0], f"{order[k]} extremity out of ccw order", tuple(anc[o] for o in order))
    # part k spans anchors[k] .. anchors[k+1]; chains include their anchors,
    # staircases lie strictly between; an odd anchor closes the chain before it
    off = np.arange(n)
    posa = np.array(pos)
    k = np.searchsorted(posa, off, side="right") - 1
    phase = np.where((k % 2 == 1) & (posa[k] == off), k - 1, k)
    d = dirs[(start + off) % n]
    dcode = np.where(d[:, 0] > 0, 0, np.where(d[:, 0] < 0, 1, np.where(d[:, 1] > 0, 2, 3)))
    allowed = np.array([[dd in ph[1] for dd in (_RIGHT, _LEFT, _UP, _DOWN)] for ph in _PHASES])
    bad = np.nonzero(~allowed[phase, dcode])[0]
    if len(bad):
        o = int(bad[0])
        i = (start + o) % n
        name = _PHASES[int(phase[o])][0]
        return FamilyQDecision(False, i, name, f"edge {i} travels {tuple(int(v) for v in dirs[i])} inside the {name}", tuple(anc[o] for o in order))
    return FamilyQDecision(True, anchors=tuple(anc[o] for o in order))


# --------------------------------------------------------------------------
# dominated reflex pair test
# --------------------------------------------------------------------------


def _dominating_pair(us: np.ndarray, vs: np.ndarray, sx: float, sy: float):
    """Some (u, v) with sx*(v.x - u.x) >= 0 and sy*(v.y - u.y) >= 0, or None."""
    if len(us) == 0 or len(vs) == 0:
        return None
    vx = sx * vs[:, 0]
    vy = sy * vs[:, 1]
    order = np.argsort(vx, kind="stable")
    xs = vx[order]
    # suffix maxima of vy over increasing vx
    best = np.empty(len(order), dtype=int)
    cur = order[-1]
    for k in range(len(order) - 1, -1, -1):
        j = order[k]
        if vy[j] >= vy[cur]:
            cur = j
        best[k] = cur
    for u in us:
        k = bisect.bisect_left(xs.tolist(), sx * u[0] - EPS_LEN)
        if k < len(order) and vy[best[k]] >= sy * u[1] - EPS_LEN:
            return u, vs[best[k]]
    return None


def lemma6_empty(P_or_cls):
    """A reflex pair that empties the kernel for every theta in (0, pi/2).

    Returns ("NE/SW", u, v) with v.x >= u.x, v.y >= u.y, or ("NW/SE", u, v)
    with v.x <= u.x, v.y >= u.y; None when no such pair exists.
    """
    cls = _as_cls(P_or_cls)
    hit = _dominating_pair(cls.vertices_of("NE"), cls.vertices_of("SW"), 1.0, 1.0)
    if hit is not None:
        return ("NE/SW", tuple(map(float, hit[0])), tuple(map(float, hit[1])))
    hit = _dominating_pair(cls.vertices_of("NW"), cls.vertices_of("SE"), -1.0, 1.0)
    if hit is not None:
        return ("NW/SE", tuple(map(float, hit[0])), tuple(map(float, hit[1])))
    return None


# --------------------------------------------------------------------------
# constraints
# --------------------------------------------------------------------------
#
# For theta in (0, pi/2) let n = (-sin, cos) and m = (cos, sin).  A vertex v
# contributes  sigma * (p - v) . u <= 0  with u = n (the line parallel to
# theta) or u = m (the line parallel to theta + 90).  The wedge w = (sum of
# the unit directions to both neighbours) decides: a wedge with mixed signs
# uses n, otherwise m; a convex vertex keeps the wedge side, a reflex
# vertex the opposite side.

ROT0, ROT90, FIX_H, FIX_V = "rot0", "rot90", "fixH", "fixV"

# kind -> (line family, sigma); binding vertex is argmax of -sigma * v.u
_REFLEX_RULE = {"NW": (ROT0, 1.0), "SE": (ROT0, -1.0), "NE": (ROT90, 1.0), "SW": (ROT90, -1.0)}


@dataclass(frozen=True)
class Constraint:
    cid: str
    family: str  # rot0 / rot90 / fixH / fixV
    sigma: float
    anchor: tuple[float, float]
    vertex: int = -1

    def row(self, theta: float) -> np.ndarray:
        s, c = math.sin(theta), math.cos(theta)
        if self.family == ROT0:
            u = (-s, c)
        elif self.family == ROT90:
            u = (c, s)
        elif self.family == FIX_H:
            u = (0.0, 1.0)
        else:
            u = (1.0, 0.0)
        k = self.sigma
        return np.array([k * u[0], k * u[1], -k * (u[0] * self.anchor[0] + u[1] * self.anchor[1])])


def vertex_rule(xy: np.ndarray, i: int, reflex: bool) -> tuple[str, float]:
    """Line family and keep sign for vertex ``i`` (the wedge rule above)."""
    n = len(xy)
    d1 = xy[i - 1] - xy[i]
    d2 = xy[(i + 1) % n] - xy[i]
    w = np.sign(d1) + np.sign(d2)
    if w[0] * w[1] < 0:
        fam, side = ROT0, w[1]  # w . n has the sign of w.y for theta in (0, pi/2)
    else:
        fam, side = ROT90, w[0]
    # convex keeps w.u > 0 side (sigma = -1), reflex the other
    sigma = -side if not reflex else side
    return fam, float(sigma)


@dataclass
class ExtremityChoice:
    label: str
    edge: int
    level: float


def innermost_extremities(cls: OrthoClassification) -> dict[str, ExtremityChoice]:
    """Lowermost N-, leftmost E-, topmost S- and rightmost W-extremity.

    Raises TiedExtremities when the choice is not unique."""
    xy = cls.polygon.xy
    rule = {"N": (1, min), "E": (0, min), "S": (1, max), "W": (0, max)}
    out = {}
    for lab, (ax, pick) in rule.items():
        edges = cls.extremities[lab]
        levels = [float(xy[i, ax]) for i in edges]
        best = pick(levels)
        tied = [e for e, lv in zip(edges, levels) if abs(lv - best) <= EPS_LEN * max(1.0, abs(best))]
        if len(tied) > 1:
            raise TiedExtremities(f"{len(tied)} {lab}-extremities share the innermost level {best!r}", lab, tied)
        out[lab] = ExtremityChoice(lab, tied[0], best)
    return out


def extremity_constraints(cls: OrthoClassification, ext: dict[str, ExtremityChoice]) -> list[Constraint]:
    xy = cls.polygon.xy
    n = cls.polygon.n
    out = []
    for lab in ("N", "E", "S", "W"):
        e = ext[lab]
        for end, v in (("a", e.edge), ("b", (e.edge + 1) % n)):
            fam, sigma = vertex_rule(xy, v, False)
            out.append(Constraint(f"ext{lab}{end}", fam, sigma, (float(xy[v, 0]), float(xy[v, 1])), v))
    # the innermost extremity levels themselves
    out.append(Constraint("boxN", FIX_H, 1.0, (0.0, ext["N"].level)))
    out.append(Constraint("boxS", FIX_H, -1.0, (0.0, ext["S"].level)))
    out.append(Constraint("boxE", FIX_V, 1.0, (ext["E"].level, 0.0)))
    out.append(Constraint("boxW", FIX_V, -1.0, (ext["W"].level, 0.0)))
    return out


def reflex_constraint(xy: np.ndarray, kind: str, v: int) -> Constraint:
    fam, sigma = _REFLEX_RULE[kind]
    return Constraint(kind, fam, sigma, (float(xy[v, 0]), float(xy[v, 1])), v)


# --------------------------------------------------------------------------
# hull arcs
# --------------------------------------------------------------------------

# angle of the direction u(0) with binding vertex = argmax v . u(theta),
# u(theta) = u(0) turned ccw by theta
_BASE_ANGLE = {"NW": -HALF_PI, "SE": HALF_PI, "NE": math.pi, "SW": 0.0}


@dataclass
class HullArc:
    kind: str
    chain: object  # ConvexChain, vertices ordered by the theta at which they bind
    indices: list[int]  # polygon vertex index per chain vertex

    def __len__(self):
        return len(self.indices)


@dataclass
class HullArcs:
    arcs: dict[str, HullArc]

    def __getitem__(self, kind: str) -> HullArc:
        return self.arcs[kind]


def _support(v: np.ndarray, alpha: float, after: bool) -> int:
    u = np.array([math.cos(alpha), math.sin(alpha)])
    w = np.array([-u[1], u[0]]) * (1.0 if after else -1.0)
    val = v @ u
    tol = EPS_LEN * max(1.0, float(np.abs(v).max()))
    cand = np.nonzero(val >= val.max() - tol)[0]
    return int(cand[np.argmax(v[cand] @ w)])


def useful_arc(points: np.ndarray, kind: str) -> tuple[np.ndarray, list[int]]:
    """Hull vertices of ``points`` that bind for some theta in [0, pi/2],
    in binding order, with their positions in ``points``."""
    if len(points) == 0:
        return np.zeros((0, 2)), []
    # only points maximal for v.u over the quarter of directions can bind
    a0 = _BASE_ANGLE[kind]
    u0 = np.array([math.cos(a0), math.sin(a0)])
    u1 = np.array([-u0[1], u0[0]])
    p0, p1 = points @ u0, points @ u1
    order = np.lexsort((-p0, -p1))  # descending in u1, then u0
    best = np.maximum.accumulate(p0[order])
    prev = np.concatenate([[-np.inf], best[:-1]])
    cand = order[p0[order] > prev - EPS_LEN * max(1.0, float(np.abs(points).max()))]
    hidx = convex_hull_indices(points[cand])
    hull = points[cand][hidx]
    pos = cand[hidx].tolist()
    i0 = _support(hull, a0, True)
    i1 = _support(hull, a0 + HALF_PI, False)
    m = len(hull)
    k = i0
    seq = [k]
    while k != i1:
        k = (k + 1) % m
        seq.append(k)
    return hull[seq], [pos[k] for k in seq]


def reflex_hulls(P) -> HullArcs:
    cls = _as_cls(P)
    arcs = {}
    for kind in KINDS:
        idx = cls.indices_of(kind)
        pts, sel = useful_arc(cls.polygon.xy[idx] if idx else np.zeros((0, 2)), kind)
        arcs[kind] = HullArc(kind, ConvexChain(pts), [idx[s] for s in sel])
    return HullArcs(arcs)


# --------------------------------------------------------------------------
# feasible range and events
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FeasibleRange:
    theta_min: float
    theta_max: float
    empty_all: bool = False
    reason: str = ""


def _polar_span(M: np.ndarray) -> tuple[float, float]:
    ref = M.mean(axis=0)
    if math.hypot(*ref) <= EPS_LEN:
        ref = M[0]
    r = math.atan2(ref[1], ref[0])
    rel = [((math.atan2(d[1], d[0]) - r + math.pi) % (2 * math.pi)) - math.pi for d in M]
    return r + min(rel), r + max(rel)


def _clamp_to_quadrant(lo: float, hi: float):
    for k in range(-2, 3):
        a, b = max(lo + 2 * math.pi * k, 0.0), min(hi + 2 * math.pi * k, HALF_PI)
        if b >= a:
            return a, b
    return None


def _pair_range(A: np.ndarray, B: np.ndarray, offset_lo: float, offset_hi: float, name: str):
    if len(A) == 0 or len(B) == 0:
        return (0.0, HALF_PI), ""
    M, _ = minkowski_difference(convex_hull(A).vertices, convex_hull(B).vertices)
    from .geom_core import _origin_in_convex

    if _origin_in_convex(M):
        return None, f"{name} hulls intersect"
    lo, hi = _polar_span(M)
    r = _clamp_to_quadrant(hi + offset_lo, lo + offset_hi)
    if r is None:
        return None, f"{name} tangents leave no orientation in [0, pi/2]"
    return r, ""


def feasible_range(arcs: HullArcs) -> FeasibleRange:
    """Orientations in [0, pi/2] where the NW/SE and NE/SW lines do not cross.

    With d ranging over conv(NW) - conv(SE), the strip between the two
    families exists iff d . n(theta) >= 0 for all d, i.e. theta lies in
    [phi_max - pi, phi_min] for the polar angles phi of the difference
    body; for NE/SW the condition is d . m(theta) >= 0.
    """
    r1, why1 = _pair_range(arcs["NW"].chain.vertices, arcs["SE"].chain.vertices, -math.pi, 0.0, "NW/SE")
    r2, why2 = _pair_range(arcs["NE"].chain.vertices, arcs["SW"].chain.vertices, -HALF_PI, HALF_PI, "NE/SW")
    if r1 is None or r2 is None:
        return FeasibleRange(0.0, 0.0, True, why1 or why2)
    lo, hi = max(r1[0], r2[0]), min(r1[1], r2[1])
    if lo > hi:
        return FeasibleRange(lo, hi, True, "pair ranges are disjoint")
    return FeasibleRange(lo, hi)


@dataclass(frozen=True)
class Event:
    theta: float
    kind: str
    new_support: int  # polygon vertex index


@dataclass
class SweepState:
    supports: dict[str, int | None]
    extremities: dict[str, ExtremityChoice]
    events: list[Event]
    theta_min: float
    theta_max: float

    @property
    def angles(self) -> list[float]:
        return [self.theta_min] + [e.theta for e in self.events] + [self.theta_max]


def _switch_angle(kind: str, a: np.ndarray, b: np.ndarray) -> float:
    """theta at which the binding vertex moves from a to b (next on the arc)."""
    psi = math.atan2(b[1] - a[1], b[0] - a[0])
    return (psi - HALF_PI - _BASE_ANGLE[kind]) % (2 * math.pi)


def event_angles(arcs: HullArcs, rng: FeasibleRange, extremities=None) -> SweepState:
    """Support switches of the four arcs inside the feasible range, merged."""
    events = []
    supports = {}
    for kind in KINDS:
        arc = arcs[kind]
        supports[kind] = arc.indices[0] if len(arc) else None
        pts = arc.chain.vertices
        for k in range(len(arc) - 1):
            t = _switch_angle(kind, pts[k], pts[k + 1])
            if t <= rng.theta_min:
                supports[kind] = arc.indices[k + 1]
            elif t < rng.theta_max:
                events.append(Event(t, kind, arc.indices[k + 1]))
    events.sort(key=lambda e: (e.theta, e.kind))
    return SweepState(supports, extremities or {}, events, rng.theta_min, rng.theta_max)


# --------------------------------------------------------------------------
# kernel at a fixed orientation
# --------------------------------------------------------------------------


@dataclass
class OrthoContext:
    """Per-polygon preprocessing shared by kernel_at_theta and optimize."""

    cls: OrthoClassification
    family_q: FamilyQDecision
    arcs: HullArcs | None = None
    extremities: dict[str, ExtremityChoice] | None = None
    fixed: list[Constraint] = field(default_factory=list)
    feasible: FeasibleRange | None = None
    empty_reason: str = ""
    bound: float = 0.0

    def __post_init__(self):
        x0, y0, x1, y1 = self.polygon.bbox()
        self.bound = 4.0 * max(abs(x0), abs(y0), abs(x1), abs(y1), 1.0)

    @property
    def polygon(self) -> SimplePolygon:
        return self.cls.polygon

    @property
    def empty_for_positive_theta(self) -> bool:
        return bool(self.empty_reason)


def prepare(P) -> OrthoContext:
    if isinstance(P, OrthoContext):
        return P
    cls = _as_cls(P)
    q = is_in_family_Q(cls)
    ctx = OrthoContext(cls, q)
    if not q:
        ctx.empty_reason = f"not in family Q ({q.reason})"
        return ctx
    try:
        ctx.extremities = innermost_extremities(cls)
    except TiedExtremities as exc:
        ctx.empty_reason = str(exc)
        return ctx
    ctx.fixed = extremity_constraints(cls, ctx.extremities)
    ctx.arcs = reflex_hulls(cls)
    ctx.feasible = feasible_range(ctx.arcs)
    if ctx.feasible.empty_all:
        ctx.empty_reason = ctx.feasible.reason
    return ctx


def supports_at(arcs: HullArcs, theta: float) -> dict[str, int | None]:
    out = {}
    for kind in KINDS:
        arc = arcs[kind]
        if not len(arc):
            out[kind] = None
            continue
        a = _BASE_ANGLE[kind] + theta
        out[kind] = arc.indices[int(np.argmax(arc.chain.vertices @ np.array([math.cos(a), math.sin(a)])))]
    return out


def constraint_set(ctx: OrthoContext, supports: dict[str, int | None]) -> list[Constraint]:
    xy = ctx.polygon.xy
    out = [reflex_constraint(xy, k, v) for k, v in supports.items() if v is not None]
    return out + ctx.fixed


def _region(ctx: OrthoContext, cons: list[Constraint], theta: float):
    rows = np.array([c.row(theta) for c in cons])
    return halfplane_intersection(rows, np.arange(len(cons)), bound=ctx.bound)


def _sliver(cons: list[Constraint], eid) -> bool:
    """True when two consecutive edges lie on parallel constraints.

    A convex polygon cannot have that; it happens only when the region is
    thinner than the intersection tolerance and an edge was dropped.
    """
    fam = [cons[int(i)].family for i in eid]
    return any(f == g for f, g in zip(fam, fam[1:] + fam[:1]))


def kernel_at_theta(P, theta: float, *, tied: str = "raise") -> KernelRegion:
    """{0deg, 90deg}-kernel rotated by ``theta`` in [0, pi/2).

    theta = 0 uses the dent rule.  For theta > 0 the kernel is the convex
    region cut out by the binding reflex lines and the innermost-extremity
    constraints; it has at most eight edges.
    """
    if not 0.0 <= theta < HALF_PI:
        raise ValueError(f"theta must lie in [0, pi/2), got {theta!r}")
    ctx = prepare(P)
    if theta == 0.0:
        return kernel_axis_aligned(ctx.cls)
    if not ctx.family_q:
        return KernelRegion(theta, None, supports={"reason": ctx.empty_reason})
    if ctx.extremities is None:
        if tied == "raise":
            innermost_extremities(ctx.cls)
        return KernelRegion(theta, None, supports={"reason": ctx.empty_reason})
    sup = supports_at(ctx.arcs, theta)
    cons = constraint_set(ctx, sup)
    xy, eid = _region(ctx, cons, theta)
    supports = {k: v for k, v in sup.items()}
    if len(xy) < 3:
        return KernelRegion(theta, None, degenerate=len(xy) > 0, supports=supports)
    a, per = ring_measures(xy)
    if a <= EPS_LEN * EPS_LEN or _sliver(cons, eid):
        return KernelRegion(theta, None, degenerate=True, supports=supports)
    supports["active"] = [cons[int(i)].cid for i in eid]
    return KernelRegion(theta, SimplePolygon.trusted(xy), float(a), float(per), supports=supports)


# --------------------------------------------------------------------------
# parameterized vertices
# --------------------------------------------------------------------------
#
# Every coordinate is stored as (c0, c1, c2, t, ct) meaning
#   (c0 + c1 cos 2theta + c2 sin 2theta) / 2 + t tan theta + ct cot theta
# which covers rotating-vs-rotating (double-angle part), rotating-vs-fixed
# (tan / cot part) and fixed-vs-fixed (constant) intersections.


@dataclass(frozen=True)
class ParamVertex:
    constraints: tuple[str, str]
    coef_x: tuple[float, float, float, float, float]
    coef_y: tuple[float, float, float, float, float]

    def at(self, theta):
        return _eval5(self.coef_x, theta), _eval5(self.coef_y, theta)


def _eval5(c, theta):
    t = np.asarray(theta, dtype=float)
    out = 0.5 * (c[0] + c[1] * np.cos(2 * t) + c[2] * np.sin(2 * t))
    if c[3]:
        out = out + c[3] * np.tan(t)
    if c[4]:
        out = out + c[4] / np.tan(t)
    return out


def _const5(v: float):
    return (2.0 * v, 0.0, 0.0, 0.0, 0.0)


def param_vertex(c1: Constraint, c2: Constraint) -> ParamVertex:
    """Closed form of the intersection of two constraint lines as theta varies."""
    from .geom_core import orthogonal_pair_coefficients

    a, b = sorted((c1, c2), key=lambda c: (ROT0, ROT90, FIX_H, FIX_V).index(c.family))
    fams = (a.family, b.family)
    ids = (c1.cid, c2.cid)
    u, w = a.anchor, b.anchor
    if fams == (ROT0, ROT90):
        cx, cy = orthogonal_pair_coefficients(u, w)
        return ParamVertex(ids, tuple(map(float, cx)) + (0.0, 0.0), tuple(map(float, cy)) + (0.0, 0.0))
    if fams == (ROT0, FIX_H):
        y0 = w[1]
        return ParamVertex(ids, (2 * u[0], 0, 0, 0, y0 - u[1]), _const5(y0))
    if fams == (ROT0, FIX_V):
        x0 = w[0]
        return ParamVertex(ids, _const5(x0), (2 * u[1], 0, 0, x0 - u[0], 0))
    if fams == (ROT90, FIX_H):
        y0 = w[1]
        return ParamVertex(ids, (2 * u[0], 0, 0, -(y0 - u[1]), 0), _const5(y0))
    if fams == (ROT90, FIX_V):
        x0 = w[0]
        return ParamVertex(ids, _const5(x0), (2 * u[1], 0, 0, 0, -(x0 - u[0])))
    if fams == (FIX_H, FIX_V):
        return ParamVertex(ids, _const5(w[0]), _const5(u[1]))
    raise ValueError(f"constraints {ids} are parallel")


def param_polygon(cons: list[Constraint], eid) -> list[ParamVertex]:
    """ParamVertices of a kernel polygon whose edge k lies on cons[eid[k]]."""
    m = len(eid)
    return [param_vertex(cons[int(eid[k - 1])], cons[int(eid[k])]) for k in range(m)]


def _basis(thetas: np.ndarray) -> np.ndarray:
    t = np.asarray(thetas, dtype=float)
    tan = np.tan(t)
    with np.errstate(divide="ignore"):
        cot = np.where(tan != 0.0, 1.0 / np.where(tan != 0.0, tan, 1.0), np.inf)
    return np.stack([np.full_like(t, 0.5), 0.5 * np.cos(2 * t), 0.5 * np.sin(2 * t), tan, cot], axis=-1)


def pack(pverts: list[ParamVertex]) -> tuple[np.ndarray, np.ndarray]:
    return np.array([p.coef_x for p in pverts], dtype=float), np.array([p.coef_y for p in pverts], dtype=float)


def _measures_param(pverts, thetas: np.ndarray):
    """Area and perimeter of the parameterized polygon at many angles;
    ``pverts`` is a list of ParamVertex or a packed (CX, CY) pair."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    if pverts is None or len(pverts) == 0:
        z = np.zeros_like(thetas)
        return z, z
    CX, CY = pverts if isinstance(pverts, tuple) else pack(pverts)
    B = _basis(thetas)
    # zero coefficients must not meet an infinite cot
    X = np.where(CX[None, :, 4] == 0.0, B[:, :4] @ CX[:, :4].T, B @ CX.T)
    Y = np.where(CY[None, :, 4] == 0.0, B[:, :4] @ CY[:, :4].T, B @ CY.T)
    Xn, Yn = np.roll(X, -1, axis=1), np.roll(Y, -1, axis=1)
    area = 0.5 * np.sum(X * Yn - Xn * Y, axis=1)
    per = np.sum(np.hypot(Xn - X, Yn - Y), axis=1)
    return area, per


# --------------------------------------------------------------------------
# optimization over theta
# --------------------------------------------------------------------------

THETA_START = 1e-10  # sweeps start just above 0; theta = 0 is evaluated apart
THETA_END = HALF_PI - 1e-10
SCAN_POINTS = 64
GOLDEN_TOL = 1e-10
MAX_SPLIT_DEPTH = 20


@dataclass(frozen=True)
class IntervalRecord:
    interval: tuple[float, float]
    best_theta: float
    best_value: float
    closed_form: bool = True


@dataclass
class OptimizationResult:
    objective: str
    sense: str
    theta_star: float
    value: float
    per_interval: list[IntervalRecord] = field(default_factory=list)
    empty_for_all_theta: bool = False
    value_at_zero: float = 0.0
    value_at_zero_plus: float = 0.0
    attained_on_empty: bool = False
    note: str = ""


def _objective_index(objective: str) -> int:
    if objective not in ("area", "perimeter"):
        raise ValueError("objective must be 'area' or 'perimeter'")
    return 0 if objective == "area" else 1


class _Piece:
    """One theta interval with a fixed constraint set."""

    def __init__(self, ctx: OrthoContext, cons: list[Constraint], obj: int):
        self.ctx, self.cons, self.obj = ctx, cons, obj
        fam = np.array([(ROT0, ROT90, FIX_H, FIX_V).index(c.family) for c in cons])
        self._fam = fam
        self._sigma = np.array([c.sigma for c in cons])
        self._anchor = np.array([c.anchor for c in cons], dtype=float)
        self._ids = np.arange(len(cons))

    def rows(self, theta: float) -> np.ndarray:
        s, c = math.sin(theta), math.cos(theta)
        U = np.array([[-s, c], [c, s], [0.0, 1.0], [1.0, 0.0]])[self._fam]
        off = np.einsum("ij,ij->i", U, self._anchor)
        return self._sigma[:, None] * np.column_stack([U, -off])

    def region(self, theta: float):
        xy, eid = halfplane_intersection(self.rows(theta), self._ids, bound=self.ctx.bound)
        if len(xy) < 3 or ring_measures(xy)[0] <= EPS_LEN * EPS_LEN or _sliver(self.cons, eid):
            return None, None
        return xy, eid

    def direct(self, theta: float) -> float:
        xy, _ = self.region(theta)
        if xy is None:
            return 0.0
        a, p = ring_measures(xy)
        return float(a if self.obj == 0 else p)

    def signature(self, theta: float):
        _, eid = self.region(theta)
        if eid is None:
            return None
        e = [int(i) for i in eid]
        k = e.index(min(e))
        return tuple(e[k:] + e[:k])

    def structure(self, theta: float):
        xy, eid = self.region(theta)
        if xy is None:
            return None
        return pack(param_polygon(self.cons, eid))

    def closed(self, pverts, thetas):
        area, per = _measures_param(pverts, thetas)
        live = area > EPS_LEN * EPS_LEN
        return np.where(live, area if self.obj == 0 else per, 0.0)


def _agree(a: float, b: float) -> bool:
    return abs(a - b) <= 1e-9 * max(1.0, abs(a), abs(b))


def _structural_runs(piece: _Piece, a: float, b: float) -> list[tuple[float, float]]:
    """Split [a, b] where the set of active constraints changes, locating
    each change between scan samples by bisection."""
    ts = np.linspace(a, b, SCAN_POINTS + 1)
    sig = [piece.signature(float(t)) for t in ts]
    cuts = [a]
    for k in range(len(ts) - 1):
        if sig[k] == sig[k + 1]:
            continue
        lo, hi = float(ts[k]), float(ts[k + 1])
        while hi - lo > 1e-12 * max(1.0, hi):
            m = 0.5 * (lo + hi)
            if piece.signature(m) == sig[k]:
                lo = m
            else:
                hi = m
        cuts.append(0.5 * (lo + hi))
    cuts.append(b)
    return [(u, v) for u, v in zip(cuts[:-1], cuts[1:]) if v > u]


def _stable_pieces(piece: _Piece, a: float, b: float, depth: int = 0):
    """Split [a, b] until the midpoint structure reproduces the direct
    evaluation at both ends; returns (lo, hi, pverts or None, ok)."""
    mid = 0.5 * (a + b)
    pv = piece.structure(mid)
    ok = all(_agree(float(piece.closed(pv, [t])[0]), piece.direct(t)) for t in (a, b))
    if ok or depth >= MAX_SPLIT_DEPTH:
        return [(a, b, pv, ok)]
    return _stable_pieces(piece, a, mid, depth + 1) + _stable_pieces(piece, mid, b, depth + 1)


def _golden(f, a: float, b: float, sign: float) -> tuple[float, float]:
    g = 0.5 * (math.sqrt(5.0) - 1.0)
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = sign * f(c), sign * f(d)
    while b - a > GOLDEN_TOL:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = sign * f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = sign * f(d)
    t = 0.5 * (a + b)
    return t, f(t)


def _optimize_piece(piece: _Piece, lo: float, hi: float, pv, ok: bool, sign: float):
    if ok:
        def f(t):
            return float(piece.closed(pv, [t])[0])

        ts = np.linspace(lo, hi, SCAN_POINTS)
        vals = piece.closed(pv, ts)
    else:
        f = piece.direct
        ts = np.linspace(lo, hi, SCAN_POINTS)
        vals = np.array([f(t) for t in ts])
    k = int(np.argmax(sign * vals))
    best_t, best_v = float(ts[k]), float(vals[k])
    a, b = ts[max(k - 1, 0)], ts[min(k + 1, len(ts) - 1)]
    if b > a:
        t, v = _golden(f, float(a), float(b), sign)
        if sign * v > sign * best_v:
            best_t, best_v = t, v
    # the closed form is only trusted where it reproduces a direct evaluation
    if ok and not _agree(best_v, piece.direct(best_t)):
        best_v = piece.direct(best_t)
    return best_t, best_v, ts, vals


def _first_empty(piece: _Piece, ts, vals) -> float | None:
    """Infimum of the first empty stretch among the scan samples, refined by bisection."""
    empty = np.nonzero(vals <= 0.0)[0] if piece.obj == 0 else np.nonzero(np.asarray([piece.direct(t) for t in ts]) <= 0.0)[0]
    if len(empty) == 0:
        return None
    k = int(empty[0])
    if k == 0:
        return float(ts[0])
    a, b = float(ts[k - 1]), float(ts[k])
    while b - a > 1e-13:
        m = 0.5 * (a + b)
        if piece.direct(m) <= 0.0:
            b = m
        else:
            a = m
    return b


def optimize(P, objective: str = "area", sense: str = "max") -> OptimizationResult:
    """Orientation in [0, pi/2) maximizing or minimizing the kernel area or perimeter.

    theta = 0 is evaluated with the dent rule.  The positive range is swept
    between support switches; on each piece the kernel vertices have fixed
    closed forms, scanned at 64 points and refined by golden section.
    Empty kernels count as 0; for the minimum the first empty angle wins.
    """
    obj = _objective_index(objective)
    if sense not in ("max", "min"):
        raise ValueError("sense must be 'max' or 'min'")
    sign = 1.0 if sense == "max" else -1.0
    ctx = prepare(P)
    k0 = kernel_axis_aligned(ctx.cls)
    v0 = 0.0 if k0.is_empty else (k0.area if obj == 0 else k0.perimeter)
    res = OptimizationResult(objective, sense, 0.0, v0, value_at_zero=v0)
    if sense == "min" and v0 <= 0.0:
        res.attained_on_empty = True
    if ctx.empty_for_positive_theta:
        res.empty_for_all_theta = v0 <= 0.0
        res.note = ctx.empty_reason
        if sense == "min" and v0 > 0.0:
            res.theta_star, res.value, res.attained_on_empty = THETA_START, 0.0, True
        return res
    rng = ctx.feasible
    state = event_angles(ctx.arcs, rng, ctx.extremities)
    lo_all, hi_all = max(rng.theta_min, THETA_START), min(rng.theta_max, THETA_END)
    # outside the feasible range the reflex lines cross: empty
    if sense == "min" and not res.attained_on_empty and (rng.theta_min > THETA_START or rng.theta_max < THETA_END):
        res.theta_star = THETA_START if rng.theta_min > THETA_START else rng.theta_max
        res.value, res.attained_on_empty = 0.0, True
    cuts = [lo_all] + [e.theta for e in state.events if lo_all < e.theta < hi_all] + [hi_all]
    supports = dict(state.supports)
    ev_iter = iter(e for e in state.events)
    pending = next(ev_iter, None)
    first_plus = True
    for a, b in zip(cuts[:-1], cuts[1:]):
        while pending is not None and pending.theta <= a:
            supports[pending.kind] = pending.new_support
            pending = next(ev_iter, None)
        if b <= a:
            continue
        piece = _Piece(ctx, constraint_set(ctx, supports), obj)
        if first_plus:
            res.value_at_zero_plus = piece.direct(a)
            first_plus = False
        best_t, best_v = None, None
        runs = [p for u, v in _structural_runs(piece, a, b) for p in _stable_pieces(piece, u, v)]
        for lo, hi, pv, ok in runs:
            t, v, ts, vals = _optimize_piece(piece, lo, hi, pv, ok, sign)
            if best_t is None or sign * v > sign * best_v:
                best_t, best_v = t, v
            if sense == "min" and not res.attained_on_empty:
                te = _first_empty(piece, ts, vals)
                if te is not None:
                    res.theta_star, res.value, res.attained_on_empty = te, 0.0, True
        res.per_interval.append(IntervalRecord((a, b), best_t, best_v))
        if res.attained_on_empty:
            continue
        if sign * best_v > sign * res.value + 1e-15 * max(1.0, abs(res.value)):
            res.theta_star, res.value = best_t, best_v
    if sense == "max" and res.value <= 0.0:
        res.empty_for_all_theta = True
    return res
