"""Angular intervals on which the rotated {0deg}-kernel is nonempty.

Pipeline: per reflex vertex, the arc of orientations where it is a
candidate reflex maximum / minimum; each arc becomes a segment on the
vertex's dual line; lower/upper envelopes of those segments give the
strip supports as the orientation sweeps; a closed-form sign test per
event interval gives emptiness.

Duality convention: p = (a, b) maps to the line y = a*x - b, so the dual
value at slope m is -(height of p in the m-frame) / cos.  Higher primal
points have lower dual values; the highest reflex maximum is therefore
read off a LOWER envelope and the lowest reflex minimum off an UPPER one.

Slopes are only used in [-tan(split), tan(split)]: orientations near the
vertical are handled in a second chart where the polygon is turned by
-90 degrees.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field

import numpy as np

from .geom_core import EPS_LEN, HALF_PI, SimplePolygon, convex_hull, normalize_angle, rotate_points
from .steady_kernel import _chains, strip, strip_supports

CANDIDATE_MAX = "CandidateMax"
CANDIDATE_MIN = "CandidateMin"
HULL_FALLBACK = "HullFallback"

DEFAULT_SPLIT = 0.25 * math.pi
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ReflexAngularInterval:
    vertex_index: int
    role: str
    theta: tuple[float, float]
    slope_intervals: tuple[tuple[float, float], ...]
    straddles_vertical: bool


@dataclass(frozen=True)
class AngularInterval:
    lo: float
    hi: float
    closed_lo: bool = True
    closed_hi: bool = False
    degenerate_lo: bool = False
    degenerate_hi: bool = False

    def __contains__(self, theta: float) -> bool:
        if self.lo < theta < self.hi:
            return True
        return (self.closed_lo and theta == self.lo) or (self.closed_hi and theta == self.hi)

    @property
    def length(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class DualSegment:
    owner: int
    role: str
    chart: str
    x0: float
    x1: float
    slope: float
    intercept: float

    def y(self, x):
        return self.slope * x + self.intercept


@dataclass(frozen=True)
class EnvelopePiece:
    x0: float
    x1: float
    segment: int
    slope: float
    intercept: float

    def y(self, x):
        return self.slope * x + self.intercept


@dataclass
class Envelope:
    side: str
    pieces: list[EnvelopePiece]

    @property
    def breakpoints(self) -> list[float]:
        xs = []
        for p in self.pieces:
            if not xs or xs[-1] != p.x0:
                xs.append(p.x0)
            xs.append(p.x1)
        return xs

    def piece_at(self, x: float) -> EnvelopePiece | None:
        starts = [p.x0 for p in self.pieces]
        k = bisect.bisect_right(starts, x) - 1
        if k >= 0 and self.pieces[k].x0 <= x <= self.pieces[k].x1:
            return self.pieces[k]
        if k + 1 < len(self.pieces) and self.pieces[k + 1].x0 <= x <= self.pieces[k + 1].x1:
            return self.pieces[k + 1]
        return None

    def value(self, x: float) -> float | None:
        p = self.piece_at(x)
        return None if p is None else p.y(x)

    def __len__(self):
        return len(self.pieces)


@dataclass
class EventInterval:
    theta_range: tuple[float, float]
    support_min: int
    support_max: int
    min_is_fallback: bool
    max_is_fallback: bool
    chain_endpoints: dict = field(default_factory=dict)

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.theta_range[0] + self.theta_range[1])


# --------------------------------------------------------------------------
# step 1: reflex angular intervals
# --------------------------------------------------------------------------


def _arc_intersection(s1: float, s2: float) -> tuple[float, float]:
    """Intersection of the open arcs (s1, s1 + pi) and (s2, s2 + pi)."""
    d = normalize_angle(s2 - s1, -math.pi, TWO_PI)
    if d >= 0:
        return s1 + d, s1 + math.pi
    return s1, s1 + d + math.pi


def _arc_in_domain(s: float, e: float) -> tuple[float, float] | None:
    """Restrict an arc of length < pi to [-pi/2, pi/2)."""
    L = e - s
    s = normalize_angle(s, -HALF_PI, TWO_PI)
    e = s + L
    if s < HALF_PI:
        return s, min(e, HALF_PI)
    if e > 1.5 * math.pi:
        return -HALF_PI, e - TWO_PI
    return None


def _slope_ranges(s: float, e: float) -> tuple[tuple[float, float], ...]:
    L = e - s
    s = normalize_angle(s, -HALF_PI, math.pi)
    e = s + L
    if e <= HALF_PI:
        return ((math.tan(s) if s > -HALF_PI else -math.inf, math.tan(e) if e < HALF_PI else math.inf),)
    return ((math.tan(s) if s > -HALF_PI else -math.inf, math.inf), (-math.inf, math.tan(e - math.pi)))


def reflex_intervals(P: SimplePolygon) -> list[ReflexAngularInterval]:
    """Orientation intervals where each reflex vertex has both neighbours
    strictly below (CandidateMax) or strictly above (CandidateMin)."""
    xy = P.xy
    n = P.n
    out = []
    for i in np.nonzero(P.reflex_mask)[0].tolist():
        p = xy[i]
        d1 = xy[i - 1] - p
        d2 = xy[(i + 1) % n] - p
        f1 = math.atan2(d1[1], d1[0])
        f2 = math.atan2(d2[1], d2[0])
        # neighbour d is below in frame theta iff sin(phi_d - theta) < 0
        s, e = _arc_intersection(f1, f2)
        for role, (a, b) in ((CANDIDATE_MAX, (s, e)), (CANDIDATE_MIN, (s - math.pi, e - math.pi))):
            if b - a <= 0:
                continue
            dom = _arc_in_domain(a, b)
            if dom is None or dom[1] - dom[0] <= 0:
                continue
            a_n = normalize_angle(a, -HALF_PI, math.pi)
            straddles = a_n + (b - a) > HALF_PI
            out.append(ReflexAngularInterval(i, role, dom, _slope_ranges(a, b), straddles))
    return out


# --------------------------------------------------------------------------
# step 3: dualization
# --------------------------------------------------------------------------


def _chart_frame(xy: np.ndarray, chart: str) -> np.ndarray:
    return xy if chart == "A" else rotate_points(xy, -HALF_PI)


def _candidate_slope_range(q: np.ndarray, qa: np.ndarray, qc: np.ndarray, sign: float, lo: float, hi: float):
    """Slopes m in [lo, hi] with sign * ((qn - q).y - (qn - q).x * m) > 0 for
    both neighbours; sign = -1 for both-below, +1 for both-above."""
    a, b = lo, hi
    for qn in (qa, qc):
        dx, dy = qn[0] - q[0], qn[1] - q[1]
        # sign * (dy - dx m) > 0
        k = -sign * dx
        c0 = sign * dy
        if abs(k) <= 1e-300:
            if c0 <= 0:
                return None
            continue
        root = -c0 / k
        if k > 0:
            a = max(a, root)
        else:
            b = min(b, root)
    if b - a <= 0:
        return None
    return a, b


def dualize(P: SimplePolygon, intervals=None, chart_split: float = DEFAULT_SPLIT) -> list[DualSegment]:
    """Dual segments for both charts.

    Chart A covers |theta| <= split in the standard frame; chart B covers
    theta' in [split, pi - split) with the polygon turned by -90 degrees,
    roles taken in the theta' frame.  ``intervals`` (from
    ``reflex_intervals``) selects the vertices; the slope ranges are
    solved in each chart's frame directly.
    """
    if intervals is None:
        intervals = reflex_intervals(P)
    vertices = sorted({iv.vertex_index for iv in intervals})
    xy = P.xy
    n = P.n
    mlim = {"A": math.tan(chart_split), "B": math.tan(HALF_PI - chart_split)}
    hull_idx = _hull_indices(P)
    segs = []
    for chart in ("A", "B"):
        fr = _chart_frame(xy, chart)
        lo, hi = -mlim[chart], mlim[chart]
        for i in vertices:
            q, qa, qc = fr[i], fr[i - 1], fr[(i + 1) % n]
            for role, sign in ((CANDIDATE_MAX, -1.0), (CANDIDATE_MIN, 1.0)):
                rng = _candidate_slope_range(q, qa, qc, sign, lo, hi)
                if rng is not None:
                    segs.append(DualSegment(i, role, chart, rng[0], rng[1], float(q[0]), float(-q[1])))
        for i in hull_idx:
            q = fr[i]
            segs.append(DualSegment(i, HULL_FALLBACK, chart, lo, hi, float(q[0]), float(-q[1])))
    return segs


def _hull_indices(P: SimplePolygon) -> list[int]:
    hull = convex_hull(P.xy).vertices
    idx = []
    for h in hull:
        k = int(np.argmin(np.hypot(P.xy[:, 0] - h[0], P.xy[:, 1] - h[1])))
        idx.append(k)
    return sorted(set(idx))


# --------------------------------------------------------------------------
# step 4: envelopes
# --------------------------------------------------------------------------


def _merge(E1: list[EnvelopePiece], E2: list[EnvelopePiece], upper: bool) -> list[EnvelopePiece]:
    if not E1:
        return E2
    if not E2:
        return E1
    xs = sorted({p.x0 for p in E1} | {p.x1 for p in E1} | {p.x0 for p in E2} | {p.x1 for p in E2})
    out: list[EnvelopePiece] = []
    i = j = 0
    sgn = 1.0 if upper else -1.0

    def emit(u, v, p):
        if v <= u:
            return
        if out and out[-1].segment == p.segment and out[-1].x1 == u:
            last = out.pop()
            out.append(EnvelopePiece(last.x0, v, p.segment, p.slope, p.intercept))
        else:
            out.append(EnvelopePiece(u, v, p.segment, p.slope, p.intercept))

    for u, v in zip(xs[:-1], xs[1:]):
        while i < len(E1) and E1[i].x1 <= u:
            i += 1
        while j < len(E2) and E2[j].x1 <= u:
            j += 1
        p = E1[i] if i < len(E1) and E1[i].x0 <= u else None
        q = E2[j] if j < len(E2) and E2[j].x0 <= u else None
        if p is None and q is None:
            continue
        if q is None:
            emit(u, v, p)
            continue
        if p is None:
            emit(u, v, q)
            continue
        du = sgn * (p.y(u) - q.y(u))
        dv = sgn * (p.y(v) - q.y(v))
        if du == 0 and dv == 0:
            emit(u, v, p if p.segment < q.segment else q)
        elif du >= 0 and dv >= 0:
            emit(u, v, p)
        elif du <= 0 and dv <= 0:
            emit(u, v, q)
        else:
            xc = (q.intercept - p.intercept) / (p.slope - q.slope)
            xc = min(max(xc, u), v)
            first, second = (p, q) if du > 0 else (q, p)
            emit(u, xc, first)
            emit(xc, v, second)
    return out


def envelope(segments, side: str = "upper") -> Envelope:
    """Pointwise max ("upper") or min ("lower") of a set of segments, by
    divide and conquer.  Piece ``segment`` fields index into ``segments``."""
    if side not in ("upper", "lower"):
        raise ValueError("side must be 'upper' or 'lower'")
    upper = side == "upper"
    base = [EnvelopePiece(float(s.x0), float(s.x1), k, float(s.slope), float(s.intercept)) for k, s in enumerate(segments) if s.x1 > s.x0]

    def rec(lo, hi):
        if hi - lo == 0:
            return []
        if hi - lo == 1:
            return [base[lo]]
        mid = (lo + hi) // 2
        return _merge(rec(lo, mid), rec(mid, hi), upper)

    return Envelope(side, rec(0, len(base)))


# --------------------------------------------------------------------------
# event intervals
# --------------------------------------------------------------------------


def _fallback_pieces(env: Envelope, segs: list[DualSegment]) -> list[DualSegment]:
    return [DualSegment(segs[p.segment].owner, HULL_FALLBACK, segs[p.segment].chart, p.x0, p.x1, p.slope, p.intercept) for p in env.pieces]


def _chart_events(segs: list[DualSegment], chart: str, mlo: float, mhi: float):
    """Elementary slope intervals with constant (south, north) supports."""
    mine = [s for s in segs if s.chart == chart]
    hull = [s for s in mine if s.role == HULL_FALLBACK]
    cmax = [s for s in mine if s.role == CANDIDATE_MAX]
    cmin = [s for s in mine if s.role == CANDIDATE_MIN]
    # lowest vertex = max dual value; highest vertex = min dual value
    fb_low = _fallback_pieces(envelope(hull, "upper"), hull)
    fb_high = _fallback_pieces(envelope(hull, "lower"), hull)
    s_set = cmax + fb_low
    n_set = cmin + fb_high
    s_env = envelope(s_set, "lower")
    n_env = envelope(n_set, "upper")
    xs = sorted(set(s_env.breakpoints) | set(n_env.breakpoints) | {mlo, mhi} | ({0.0} if chart == "B" else set()))
    xs = [x for x in xs if mlo <= x <= mhi]
    out = []
    for u, v in zip(xs[:-1], xs[1:]):
        if v - u <= 0:
            continue
        m = 0.5 * (u + v)
        ps = s_env.piece_at(m)
        pn = n_env.piece_at(m)
        ss, sn = s_set[ps.segment], n_set[pn.segment]
        out.append((u, v, ss.owner, ss.role == HULL_FALLBACK, sn.owner, sn.role == HULL_FALLBACK))
    return out, s_env, n_env


def _to_theta(chart: str, m: float) -> float:
    phi = math.atan(m)
    return phi if chart == "A" else phi + HALF_PI


def event_intervals(P: SimplePolygon, chart_split: float = DEFAULT_SPLIT, with_chains: bool = True) -> list[EventInterval]:
    """Maximal orientation ranges with a fixed pair of strip supports,
    covering [-pi/2, pi/2) in increasing order."""
    segs = dualize(P, chart_split=chart_split)
    raw = []
    for chart, mlim in (("A", math.tan(chart_split)), ("B", math.tan(HALF_PI - chart_split))):
        evs, _, _ = _chart_events(segs, chart, -mlim, mlim)
        for u, v, s_own, s_fb, n_own, n_fb in evs:
            a, b = _to_theta(chart, u), _to_theta(chart, v)
            if chart == "B" and a >= HALF_PI - 1e-15:
                # theta' past vertical: same orientation as theta' - pi with up/down flipped
                raw.append((a - math.pi, b - math.pi, n_own, n_fb, s_own, s_fb))
            else:
                raw.append((a, b, s_own, s_fb, n_own, n_fb))
    raw.sort(key=lambda r: r[0])
    merged: list[list] = []
    for a, b, s_own, s_fb, n_own, n_fb in raw:
        if merged and merged[-1][2:] == [s_own, s_fb, n_own, n_fb] and abs(merged[-1][1] - a) <= 1e-12:
            merged[-1][1] = b
        else:
            merged.append([a, b, s_own, s_fb, n_own, n_fb])
    if merged:
        merged[0][0] = -HALF_PI
        merged[-1][1] = HALF_PI
    out = []
    for a, b, s_own, s_fb, n_own, n_fb in merged:
        ev = EventInterval((a, b), support_min=n_own, support_max=s_own, min_is_fallback=n_fb, max_is_fallback=s_fb)
        if with_chains:
            ev.chain_endpoints = _chain_endpoints(P, ev)
        out.append(ev)
    return out


def _chain_endpoints(P: SimplePolygon, ev: EventInterval) -> dict:
    theta = ev.midpoint
    xy = P.xy
    nrm = np.array([-math.sin(theta), math.cos(theta)])
    lo = float(xy[ev.support_max] @ nrm)
    hi = float(xy[ev.support_min] @ nrm)
    if lo > hi + EPS_LEN:
        return {}
    xr = rotate_points(xy, -theta)
    left, right = _chains(xr, lo, hi)
    out = {}
    for name, ch in (("left", left), ("right", right)):
        if ch is not None and ch[1]:
            out[name] = (ch[1][0], ch[1][-1])
        elif ch is not None:
            out[name] = ()
    return out


def _strip_gap(P: SimplePolygon, theta: float) -> float:
    st = strip(P, theta)
    return st.north_level - st.south_level


def nonempty_intervals(P: SimplePolygon, chart_split: float = DEFAULT_SPLIT, events=None) -> list[AngularInterval]:
    """Maximal orientation intervals in [-pi/2, pi/2) with a nonempty kernel."""
    if events is None:
        events = event_intervals(P, chart_split, with_chains=False)
    xy = P.xy
    pieces: list[tuple[float, float]] = []
    for ev in events:
        a, b = ev.theta_range
        d = xy[ev.support_min] - xy[ev.support_max]
        if math.hypot(d[0], d[1]) <= EPS_LEN:
            pieces.append((a, b))
            continue
        # gap(theta) = |d| sin(phi - theta) >= 0 on [phi - pi, phi] (mod 2 pi)
        phi = math.atan2(d[1], d[0])
        lo = phi - math.pi
        for shift in (-TWO_PI, 0.0, TWO_PI):
            u, v = max(a, lo + shift), min(b, phi + shift)
            if v > u:
                pieces.append((u, v))
    pieces.sort()
    merged: list[list[float]] = []
    for u, v in pieces:
        if merged and u <= merged[-1][1] + 1e-12:
            merged[-1][1] = max(merged[-1][1], v)
        else:
            merged.append([u, v])
    out = []
    for u, v in merged:
        gu = _strip_gap(P, u) if u > -HALF_PI else 1.0
        gv = _strip_gap(P, v) if v < HALF_PI else -1.0
        out.append(AngularInterval(u, v, closed_lo=gu >= -EPS_LEN, closed_hi=gv >= -EPS_LEN, degenerate_lo=abs(gu) <= EPS_LEN, degenerate_hi=abs(gv) <= EPS_LEN))
    out += _isolated_orientations(P, out)
    out.sort(key=lambda iv: (iv.lo, iv.hi))
    return out


def _isolated_orientations(P: SimplePolygon, found: list[AngularInterval]) -> list[AngularInterval]:
    """Edge-parallel orientations with a nonempty kernel that no interval covers.

    When the sweep is parallel to an edge with a convex endpoint, that edge
    stops being a reflex extremum for an instant, so the kernel can be
    nonempty at exactly that angle while empty on both sides.
    """
    d = np.roll(P.xy, -1, axis=0) - P.xy
    phi = np.arctan2(d[:, 1], d[:, 0])
    phi = np.sort(np.mod(phi + HALF_PI, math.pi) - HALF_PI)
    phi[np.abs(phi - HALF_PI) <= 1e-12] = -HALF_PI
    phi[np.abs(phi + HALF_PI) <= 1e-12] = -HALF_PI
    phi = np.unique(phi)
    phi = phi[np.concatenate([[True], np.diff(phi) > 1e-12])]
    cand = [float(t) for t in phi if not classify(found, float(t))]
    if not cand:
        return []
    S, N, _, _ = strip_supports(P, np.array(cand))
    return [AngularInterval(t, t, True, True, True, True) for t, s_, n_ in zip(cand, S, N) if s_ <= n_ + EPS_LEN]


def classify(intervals: list[AngularInterval], theta: float) -> bool:
    """True when ``theta`` falls in one of the reported intervals."""
    los = [iv.lo for iv in intervals]
    k = bisect.bisect_right(los, theta) - 1
    return k >= 0 and theta in intervals[k]
