"""Independent reference computations and test polygon generators.

Nothing here relies on the event machinery of the main modules: kernels
are obtained by brute-force extremum detection and plain halfplane
clipping, visibility by monotone-path search on a raster.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import GenerationFailed
from .geom_core import EPS_LEN, HALF_PI, SimplePolygon, clip_many, edge_directions, is_simple_ring, line_at_angle, point_in_polygon, ring_measures, rotate_points

GENERATOR_KINDS = ("random_simple", "random_orthogonal", "staircase", "family_Q", "with_lemma6_pair")


def _rng(seed) -> np.random.Generator:
    env = os.environ.get("ROTOKERNEL_SEED")
    if env is not None:
        seed = int(env)
    return np.random.default_rng(seed)


def _rot90(xy: np.ndarray, k: int) -> np.ndarray:
    out = np.asarray(xy, dtype=float)
    for _ in range(k % 4):
        out = np.column_stack([-out[:, 1], out[:, 0]])
    return out


def _sorted_strict(rng, lo, hi, k):
    """k strictly increasing values in (lo, hi), kept apart from each other."""
    gap = (hi - lo) / (k + 1)
    return lo + gap * (np.arange(1, k + 1) + rng.uniform(-0.35, 0.35, k))


def _side_piece(rng, x_start, x_next, L, band, chain_steps, stair_steps, convex_stair):
    """East chain from (x_start, -L) up to height L, then a NE staircase to
    (L, x_next); the endpoint itself is left to the next piece."""
    b, c = band
    ys = np.concatenate([[-L], _sorted_strict(rng, -L, L, chain_steps - 1), [L]])
    xs = [x_start]
    for _ in range(chain_steps - 1):
        x = rng.uniform(b, c)
        while abs(x - xs[-1]) < 0.02 * (c - b):
            x = rng.uniform(b, c)
        xs.append(x)
    pts = []
    for k in range(chain_steps):
        pts.append((xs[k], ys[k]))
        pts.append((xs[k], ys[k + 1]))
    pts.pop()  # (x_e, L) is re-added as the staircase start
    x_e = xs[-1]
    if convex_stair:
        # reflex corners on a quarter ellipse from (x_e, L) to (L, x_next)
        t = np.sort(rng.uniform(0.05, 0.95, stair_steps - 1)) if stair_steps > 1 else np.zeros(0)
        t = np.concatenate([[0.0], t * HALF_PI, [HALF_PI]])
        cx, cy = L, L
        us = cx + (x_e - L) * np.cos(t)
        ws = cy + (x_next - L) * np.sin(t)
        us[-1], ws[-1] = L, x_next
    else:
        us = np.concatenate([[x_e], _sorted_strict(rng, L, x_e, stair_steps - 1)[::-1], [L]])
        ws = np.concatenate([[L], _sorted_strict(rng, L, x_next, stair_steps - 1), [x_next]])
    for k in range(stair_steps):
        pts.append((us[k], ws[k]))
        pts.append((us[k + 1], ws[k]))
    return pts


def family_q_polygon(rng, n: int, *, chain_share: float = 0.5, convex_stairs: bool = False, L: float | None = None) -> SimplePolygon:
    """A family-Q orthogonal polygon with about ``n`` vertices.

    Four side pieces (monotone chain + staircase) are generated in their
    own frame and turned by multiples of 90 degrees; the chains live in
    bands outside [-L, L] so the pieces cannot collide.
    """
    per = max(2, n // 4)
    if L is None:
        # keep steps well above the collinearity tolerance
        L = max(1.0, per / 50.0)
    bands = [(L * (1.15 + 0.2 * rng.uniform()), L * (1.6 + 0.6 * rng.uniform())) for _ in range(4)]
    starts = [rng.uniform(*bands[k]) for k in range(4)]
    pts = []
    for k in range(4):
        chain_steps = max(1, int(round(per * chain_share / 2)))
        stair_steps = max(1, per // 2 - chain_steps)
        piece = _side_piece(rng, starts[k], starts[(k + 1) % 4], L, bands[k], chain_steps, stair_steps, convex_stairs)
        pts.extend(_rot90(np.array(piece), k).tolist())
    xy = np.array(pts)
    # a unit-aspect polygon is too symmetric; stretch a little
    xy[:, 0] *= 1.0 + 0.5 * rng.uniform()
    return SimplePolygon(xy, check_simple=n <= 2000)


def staircase_polygon(rng, n: int) -> SimplePolygon:
    """Family-Q polygon whose vertices sit almost entirely on the staircases."""
    return family_q_polygon(rng, n, chain_share=0.0, convex_stairs=False)


def lemma6_polygon(rng) -> SimplePolygon:
    """Dented template whose NE-reflex vertex is dominated by a SW-reflex one."""
    w1 = rng.uniform(0.6, 1.4)
    w2 = rng.uniform(0.6, 1.4)
    w3 = rng.uniform(0.3, 0.8)
    w4 = rng.uniform(0.6, 1.4)
    h = rng.uniform(2.5, 3.5)
    d1 = rng.uniform(0.6, 1.2)
    d2 = rng.uniform(1.6, 2.2)
    x1, x2 = w1, w1 + w2
    x3 = x2 + w3
    x4 = x3 + w3
    x5 = x4 + w4
    return SimplePolygon([(0, 0), (x3, 0), (x3, d2), (x4, d2), (x4, 0), (x5, 0), (x5, h), (x2, h), (x2, d1), (x1, d1), (x1, h), (0, h)])


def random_simple_polygon(rng, n: int, *, spikiness: float = 0.6) -> SimplePolygon:
    for _ in range(200):
        ang = np.sort(rng.uniform(0, 2 * math.pi, n))
        r = np.where(np.arange(n) % 2 == 0, rng.uniform(0.7, 1.0, n), rng.uniform(1.0 - spikiness, 1.0, n))
        xy = np.column_stack([r * np.cos(ang), r * np.sin(ang)]) + rng.normal(0, 0.05 * spikiness, (n, 2))
        if is_simple_ring(xy):
            try:
                return SimplePolygon(xy, orient="auto")
            except ValueError:
                continue
    raise GenerationFailed(f"no simple polygon with {n} vertices after 200 draws")


def random_orthogonal_polygon(rng, n: int) -> SimplePolygon:
    """Orthogonal polygon from a random star by replacing each edge with an
    L-shaped pair; not restricted to family Q."""
    for _ in range(500):
        base = random_simple_polygon(rng, max(4, n // 2), spikiness=0.7).xy
        pts = []
        for i in range(len(base)):
            p, q = base[i], base[(i + 1) % len(base)]
            pts.append(p)
            pts.append((q[0], p[1]) if rng.uniform() < 0.5 else (p[0], q[1]))
        xy = np.array(pts, dtype=float)
        try:
            P = SimplePolygon(xy, orient="auto")
        except ValueError:
            continue
        d = edge_directions(P)
        if np.all(np.minimum(np.abs(d[:, 0]), np.abs(d[:, 1])) <= 1e-12) and P.n >= 4:
            return P
    raise GenerationFailed("no orthogonal polygon after 500 draws")


def generate(kind: str, n: int, seed=None) -> SimplePolygon:
    """Seeded test polygon of the requested kind (ROTOKERNEL_SEED overrides ``seed``)."""
    rng = _rng(seed)
    if kind == "random_simple":
        return random_simple_polygon(rng, n)
    if kind == "random_orthogonal":
        return random_orthogonal_polygon(rng, n)
    if kind == "staircase":
        return staircase_polygon(rng, n)
    if kind == "family_Q":
        return family_q_polygon(rng, n, convex_stairs=bool(rng.integers(2)))
    if kind == "with_lemma6_pair":
        return lemma6_polygon(rng)
    raise ValueError(f"unknown generator kind {kind!r}; expected one of {GENERATOR_KINDS}")


# --------------------------------------------------------------------------
# brute-force kernels
# --------------------------------------------------------------------------


@dataclass
class OracleKernel:
    theta: float
    components: list[SimplePolygon]
    area: float
    perimeter: float

    @property
    def is_empty(self) -> bool:
        return not self.components

    @property
    def polygon(self) -> SimplePolygon | None:
        return self.components[0] if len(self.components) == 1 else None


def _strip_levels_brute(xy: np.ndarray, reflex: np.ndarray, theta: float, eps: float = EPS_LEN):
    """(south, north) heights along n(theta) by direct inspection of every
    reflex vertex, walking over flat runs of equal height."""
    h = -xy[:, 0] * math.sin(theta) + xy[:, 1] * math.cos(theta)
    n = len(h)
    south, north = -math.inf, math.inf
    for i in range(n):
        if not reflex[i]:
            continue
        # flat run through i must consist of reflex vertices only
        lo, hi = i, i
        ok = True
        while abs(h[(lo - 1) % n] - h[i]) <= eps and (lo - 1) % n != i:
            lo -= 1
            ok &= bool(reflex[lo % n])
        while abs(h[(hi + 1) % n] - h[i]) <= eps and (hi + 1) % n != i:
            hi += 1
            ok &= bool(reflex[hi % n])
        if not ok:
            continue
        a, b = h[(lo - 1) % n], h[(hi + 1) % n]
        if a < h[i] - eps and b < h[i] - eps:
            south = max(south, h[i])
        elif a > h[i] + eps and b > h[i] + eps:
            north = min(north, h[i])
    if south == -math.inf:
        south = float(h.min())
    if north == math.inf:
        north = float(h.max())
    return float(south), float(north)


def _row(u, offset, keep_le: bool):
    """Halfplane row for u.p <= offset (keep_le) or u.p >= offset."""
    s = 1.0 if keep_le else -1.0
    return np.array([s * u[0], s * u[1], -s * offset])


def _clip_rows(P: SimplePolygon, rows, theta: float) -> OracleKernel:
    cuts = []
    for a, b, c in rows:
        nrm2 = a * a + b * b
        anchor = (-a * c / nrm2, -b * c / nrm2)
        L = line_at_angle(anchor, math.atan2(a, -b) % math.pi)
        # keep the side whose normal points away from (a, b); read the side off
        # the built line since its angle may have been snapped across pi
        left_nx, left_ny = -math.sin(L.angle), math.cos(L.angle)
        cuts.append((L, "left" if left_nx * a + left_ny * b < 0 else "right"))
    parts = clip_many(P, cuts)
    ms = [ring_measures(q.xy) for q in parts]
    parts = [q for q, m in zip(parts, ms) if m[0] > EPS_LEN * EPS_LEN]
    ms = [m for m in ms if m[0] > EPS_LEN * EPS_LEN]
    return OracleKernel(theta, parts, float(sum(m[0] for m in ms)), float(sum(m[1] for m in ms)))


def single_rows(P: SimplePolygon, theta: float):
    s, n_ = _strip_levels_brute(P.xy, P.reflex_mask, theta)
    if s > n_ + EPS_LEN or abs(s - n_) <= EPS_LEN:
        return None
    u = (-math.sin(theta), math.cos(theta))
    return [_row(u, n_, True), _row(u, s, False)]


def _quadrant_probe(P: SimplePolygon, i: int) -> tuple[int, int]:
    """Sign pair (qx, qy) of the quadrant at vertex i that lies outside P
    (reflex vertex) or inside P (convex vertex), found by point probes."""
    xy = P.xy
    nb = np.vstack([xy[i - 1], xy[(i + 1) % P.n]]) - xy[i]
    d = 1e-4 * float(np.min(np.hypot(nb[:, 0], nb[:, 1])))
    want_inside = not P.reflex_mask[i]
    for qx in (1, -1):
        for qy in (1, -1):
            inside = point_in_polygon(xy, (xy[i, 0] + qx * d, xy[i, 1] + qy * d))
            if inside == want_inside:
                # the unique quadrant whose probe differs from the other three
                others = [point_in_polygon(xy, (xy[i, 0] + ax * d, xy[i, 1] + ay * d)) for ax in (1, -1) for ay in (1, -1) if (ax, ay) != (qx, qy)]
                if all(o != want_inside for o in others):
                    return qx, qy
    raise ValueError(f"vertex {i} is not an orthogonal corner")


def _corner_row(P: SimplePolygon, i: int, theta: float):
    """Clip line of an orthogonal corner: the special quadrant (exterior of
    a reflex corner, interior of a convex one) has bisector w; the line is
    parallel to theta when w has mixed signs, else to theta + 90."""
    qx, qy = _quadrant_probe(P, i)
    s, c = math.sin(theta), math.cos(theta)
    u = (-s, c) if qx * qy < 0 else (c, s)
    wu = qx * u[0] + qy * u[1]
    v = P.xy[i]
    off = u[0] * v[0] + u[1] * v[1]
    reflex = bool(P.reflex_mask[i])
    # reflex: drop the exterior-quadrant side; convex: keep the interior side
    keep_le = (wu > 0) if reflex else (wu < 0)
    return _row(u, off, keep_le)


def _extreme_extremities(P: SimplePolygon):
    """Innermost extremity edges (lowermost N, leftmost E, topmost S,
    rightmost W) found by probing each edge's interior side; None on ties."""
    xy = P.xy
    n = P.n
    refl = P.reflex_mask
    found = {"N": [], "E": [], "S": [], "W": []}
    for i in range(n):
        j = (i + 1) % n
        if refl[i] or refl[j]:
            continue
        mid = 0.5 * (xy[i] + xy[j])
        L = float(np.hypot(*(xy[j] - xy[i])))
        d = 1e-4 * L
        horizontal = abs(xy[j, 1] - xy[i, 1]) <= EPS_LEN
        if horizontal:
            lab = "N" if point_in_polygon(xy, (mid[0], mid[1] - d)) else "S"
            found[lab].append((float(mid[1]), i))
        else:
            lab = "E" if point_in_polygon(xy, (mid[0] - d, mid[1])) else "W"
            found[lab].append((float(mid[0]), i))
    out = {}
    for lab, pick in (("N", min), ("E", min), ("S", max), ("W", max)):
        best = pick(v for v, _ in found[lab])
        tied = [i for v, i in found[lab] if abs(v - best) <= EPS_LEN * max(1.0, abs(best))]
        if len(tied) != 1:
            return None
        out[lab] = (tied[0], best)
    return out


class _DoubleRows:
    """Corner quadrants and innermost extremities probed once; rows per theta."""

    def __init__(self, P: SimplePolygon):
        self.P = P
        self.ext = _extreme_extremities(P)
        corners = list(np.nonzero(P.reflex_mask)[0])
        self.levels = []
        if self.ext is not None:
            for lab, (e, level) in self.ext.items():
                corners += [e, (e + 1) % P.n]
                self.levels.append(((0.0, 1.0) if lab in ("N", "S") else (1.0, 0.0), level, lab in ("N", "E")))
        self.corners = [(P.xy[i].copy(), _quadrant_probe(P, int(i)), bool(P.reflex_mask[i])) for i in corners]

    def __call__(self, theta: float):
        if self.ext is None:
            return None
        s, c = math.sin(theta), math.cos(theta)
        rows = []
        for v, (qx, qy), reflex in self.corners:
            u = (-s, c) if qx * qy < 0 else (c, s)
            wu = qx * u[0] + qy * u[1]
            # reflex: drop the exterior-quadrant side; convex: keep the interior side
            rows.append(_row(u, u[0] * v[0] + u[1] * v[1], (wu > 0) if reflex else (wu < 0)))
        rows += [_row(u, level, le) for u, level, le in self.levels]
        return rows


    def batch(self, thetas: np.ndarray) -> np.ndarray:
        """Rows for many angles at once, shape (T, k, 3)."""
        s, c = np.sin(thetas)[:, None], np.cos(thetas)[:, None]
        V = np.array([v for v, _, _ in self.corners]).reshape(-1, 2)
        Q = np.array([q for _, q, _ in self.corners], dtype=float).reshape(-1, 2)
        refl = np.array([r for _, _, r in self.corners], dtype=bool)
        mixed = Q[:, 0] * Q[:, 1] < 0
        ux = np.where(mixed, -s, c)
        uy = np.where(mixed, c, s)
        wu = Q[:, 0] * ux + Q[:, 1] * uy
        sg = np.where(np.where(refl, wu > 0, wu < 0), 1.0, -1.0)
        off = ux * V[:, 0] + uy * V[:, 1]
        rows = np.stack([sg * ux, sg * uy, -sg * off], axis=-1)
        lv = np.array([_row(u, level, le) for u, level, le in self.levels]).reshape(-1, 3)
        return np.concatenate([rows, np.broadcast_to(lv, (len(thetas),) + lv.shape)], axis=1)


def _single_rows_batch(P: SimplePolygon, thetas: np.ndarray):
    """Vectorised brute strip: (ok, rows) with rows of shape (T, 2, 3).
    Flat runs are at most one edge long on a cleaned ring."""
    xy, refl = P.xy, P.reflex_mask
    s, c = np.sin(thetas)[:, None], np.cos(thetas)[:, None]
    h = -xy[:, 0] * s + xy[:, 1] * c
    hp, hn = np.roll(h, 1, axis=1), np.roll(h, -1, axis=1)
    hp2, hn2 = np.roll(h, 2, axis=1), np.roll(h, -2, axis=1)
    fp, fn = np.abs(hp - h) <= EPS_LEN, np.abs(hn - h) <= EPS_LEN
    a = np.where(fp, hp2, hp)
    b = np.where(fn, hn2, hn)
    valid = refl & ~(fp & ~np.roll(refl, 1)) & ~(fn & ~np.roll(refl, -1))
    is_max = valid & (a < h - EPS_LEN) & (b < h - EPS_LEN)
    is_min = valid & (a > h + EPS_LEN) & (b > h + EPS_LEN)
    south = np.where(is_max.any(axis=1), np.where(is_max, h, -np.inf).max(axis=1), h.min(axis=1))
    north = np.where(is_min.any(axis=1), np.where(is_min, h, np.inf).min(axis=1), h.max(axis=1))
    ok = north - south > EPS_LEN
    ux, uy = -s[:, 0], c[:, 0]
    rows = np.stack([np.stack([ux, uy, -north], -1), np.stack([-ux, -uy, south], -1)], axis=1)
    return ok, rows


def _quarter(theta):
    """{0deg, 90deg} rotated by theta equals the set rotated by theta mod pi/2."""
    t = np.mod(theta, HALF_PI)
    return np.where(HALF_PI - t <= 1e-15, 0.0, t) if np.ndim(t) else (0.0 if HALF_PI - t <= 1e-15 else float(t))


def double_rows(P: SimplePolygon, theta: float):
    """All reflex-corner lines plus both endpoint lines and the level of
    each innermost extremity; None when extremities tie (empty kernel)."""
    return _DoubleRows(P)(theta)


def kernel_full_clip(P: SimplePolygon, theta: float, mode: str = "single") -> OracleKernel:
    """Kernel by clipping P the slow way.

    single: strip between brute-force reflex extrema at ``theta``.
    double: {0deg, 90deg} kernel from every reflex corner line and the
        innermost extremity constraints, with theta taken mod pi/2; at
        theta = 0 the intersection of the two axis strips.
    obs1: intersection of the single kernels at theta and theta + 90.
    """
    if mode == "double":
        theta = _quarter(theta)
    if mode == "single":
        rows = single_rows(P, theta)
    elif mode == "obs1" or (mode == "double" and theta == 0.0):
        r1 = single_rows(P, theta)
        r2 = single_rows(P, theta + HALF_PI)
        rows = None if r1 is None or r2 is None else r1 + r2
    elif mode == "double":
        rows = _DoubleRows(P)(theta)
    else:
        raise ValueError("mode must be 'single', 'double' or 'obs1'")
    if rows is None:
        return OracleKernel(theta, [], 0.0, 0.0)
    return _clip_rows(P, rows, theta)


# --------------------------------------------------------------------------
# dense scans
# --------------------------------------------------------------------------


@dataclass
class ScanResult:
    thetas: np.ndarray
    empty: np.ndarray
    area: np.ndarray
    perimeter: np.ndarray
    mode: str

    def __len__(self):
        return len(self.thetas)

    def best(self, objective: str = "area", sense: str = "max") -> tuple[float, float]:
        vals = self.area if objective == "area" else self.perimeter
        k = int(np.argmax(vals) if sense == "max" else np.argmin(vals))
        return float(self.thetas[k]), float(vals[k])


def _batched(P: SimplePolygon, thetas, rows_list):
    """Area/perimeter for a list of equally sized row sets via the batch clipper."""
    from .geom_core import clipped_measures

    T = len(thetas)
    if T == 0:
        return np.zeros(0), np.zeros(0)
    R = np.array(rows_list, dtype=float)
    ed = edge_directions(P)
    ld = np.stack([-R[:, :, 1], R[:, :, 0]], axis=-1)
    ld /= np.hypot(ld[..., 0], ld[..., 1])[..., None]
    dirs = np.concatenate([np.broadcast_to(ed, (T,) + ed.shape), ld], axis=1)
    return clipped_measures(P, R, dirs)


def dense_scan(P: SimplePolygon, domain=(-HALF_PI, HALF_PI), samples: int = 2000, mode: str = "single") -> ScanResult:
    """Kernel emptiness, area and perimeter on ``samples`` uniform angles
    starting at ``domain[0]`` (the end of the domain is excluded)."""
    if samples < 2:
        raise ValueError("samples must be at least 2")
    if mode not in ("single", "double", "obs1"):
        raise ValueError("mode must be 'single', 'double' or 'obs1'")
    lo, hi = domain
    thetas = lo + (hi - lo) * np.arange(samples) / samples
    area = np.zeros(samples)
    per = np.zeros(samples)
    ok1, r1 = _single_rows_batch(P, thetas)
    if mode == "single":
        ok, rows = ok1, r1
    else:
        ok2, r2 = _single_rows_batch(P, thetas + HALF_PI)
        ok, rows = ok1 & ok2, np.concatenate([r1, r2], axis=1)
    if mode == "double":
        maker = _DoubleRows(P)
        tq = _quarter(thetas)
        gen = tq != 0.0
        if maker.ext is None:
            ok = ok & ~gen
        else:
            idx = np.nonzero(gen)[0]
            if len(idx):
                a2, p2 = _batched(P, tq[idx], maker.batch(tq[idx]))
                area[idx], per[idx] = a2, p2
            ok = ok & ~gen
    idx = np.nonzero(ok)[0]
    if len(idx):
        a1, p1 = _batched(P, thetas[idx], rows[idx])
        area[idx], per[idx] = a1, p1
    return ScanResult(thetas, area <= 0.0, area, per, mode)


# --------------------------------------------------------------------------
# staircase visibility on a raster
# --------------------------------------------------------------------------


@dataclass
class GridPath:
    h: float
    cells: np.ndarray  # (k, 2) cell centres in the original frame

    def __len__(self):
        return len(self.cells)


def _interior_cells(xr: np.ndarray, h: float):
    """Cell grid over the bounding box; a cell is usable when its centre is
    inside P and at least h/sqrt(2) away from the boundary."""
    lo = xr.min(axis=0)
    nx, ny = (np.ceil((xr.max(axis=0) - lo) / h).astype(int) + 1).tolist()
    cx = lo[0] + (np.arange(nx) + 0.5) * h
    cy = lo[1] + (np.arange(ny) + 0.5) * h
    X, Y = np.meshgrid(cx, cy)  # (ny, nx)
    a, b = xr, np.roll(xr, -1, axis=0)
    inside = np.zeros(X.shape, dtype=bool)
    dist = np.full(X.shape, np.inf)
    for (ax, ay), (bx, by) in zip(a, b):
        cond = (ay > Y) != (by > Y)
        xc = ax + (Y - ay) * (bx - ax) / np.where(by != ay, by - ay, 1.0)
        inside ^= cond & (X < xc)
        ex, ey = bx - ax, by - ay
        L2 = ex * ex + ey * ey
        t = np.clip(((X - ax) * ex + (Y - ay) * ey) / L2, 0.0, 1.0) if L2 > 0 else np.zeros(X.shape)
        dist = np.minimum(dist, np.hypot(X - ax - t * ex, Y - ay - t * ey))
    return lo, cx, cy, inside & (dist > h / math.sqrt(2.0))


def _snap(valid, lo, h, p):
    """Usable cell nearest to p within two cells, or None."""
    j0, i0 = int((p[0] - lo[0]) // h), int((p[1] - lo[1]) // h)
    best = None
    for i in range(i0 - 2, i0 + 3):
        for j in range(j0 - 2, j0 + 3):
            if 0 <= i < valid.shape[0] and 0 <= j < valid.shape[1] and valid[i, j]:
                d = math.hypot(lo[0] + (j + 0.5) * h - p[0], lo[1] + (i + 0.5) * h - p[1])
                if best is None or d < best[0]:
                    best = (d, i, j)
    return None if best is None else best[1:]


def _row_spread(seed, valid, sx):
    """Reach along a row from the seeds: sx = 0 in both directions, else
    only towards increasing (sx = 1) or decreasing (sx = -1) column."""
    if sx == 0:
        run = np.cumsum(~valid)
        hit = np.zeros(run[-1] + 1, dtype=bool)
        hit[run[seed & valid]] = True
        return valid & hit[run]
    if sx < 0:
        return _row_spread(seed[::-1], valid[::-1], 1)[::-1]
    ar = np.arange(len(seed))
    last_seed = np.maximum.accumulate(np.where(seed & valid, ar, -1))
    last_wall = np.maximum.accumulate(np.where(~valid, ar, -1))
    return valid & (last_seed > last_wall)


def _monotone_reach(valid, start, target, sy, sx):
    """Row sweep in direction sy; returns (reached, seeds) per row."""
    ny, nx = valid.shape
    i0, j0 = start
    i1 = target[0]
    reach = np.zeros_like(valid)
    seeds = np.zeros_like(valid)
    prev = None
    for i in range(i0, i1 + sy, sy):
        seed = np.zeros(nx, dtype=bool)
        if prev is None:
            seed[j0] = True
        else:
            seed |= prev
            if sx >= 0:
                seed[1:] |= prev[:-1]
            if sx <= 0:
                seed[:-1] |= prev[1:]
        seeds[i] = seed & valid[i]
        reach[i] = _row_spread(seed, valid[i], sx)
        if not reach[i].any():
            break
        prev = reach[i]
    return reach, seeds


def _backtrack(reach, seeds, start, target, sy, sx):
    i, j = target
    out = [(i, j)]
    while (i, j) != tuple(start):
        if seeds[i, j] and i != start[0]:
            for dj in ((0, -1, 1) if sx == 0 else (0, -sx)):
                if 0 <= j + dj < reach.shape[1] and reach[i - sy, j + dj]:
                    i, j = i - sy, j + dj
                    break
        else:
            # walk along the row towards the nearest seed
            row = np.nonzero(seeds[i])[0]
            if sx != 0:
                row = row[(row - j) * sx <= 0]
            k = int(row[np.argmin(np.abs(row - j))])
            j += int(np.sign(k - j))
        out.append((i, j))
    return out[::-1]


class StaircaseRaster:
    """Raster of P at one orientation, reusable for many visibility queries."""

    def __init__(self, P: SimplePolygon, theta: float = 0.0, h: float | None = None):
        self.P = P
        self.theta = float(theta)
        self.xr = rotate_points(P.xy, -theta)
        if h is None:
            span = self.xr.max(axis=0) - self.xr.min(axis=0)
            h = float(np.hypot(*span)) / 512.0
        self.h = float(h)
        self.lo, self.cx, self.cy, self.valid = _interior_cells(self.xr, self.h)

    def visible(self, p, q, mode: str = "single", return_path: bool = False):
        from .errors import PointOutside

        for name, pt in (("p", p), ("q", q)):
            if not point_in_polygon(self.P.xy, pt) or _on_boundary(self.P.xy, pt):
                raise PointOutside(f"{name}={tuple(pt)} is not strictly inside the polygon")
        if mode not in ("single", "double"):
            raise ValueError("mode must be 'single' or 'double'")
        pr, qr = rotate_points(np.array([p, q], dtype=float), -self.theta)
        a, b = _snap(self.valid, self.lo, self.h, pr), _snap(self.valid, self.lo, self.h, qr)
        if a is None or b is None:
            return (False, None) if return_path else False
        sys_ = (1, -1) if a[0] == b[0] else (1 if b[0] > a[0] else -1,)
        if mode == "single":
            sxs = (0,)
        else:
            sxs = (1, -1) if a[1] == b[1] else (1 if b[1] > a[1] else -1,)
        for sy in sys_:
            for sx in sxs:
                reach, seeds = _monotone_reach(self.valid, a, b, sy, sx)
                if reach[b]:
                    if not return_path:
                        return True
                    cells = _backtrack(reach, seeds, a, b, sy, sx)
                    xy = np.array([(self.cx[j], self.cy[i]) for i, j in cells])
                    return True, GridPath(self.h, rotate_points(xy, self.theta))
        return (False, None) if return_path else False


def staircase_visible(P: SimplePolygon, p, q, theta: float = 0.0, h: float | None = None, mode: str = "single", return_path: bool = False):
    """Approximate staircase visibility between p and q at orientation theta.

    mode "single": a path monotone along the rotated y axis;
    mode "double": monotone along both rotated axes.
    Works on a raster of resolution h (default: diameter / 512) using only
    cells well inside P, so it can report false negatives near the
    boundary but never false positives beyond O(h).
    """
    return StaircaseRaster(P, theta, h).visible(p, q, mode, return_path)


def _on_boundary(xy: np.ndarray, p, eps: float = EPS_LEN) -> bool:
    a, b = xy, np.roll(xy, -1, axis=0)
    e = b - a
    t = np.clip(((p[0] - a[:, 0]) * e[:, 0] + (p[1] - a[:, 1]) * e[:, 1]) / np.maximum((e * e).sum(axis=1), 1e-300), 0, 1)
    d = np.hypot(p[0] - a[:, 0] - t * e[:, 0], p[1] - a[:, 1] - t * e[:, 1])
    return bool(d.min() <= eps)


# --------------------------------------------------------------------------
# keep-side calibration
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SideCheck:
    cid: str
    verdict: int  # +1 keep side confirmed, -1 flipped, 0 inconclusive
    probe: tuple[float, float] | None


def _witness_targets(P: SimplePolygon, d: float, rng, extra: int):
    """Points just inside P next to every vertex and edge midpoint, plus
    ``extra`` random interior points."""
    xy = P.xy
    out = []
    n = P.n
    for i in range(n):
        for p in (xy[i], 0.5 * (xy[i] + xy[(i + 1) % n])):
            for dx in (-d, d):
                for dy in (-d, d):
                    c = (p[0] + dx, p[1] + dy)
                    if point_in_polygon(xy, c) and not _on_boundary(xy, c, 0.5 * d):
                        out.append(c)
    lo, hi = xy.min(axis=0), xy.max(axis=0)
    while extra > 0:
        c = tuple(rng.uniform(lo, hi))
        if point_in_polygon(xy, c) and not _on_boundary(xy, c, d):
            out.append(c)
            extra -= 1
    return out


def calibrate_keep_sides(P: SimplePolygon, constraints, theta: float = 0.25 * math.pi, mode: str = "double", seed: int = 0, h: float | None = None) -> list[SideCheck]:
    """Check the keep side of each (cid, row) constraint against staircase
    visibility at ``theta``.

    For a row whose line carries an edge of the oracle kernel, points just
    on either side of that edge are tested against witness targets: the
    kept side must see all of them, the dropped side must miss one.
    Rows that do not touch the kernel are reported inconclusive.
    """
    K = kernel_full_clip(P, theta, mode)
    if K.polygon is None:
        return [SideCheck(cid, 0, None) for cid, _ in constraints]
    ras = StaircaseRaster(P, theta, h)
    d = 4.0 * ras.h
    targets = _witness_targets(P, 3.0 * ras.h, _rng(seed), 16)
    kxy = K.polygon.xy
    out = []
    for cid, row in constraints:
        a, b, c = (float(v) for v in row)
        nrm = math.hypot(a, b)
        on = np.abs(kxy @ np.array([a, b]) + c) / nrm <= 1e-7 * max(1.0, float(np.abs(kxy).max()))
        edge = next((i for i in range(len(kxy)) if on[i] and on[(i + 1) % len(kxy)]), None)
        if edge is None:
            out.append(SideCheck(cid, 0, None))
            continue
        m = 0.5 * (kxy[edge] + kxy[(edge + 1) % len(kxy)])
        u = np.array([a, b]) / nrm
        keep, drop = tuple(m - d * u), tuple(m + d * u)

        def sees_all(p):
            if not point_in_polygon(P.xy, p) or _on_boundary(P.xy, p, ras.h):
                return None
            return all(ras.visible(p, t, "double" if mode != "single" else "single") for t in targets)

        k_ok, d_ok = sees_all(keep), sees_all(drop)
        if k_ok and d_ok is False:
            v = 1
        elif k_ok is False and d_ok:
            v = -1
        elif k_ok and d_ok is None:
            v = 1  # the dropped side leaves P: the line is tangent to the boundary
        else:
            v = 0
        out.append(SideCheck(cid, v, (float(m[0]), float(m[1]))))
    return out
