"""Hot numeric kernels.

Each kernel exists twice: a loop version compiled by numba, and a
vectorized numpy version used when ``ROTOKERNEL_NUMBA=0``.  The public
names at the bottom of the module point at whichever backend is active.
The numpy versions stay importable as ``_*_np`` so the benchmark and the
tests can compare them against the active backend.
"""
import numpy as np

from ._accel import USE_NUMBA, maybe_njit

# --------------------------------------------------------------------------
# Sutherland-Hodgman clipping of a ring with edge provenance
# --------------------------------------------------------------------------
# A ring is (xy[m, 2], eid[m]); eid[i] labels the edge xy[i] -> xy[i+1].
# Keep a*x + b*y + c <= eps.  For non-convex rings the output can contain
# zero-width bridges along the clip line; ring_area is unaffected and
# ring_perimeter cancels them.


def _sh_clip_loop(xy, eid, a, b, c, line_id, eps):
    m = xy.shape[0]
    out = np.empty((2 * m + 2, 2))
    oid = np.empty(2 * m + 2, dtype=np.int64)
    k = 0
    if m == 0:
        return out[:0], oid[:0]
    for i in range(m):
        j = i + 1
        if j == m:
            j = 0
        di = a * xy[i, 0] + b * xy[i, 1] + c
        dj = a * xy[j, 0] + b * xy[j, 1] + c
        in_i = di <= eps
        in_j = dj <= eps
        if in_i:
            out[k, 0] = xy[i, 0]
            out[k, 1] = xy[i, 1]
            oid[k] = eid[i]
            k += 1
            if not in_j:
                if di >= -eps:
                    oid[k - 1] = line_id
                else:
                    t = di / (di - dj)
                    out[k, 0] = xy[i, 0] + t * (xy[j, 0] - xy[i, 0])
                    out[k, 1] = xy[i, 1] + t * (xy[j, 1] - xy[i, 1])
                    oid[k] = line_id
                    k += 1
        elif in_j:
            if dj < -eps:
                t = di / (di - dj)
                out[k, 0] = xy[i, 0] + t * (xy[j, 0] - xy[i, 0])
                out[k, 1] = xy[i, 1] + t * (xy[j, 1] - xy[i, 1])
                oid[k] = eid[i]
                k += 1
    return out[:k], oid[:k]


def _sh_clip_np(xy, eid, a, b, c, line_id, eps):
    m = xy.shape[0]
    if m == 0:
        return xy.copy(), eid.copy()
    d = xy @ np.array([a, b]) + c
    nxt = np.roll(np.arange(m), -1)
    dn = d[nxt]
    inside = d <= eps
    inside_n = inside[nxt]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = d / (d - dn)
        # nan/inf only where no crossing is emitted
        cross = xy + t[:, None] * (xy[nxt] - xy)
    exit_ = inside & ~inside_n
    exit_on_line = exit_ & (d >= -eps)
    exit_cross = exit_ & (d < -eps)
    enter_cross = ~inside & inside_n & (dn < -eps)
    # slot 0: the vertex itself, slot 1: crossing emitted after it
    pts = np.stack([xy, cross], axis=1)
    ids = np.stack([np.where(exit_on_line, line_id, eid), np.where(exit_cross, line_id, eid)], axis=1)
    keep = np.stack([inside, exit_cross | enter_cross], axis=1)
    return pts[keep], ids[keep]


def _ring_area_loop(xy):
    m = xy.shape[0]
    s = 0.0
    for i in range(m):
        j = i + 1
        if j == m:
            j = 0
        s += xy[i, 0] * xy[j, 1] - xy[j, 0] * xy[i, 1]
    return 0.5 * s


def _ring_area_np(xy):
    if xy.shape[0] == 0:
        return 0.0
    x, y = xy[:, 0], xy[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _ring_perimeter_loop(xy, eid, dirs):
    """Boundary length of a clipped ring; edges sharing a support line are
    merged by signed 1-D coverage so that bridges traversed both ways cancel."""
    m = xy.shape[0]
    if m < 2:
        return 0.0
    total = 0.0
    done = np.zeros(m, dtype=np.bool_)
    ts = np.empty(2 * m)
    ws = np.empty(2 * m)
    for i in range(m):
        if done[i]:
            continue
        g = eid[i]
        dx = dirs[g, 0]
        dy = dirs[g, 1]
        q = 0
        for e in range(i, m):
            if eid[e] != g:
                continue
            done[e] = True
            f = e + 1
            if f == m:
                f = 0
            t0 = xy[e, 0] * dx + xy[e, 1] * dy
            t1 = xy[f, 0] * dx + xy[f, 1] * dy
            w = 1.0 if t1 >= t0 else -1.0
            ts[q] = min(t0, t1)
            ws[q] = w
            ts[q + 1] = max(t0, t1)
            ws[q + 1] = -w
            q += 2
        order = np.argsort(ts[:q])
        cov = 0.0
        for r in range(q - 1):
            cov += ws[order[r]]
            if abs(cov) > 0.5:
                total += ts[order[r + 1]] - ts[order[r]]
    return total


def _ring_perimeter_np(xy, eid, dirs):
    m = xy.shape[0]
    if m < 2:
        return 0.0
    nxt = np.roll(np.arange(m), -1)
    d = dirs[eid]
    t0 = np.einsum("ij,ij->i", xy, d)
    t1 = np.einsum("ij,ij->i", xy[nxt], d)
    fwd = t1 >= t0
    lo = np.minimum(t0, t1)
    hi = np.maximum(t0, t1)
    w = np.where(fwd, 1.0, -1.0)
    total = 0.0
    for g in np.unique(eid):
        sel = eid == g
        t = np.concatenate([lo[sel], hi[sel]])
        wt = np.concatenate([w[sel], -w[sel]])
        order = np.argsort(t, kind="stable")
        t = t[order]
        cov = np.cumsum(wt[order])[:-1]
        total += float(np.sum(np.diff(t)[np.abs(cov) > 0.5]))
    return total


# --------------------------------------------------------------------------
# Strip levels of the single-orientation kernel, batched over angles
# --------------------------------------------------------------------------


def _strip_levels_loop(xy, reflex, cos_t, sin_t, eps):
    n = xy.shape[0]
    T = cos_t.shape[0]
    S = np.empty(T)
    N = np.empty(T)
    iS = np.empty(T, dtype=np.int64)
    iN = np.empty(T, dtype=np.int64)
    h = np.empty(n)
    for k in range(T):
        c = cos_t[k]
        s = sin_t[k]
        for i in range(n):
            h[i] = -xy[i, 0] * s + xy[i, 1] * c
        best_max = -np.inf
        arg_max = -1
        best_min = np.inf
        arg_min = -1
        lo = np.inf
        arg_lo = 0
        hi = -np.inf
        arg_hi = 0
        for i in range(n):
            if h[i] < lo:
                lo = h[i]
                arg_lo = i
            if h[i] > hi:
                hi = h[i]
                arg_hi = i
            if not reflex[i]:
                continue
            p = h[(i - 1) % n]
            q = h[(i + 1) % n]
            hv = h[i]
            if abs(q - hv) <= eps:
                # edge (i, i+1) parallel to the sweep direction
                if not reflex[(i + 1) % n]:
                    continue
                q = h[(i + 2) % n]
            elif abs(p - hv) <= eps:
                # handled when visiting the other endpoint of the edge
                continue
            if p < hv - eps and q < hv - eps:
                if hv > best_max:
                    best_max = hv
                    arg_max = i
            elif p > hv + eps and q > hv + eps:
                if hv < best_min:
                    best_min = hv
                    arg_min = i
        if arg_max < 0:
            best_max = lo
            arg_max = -1 - arg_lo
        if arg_min < 0:
            best_min = hi
            arg_min = -1 - arg_hi
        S[k] = best_max
        N[k] = best_min
        iS[k] = arg_max
        iN[k] = arg_min
    return S, N, iS, iN


def _strip_levels_np(xy, reflex, cos_t, sin_t, eps):
    H = -np.outer(sin_t, xy[:, 0]) + np.outer(cos_t, xy[:, 1])
    Hp = np.roll(H, 1, axis=1)
    Hn = np.roll(H, -1, axis=1)
    Hn2 = np.roll(H, -2, axis=1)
    rnext = np.roll(reflex, -1)
    flat_next = np.abs(Hn - H) <= eps
    flat_prev = np.abs(Hp - H) <= eps
    q = np.where(flat_next, Hn2, Hn)
    valid = reflex[None, :] & ~(flat_prev & ~flat_next) & ~(flat_next & ~rnext[None, :])
    is_max = valid & (Hp < H - eps) & (q < H - eps)
    is_min = valid & (Hp > H + eps) & (q > H + eps)
    Hmax = np.where(is_max, H, -np.inf)
    Hmin = np.where(is_min, H, np.inf)
    arg_max = np.argmax(Hmax, axis=1)
    arg_min = np.argmin(Hmin, axis=1)
    rows = np.arange(H.shape[0])
    has_max = is_max.any(axis=1)
    has_min = is_min.any(axis=1)
    arg_lo = np.argmin(H, axis=1)
    arg_hi = np.argmax(H, axis=1)
    S = np.where(has_max, Hmax[rows, arg_max], H[rows, arg_lo])
    N = np.where(has_min, Hmin[rows, arg_min], H[rows, arg_hi])
    iS = np.where(has_max, arg_max, -1 - arg_lo).astype(np.int64)
    iN = np.where(has_min, arg_min, -1 - arg_hi).astype(np.int64)
    return S, N, iS, iN


# --------------------------------------------------------------------------
# Area / perimeter of P intersected with a horizontal strip (trapezoid sums)
# --------------------------------------------------------------------------


def _strip_measures_loop(xy, lo, hi, eps):
    n = xy.shape[0]
    area = 0.0
    per = 0.0
    top = np.empty(n + 1)
    bot = np.empty(n + 1)
    nt = 0
    nb = 0
    for i in range(n):
        j = i + 1
        if j == n:
            j = 0
        x0 = xy[i, 0]
        y0 = xy[i, 1]
        x1 = xy[j, 0]
        y1 = xy[j, 1]
        if abs(y1 - y0) <= eps:
            yy = 0.5 * (y0 + y1)
            if yy > lo + eps and yy < hi - eps:
                per += abs(x1 - x0)
        else:
            ya = max(min(y0, y1), lo)
            yb = min(max(y0, y1), hi)
            if yb > ya:
                xa = x0 + (ya - y0) * (x1 - x0) / (y1 - y0)
                xb = x0 + (yb - y0) * (x1 - x0) / (y1 - y0)
                seg = np.sqrt((xb - xa) ** 2 + (yb - ya) ** 2)
                per += seg
                if y1 > y0:
                    area += 0.5 * (xa + xb) * (yb - ya)
                else:
                    area -= 0.5 * (xa + xb) * (yb - ya)
            # cross-section just below the top line
            if (y0 < hi - eps) != (y1 < hi - eps):
                top[nt] = x0 + (hi - y0) * (x1 - x0) / (y1 - y0)
                nt += 1
            # cross-section just above the bottom line
            if (y0 <= lo + eps) != (y1 <= lo + eps):
                bot[nb] = x0 + (lo - y0) * (x1 - x0) / (y1 - y0)
                nb += 1
    ts = np.sort(top[:nt])
    for r in range(0, nt - 1, 2):
        per += ts[r + 1] - ts[r]
    bs = np.sort(bot[:nb])
    for r in range(0, nb - 1, 2):
        per += bs[r + 1] - bs[r]
    return area, per


def _strip_measures_np(xy, lo, hi, eps):
    x0, y0 = xy[:, 0], xy[:, 1]
    x1, y1 = np.roll(x0, -1), np.roll(y0, -1)
    dy = y1 - y0
    flat = np.abs(dy) <= eps
    ym = 0.5 * (y0 + y1)
    per = float(np.sum(np.abs(x1 - x0)[flat & (ym > lo + eps) & (ym < hi - eps)]))
    sl = ~flat
    x0s, y0s, x1s, y1s, dys = x0[sl], y0[sl], x1[sl], y1[sl], dy[sl]
    ya = np.maximum(np.minimum(y0s, y1s), lo)
    yb = np.minimum(np.maximum(y0s, y1s), hi)
    ok = yb > ya
    k = (x1s - x0s) / dys
    xa = x0s + (ya - y0s) * k
    xb = x0s + (yb - y0s) * k
    seg = np.hypot(xb - xa, yb - ya)
    per += float(np.sum(seg[ok]))
    area = float(np.sum((np.sign(dys) * 0.5 * (xa + xb) * (yb - ya))[ok]))
    ct = (y0s < hi - eps) != (y1s < hi - eps)
    top = np.sort(x0s[ct] + (hi - y0s[ct]) * k[ct])
    cb = (y0s <= lo + eps) != (y1s <= lo + eps)
    bot = np.sort(x0s[cb] + (lo - y0s[cb]) * k[cb])
    per += float(np.sum(top[1::2] - top[0::2][: len(top[1::2])]))
    per += float(np.sum(bot[1::2] - bot[0::2][: len(bot[1::2])]))
    return area, per


# --------------------------------------------------------------------------
# Intersection of halfplanes as a convex polygon
# --------------------------------------------------------------------------


def _halfplane_polygon_loop(coeffs, ids, bound, eps):
    """Convex polygon {a x + b y + c <= 0 for every row}, clipped out of the
    square [-bound, bound]^2 whose edges carry id -1."""
    box = np.empty((4, 2))
    box[0, 0] = -bound
    box[0, 1] = -bound
    box[1, 0] = bound
    box[1, 1] = -bound
    box[2, 0] = bound
    box[2, 1] = bound
    box[3, 0] = -bound
    box[3, 1] = bound
    xy = box
    eid = np.full(4, -1, dtype=np.int64)
    for r in range(coeffs.shape[0]):
        xy, eid = _sh_clip_loop(xy, eid, coeffs[r, 0], coeffs[r, 1], coeffs[r, 2], ids[r], eps)
        if xy.shape[0] < 3:
            return xy[:0], eid[:0]
    return xy, eid


def _halfplane_polygon_np(coeffs, ids, bound, eps):
    xy = np.array([[-bound, -bound], [bound, -bound], [bound, bound], [-bound, bound]], dtype=float)
    eid = np.full(4, -1, dtype=np.int64)
    for r in range(coeffs.shape[0]):
        xy, eid = _sh_clip_np(xy, eid, coeffs[r, 0], coeffs[r, 1], coeffs[r, 2], ids[r], eps)
        if xy.shape[0] < 3:
            return xy[:0], eid[:0]
    return xy, eid


def _convex_measures_loop(coeff_stack, ids, bound, eps):
    """Area and perimeter of the halfplane polygon for a stack of constraint
    sets, shape (T, k, 3)."""
    T = coeff_stack.shape[0]
    area = np.zeros(T)
    per = np.zeros(T)
    for t in range(T):
        xy, _ = _halfplane_polygon_loop(coeff_stack[t], ids, bound, eps)
        m = xy.shape[0]
        if m < 3:
            continue
        area[t] = _ring_area_loop(xy)
        s = 0.0
        for i in range(m):
            j = i + 1
            if j == m:
                j = 0
            s += np.sqrt((xy[j, 0] - xy[i, 0]) ** 2 + (xy[j, 1] - xy[i, 1]) ** 2)
        per[t] = s
    return area, per


def _convex_measures_np(coeff_stack, ids, bound, eps):
    T = coeff_stack.shape[0]
    area = np.zeros(T)
    per = np.zeros(T)
    for t in range(T):
        xy, _ = _halfplane_polygon_np(coeff_stack[t], ids, bound, eps)
        if xy.shape[0] < 3:
            continue
        area[t] = _ring_area_np(xy)
        per[t] = float(np.sum(np.hypot(*(np.roll(xy, -1, axis=0) - xy).T)))
    return area, per


# --------------------------------------------------------------------------
# Successive ring clipping, batched over angles (used by brute-force scans)
# --------------------------------------------------------------------------


def _clip_measures_loop(xy, coeff_stack, dirs, eps):
    """Clip ring ``xy`` by every constraint row of each (k, 3) slice of
    ``coeff_stack``; returns area and bridge-free perimeter per slice.
    Edge ids: 0..n-1 for the ring's own edges, n+r for constraint r;
    ``dirs`` holds one unit direction per id."""
    n = xy.shape[0]
    T = coeff_stack.shape[0]
    k = coeff_stack.shape[1]
    area = np.zeros(T)
    per = np.zeros(T)
    base = np.arange(n).astype(np.int64)
    for t in range(T):
        ring = xy
        eid = base
        for r in range(k):
            ring, eid = _sh_clip_loop(ring, eid, coeff_stack[t, r, 0], coeff_stack[t, r, 1], coeff_stack[t, r, 2], n + r, eps)
            if ring.shape[0] < 3:
                break
        if ring.shape[0] < 3:
            continue
        a = _ring_area_loop(ring)
        if a <= eps:
            continue
        area[t] = a
        per[t] = _ring_perimeter_loop(ring, eid, dirs[t])
    return area, per


def _clip_measures_np(xy, coeff_stack, dirs, eps):
    n = xy.shape[0]
    T, k = coeff_stack.shape[:2]
    area = np.zeros(T)
    per = np.zeros(T)
    base = np.arange(n, dtype=np.int64)
    for t in range(T):
        ring, eid = xy, base
        for r in range(k):
            ring, eid = _sh_clip_np(ring, eid, *coeff_stack[t, r], n + r, eps)
            if ring.shape[0] < 3:
                break
        if ring.shape[0] < 3:
            continue
        a = _ring_area_np(ring)
        if a <= eps:
            continue
        area[t] = a
        per[t] = _ring_perimeter_np(ring, eid, dirs[t])
    return area, per


# --------------------------------------------------------------------------
# convex hull (monotone chain) over lexicographically sorted points
# --------------------------------------------------------------------------
# A scan with a stack does not vectorize; the numpy backend runs the same
# loop uncompiled.


def _hull_loop(pts, tol):
    m = pts.shape[0]
    idx = np.empty(2 * m + 1, dtype=np.int64)
    k = 0
    for i in range(m):
        while k >= 2:
            a, b = idx[k - 2], idx[k - 1]
            ux, uy = pts[b, 0] - pts[a, 0], pts[b, 1] - pts[a, 1]
            vx, vy = pts[i, 0] - pts[a, 0], pts[i, 1] - pts[a, 1]
            cr = ux * vy - uy * vx
            if cr > tol * np.sqrt((ux * ux + uy * uy) * (vx * vx + vy * vy)):
                break
            k -= 1
        idx[k] = i
        k += 1
    lower = k + 1
    for i in range(m - 2, -1, -1):
        while k >= lower:
            a, b = idx[k - 2], idx[k - 1]
            ux, uy = pts[b, 0] - pts[a, 0], pts[b, 1] - pts[a, 1]
            vx, vy = pts[i, 0] - pts[a, 0], pts[i, 1] - pts[a, 1]
            cr = ux * vy - uy * vx
            if cr > tol * np.sqrt((ux * ux + uy * uy) * (vx * vx + vy * vy)):
                break
            k -= 1
        idx[k] = i
        k += 1
    return idx[: max(k - 1, 1)]


_hull_np = _hull_loop


if USE_NUMBA:
    sh_clip = maybe_njit(_sh_clip_loop)
    ring_area = maybe_njit(_ring_area_loop)
    ring_perimeter = maybe_njit(_ring_perimeter_loop)
    strip_levels = maybe_njit(_strip_levels_loop)
    strip_measures = maybe_njit(_strip_measures_loop)
    # the composite kernels call the plain-python names; rebind them to the
    # compiled versions so numba can resolve them as jitted callees
    _sh_clip_loop = sh_clip
    _ring_area_loop = ring_area
    _ring_perimeter_loop = ring_perimeter
    halfplane_polygon = maybe_njit(_halfplane_polygon_loop)
    _halfplane_polygon_loop = halfplane_polygon
    convex_measures = maybe_njit(_convex_measures_loop)
    clip_measures = maybe_njit(_clip_measures_loop)
    hull = maybe_njit(_hull_loop)
else:
    sh_clip = _sh_clip_np
    ring_area = _ring_area_np
    ring_perimeter = _ring_perimeter_np
    strip_levels = _strip_levels_np
    strip_measures = _strip_measures_np
    halfplane_polygon = _halfplane_polygon_np
    convex_measures = _convex_measures_np
    clip_measures = _clip_measures_np
    hull = _hull_np
