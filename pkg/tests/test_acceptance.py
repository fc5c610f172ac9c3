"""Acceptance criteria 1-10.  Each test prints one PASS/FAIL line.

Tolerances are pinned here; a failing criterion is left failing and
explained in the decision ledger rather than loosened.
"""
import io
import json
import math
import time
from contextlib import redirect_stderr, redirect_stdout

import numpy as np

from rotokernel.cli import main as cli_main
from rotokernel.errors import TiedExtremities
from rotokernel.geom_core import (
    area,
    intersect_orthogonal_pair,
    intersect_with_horizontal,
    intersect_with_vertical,
    perimeter,
)
from rotokernel.oracle import _clip_rows, _row, dense_scan, generate, kernel_full_clip
from rotokernel.ortho import is_in_family_Q, kernel_at_theta, optimize
from rotokernel.rotation_intervals import classify, nonempty_intervals
from rotokernel.steady_kernel import kernel_at, strip

from conftest import FIXTURES, HALF_PI, load

# pinned tolerances and sizes
C1_N, C1_TOL, C1_TIME = 100_000, 1e-12, 5.0
C2_N, C2_TOL = 1000, 1e-9
C3_N, C3_SAMPLES, C3_TIME = 200, 2000, 300.0
C5_POLYS, C5_ANGLES = 100, 50
C6_ANGLES = 50
C7_POLYS, C7_SAMPLES, C7_AREA_TOL, C7_PER_TOL, C7_SYM_TOL = 100, 10_000, 1e-6, 1e-5, 1e-9
C8_SIZES, C8_GROWTH, C8_LIMIT = (100, 1000, 10_000, 100_000), 2.5, 2.0
C9_POLYS, C9_ANGLES, C9_TOL = 20, 20, 1e-9


def verdict(capsys, k, ok, detail):
    with capsys.disabled():
        print(f"\nCRITERION {k:>2}: {'PASS' if ok else 'FAIL'} | {detail}")
    assert ok, detail


def _solve(a1, b1, c1, a2, b2, c2):
    """Generic two-line solver in extended precision (Cramer's rule)."""
    a1, b1, c1, a2, b2, c2 = (np.longdouble(v) for v in (a1, b1, c1, a2, b2, c2))
    d = a1 * b2 - a2 * b1
    return float((b1 * c2 - b2 * c1) / d), float((a2 * c1 - a1 * c2) / d)


def test_c1_intersection_formulas(capsys):
    # coordinates in [-100, 100]; theta uniform in (0, pi), skipping the
    # near-parallel band |sin| < 0.1 (horizontal) or |cos| < 0.1 (vertical)
    rng = np.random.default_rng(1)
    U = rng.uniform(-100, 100, (C1_N, 2))
    W = rng.uniform(-100, 100, (C1_N, 2))
    Y = rng.uniform(-100, 100, C1_N)
    T = rng.uniform(0, math.pi, C1_N)
    err = [0.0, 0.0, 0.0]
    t0 = time.perf_counter()
    for u, w, y0, t in zip(U, W, Y, T):
        s, c = math.sin(t), math.cos(t)
        if abs(s) >= 0.1:
            p = intersect_with_horizontal(u, t, y0)
            r = _solve(s, -c, c * u[1] - s * u[0], 0, 1, -y0)
            err[0] = max(err[0], abs(p[0] - r[0]), abs(p[1] - r[1]))
        if abs(c) >= 0.1:
            p = intersect_with_vertical(u, t, y0)
            r = _solve(s, -c, c * u[1] - s * u[0], 1, 0, -y0)
            err[1] = max(err[1], abs(p[0] - r[0]), abs(p[1] - r[1]))
        h = 0.5 * t
        sh, ch = math.sin(h), math.cos(h)
        p = intersect_orthogonal_pair(u, w, h)
        r = _solve(sh, -ch, ch * u[1] - sh * u[0], ch, sh, -(ch * w[0] + sh * w[1]))
        err[2] = max(err[2], abs(p[0] - r[0]), abs(p[1] - r[1]))
    dt = time.perf_counter() - t0
    ok = max(err) <= C1_TOL and dt < C1_TIME
    verdict(capsys, 1, ok, f"max err h/v/pair = {err[0]:.2e}/{err[1]:.2e}/{err[2]:.2e} (tol {C1_TOL}), {dt:.2f}s (< {C1_TIME}s)")


def test_c2_single_kernel_equivalence(capsys):
    worst = 0.0
    for s in range(C2_N):
        kind = "random_orthogonal" if s % 5 == 4 else "random_simple"
        P = generate(kind, 5 + s % 36, seed=s)
        a = kernel_at(P, 0.0).area
        b = kernel_full_clip(P, 0.0, "single").area
        worst = max(worst, abs(a - b) / max(b, 1e-300) if b > 0 else abs(a))
    nt = kernel_at(load("nt"), 0.0).area
    ok = worst <= C2_TOL and abs(nt - 8 / 3) <= C2_TOL
    verdict(capsys, 2, ok, f"{C2_N} polygons, worst rel area err {worst:.2e} (tol {C2_TOL}); NT area {nt:.12f}")


_C3 = {}


def _c3_data():
    if not _C3:
        step = math.pi / C3_SAMPLES
        rows = []
        t0 = time.perf_counter()
        for s in range(C3_N):
            P = generate("random_simple", 5 + s % 36, seed=10_000 + s)
            ivs = nonempty_intervals(P)
            sc = dense_scan(P, samples=C3_SAMPLES)
            ends = np.array([e for iv in ivs for e in (iv.lo, iv.hi)] + [-HALF_PI, HALF_PI])
            bad = near = 0
            for t, empty in zip(sc.thetas, sc.empty):
                if classify(ivs, float(t)) == (not empty):
                    continue
                if np.min(np.abs(ends - t)) <= 2 * step:
                    near += 1
                else:
                    bad += 1
            rows.append((P.n, len(ivs), bad, near))
        _C3["rows"] = rows
        _C3["time"] = time.perf_counter() - t0
    return _C3


def test_c3_interval_scan_agreement(capsys):
    d = _c3_data()
    bad = sum(r[2] for r in d["rows"])
    near = sum(r[3] for r in d["rows"])
    ok = bad == 0 and d["time"] < C3_TIME
    verdict(capsys, 3, ok, f"{C3_N} polygons x {C3_SAMPLES} angles: {bad} unexplained, {near} within 2 steps of an endpoint; {d['time']:.1f}s (< {C3_TIME:.0f}s)")


def test_c4_interval_count_bound(capsys):
    rows = [(n, k) for n, k, _, _ in _c3_data()["rows"]]
    for name in ("square", "nt", "dn", "lp", "plus"):
        P = load(name)
        rows.append((P.n, len(nonempty_intervals(P))))
    worst = max(k / n for n, k in rows)
    ok = all(k <= 8 * n for n, k in rows)
    verdict(capsys, 4, ok, f"{len(rows)} instances, max count/n = {worst:.3f} (bound 8)")


def test_c5_at_most_eight_edges(capsys):
    rng = np.random.default_rng(5)
    worst = checked = viol = tied = 0
    for s in range(C5_POLYS):
        P = generate("family_Q", 12 + 2 * (s % 40), seed=s)
        for t in rng.uniform(0, HALF_PI, C5_ANGLES):
            if t == 0.0:
                continue
            try:
                k = kernel_at_theta(P, float(t))
            except TiedExtremities:
                tied += 1
                continue
            if k.is_empty:
                continue
            checked += 1
            worst = max(worst, k.polygon.n)
            viol += k.polygon.n > 8
    ok = viol == 0 and checked > 0
    verdict(capsys, 5, ok, f"{checked} nonempty kernels, max edges {worst}, {viol} violations, {tied} tied (empty) samples")


def test_c6_emptiness_outside(capsys):
    rng = np.random.default_rng(6)
    dominated = [generate("with_lemma6_pair", 0, seed=s) for s in range(50)]
    outside = []
    s = 0
    while len(outside) < 50:
        P = generate("random_orthogonal", 12 + s % 30, seed=s)
        if not is_in_family_Q(P):
            outside.append(P)
        s += 1
    viol = oracle_nonempty = 0
    for P in dominated + outside:
        for t in rng.uniform(0, HALF_PI, C6_ANGLES):
            t = float(t)
            if t == 0.0:
                continue
            try:
                k = kernel_at_theta(P, t, tied="empty")
            except TiedExtremities:
                continue
            viol += not k.is_empty
            oracle_nonempty += kernel_full_clip(P, t, "double").area > 1e-9
    ok = viol == 0
    verdict(capsys, 6, ok, f"{len(dominated)} dominated-pair + {len(outside)} non-member polygons x {C6_ANGLES} angles: {viol} nonempty reports (clip oracle nonempty: {oracle_nonempty})")


def test_c7_optimizer(capsys):
    worst_a = worst_p = 0.0
    fails = 0
    for s in range(C7_POLYS):
        P = generate("family_Q", 12 + 4 * (s % 20), seed=1000 + s)
        sc = dense_scan(P, (0.0, HALF_PI), C7_SAMPLES, "double")
        ra, rp = optimize(P, "area"), optimize(P, "perimeter")
        da = abs(ra.value - sc.area.max()) / max(1.0, area(P))
        dp = abs(rp.value - sc.perimeter.max()) / perimeter(P)
        worst_a, worst_p = max(worst_a, da), max(worst_p, dp)
        fails += da > C7_AREA_TOL or dp > C7_PER_TOL
    lp = load("lp")
    sym = 0.0
    for k in range(1, 512):
        t = HALF_PI * k / 512
        sym = max(sym, abs(kernel_at_theta(lp, t).area - kernel_at_theta(lp, HALF_PI - t).area))
    ok = fails == 0 and sym <= C7_SYM_TOL
    verdict(capsys, 7, ok, f"{C7_POLYS} polygons: worst area gap {worst_a:.2e} (tol {C7_AREA_TOL}), perimeter gap {worst_p:.2e} (tol {C7_PER_TOL}); LP symmetry {sym:.2e}")


def test_c8_linear_time(capsys):
    optimize(generate("staircase", 100, seed=0))
    times = []
    for n in C8_SIZES:
        P = generate("staircase", n, seed=0)
        reps = 3 if n < 100_000 else 2
        best = math.inf
        for _ in range(reps):
            t0 = time.perf_counter()
            optimize(P)
            best = min(best, time.perf_counter() - t0)
        times.append(best)
    growth = [(b / a) ** (1 / math.log2(m / n)) for (a, b, n, m) in zip(times, times[1:], C8_SIZES, C8_SIZES[1:])]
    ok = max(growth) <= C8_GROWTH and times[-1] < C8_LIMIT
    tt = ", ".join(f"{n}: {t:.3f}s" for n, t in zip(C8_SIZES, times))
    verdict(capsys, 8, ok, f"{tt}; per-doubling growth {max(growth):.2f} (<= {C8_GROWTH}); n=1e5 {times[-1]:.2f}s (< {C8_LIMIT}s)")


def _strip_rows(P, t):
    st = strip(P, t)
    if st.inverted:
        return None
    u = (-math.sin(t), math.cos(t))
    return [_row(u, st.north_level, True), _row(u, st.south_level, False)]


def test_c9_containment(capsys):
    rng = np.random.default_rng(9)
    worst = 0.0
    checked = viol = 0
    for s in range(C9_POLYS):
        P = generate("family_Q", 16 + 2 * s, seed=500 + s)
        for t in rng.uniform(0, HALF_PI, C9_ANGLES):
            t = float(t)
            try:
                k = kernel_at_theta(P, t)
            except TiedExtremities:
                continue
            if k.is_empty:
                continue
            checked += 1
            K = k.polygon
            # K inside P, then inside each single-orientation strip
            rows = [np.array([b, -a, a * q[1] - b * q[0]]) for p, q in zip(K.xy, np.roll(K.xy, -1, axis=0)) for a, b in [q - p]]
            inP = _clip_rows(P, rows, t).area
            gaps = [abs(inP - k.area)]
            for tt in (t, t + HALF_PI):
                sr = _strip_rows(P, tt)
                if sr is None:
                    gaps.append(k.area)
                else:
                    gaps.append(abs(_clip_rows(K, sr, tt).area - k.area))
            g = max(gaps)
            worst = max(worst, g)
            viol += g > C9_TOL
    ok = viol == 0 and checked > 0
    verdict(capsys, 9, ok, f"{checked} nonempty kernels, worst |area(K & K_single) - area(K)| = {worst:.2e} (tol {C9_TOL})")


def _cli(argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = cli_main([str(a) for a in argv])
    return code, _strip_timing(out.getvalue()), _strip_timing(err.getvalue())


def _strip_timing(text):
    """Drop wall_time_s from JSON report lines; everything else stays byte-exact."""
    lines = []
    for ln in text.splitlines():
        try:
            doc = json.loads(ln)
        except ValueError:
            lines.append(ln)
            continue
        if isinstance(doc, dict):
            doc.pop("wall_time_s", None)
        lines.append(json.dumps(doc, sort_keys=True))
    return "\n".join(lines)


def test_c10_determinism(capsys, tmp_path):
    names = sorted(p.stem for p in FIXTURES.glob("*.json") if p.stem != "expected")
    diffs = []
    runs = 0
    for name in names:
        f = FIXTURES / f"{name}.json"
        cmds = [
            ["kernel", f, "--theta", "0.3"],
            ["kernel", f, "--theta", "pi/5", "--set", "double"],
            ["intervals", f],
            ["optimize", f],
            ["optimize", f, "--objective", "perimeter", "--sense", "min"],
            ["oracle", "scan", f, "--samples", "500", "--set", "double"],
            ["oracle", "clip", f, "--theta", "0.7"],
        ]
        for cmd in cmds:
            a, b = _cli(cmd), _cli(cmd)
            runs += 1
            if a != b:
                diffs.append(" ".join(map(str, cmd)))
        for show in ("kernel", "intervals"):
            outs = []
            for k in range(2):
                dest = tmp_path / f"{name}-{show}-{k}.svg"
                _cli(["render", f, "--theta", "0.4", "--set", "double", "--show", show, "--out", dest])
                outs.append(dest.read_bytes() if dest.exists() else b"")
            runs += 1
            if outs[0] != outs[1]:
                diffs.append(f"render {name} {show}")
    gen = [_cli(["oracle", "generate", "--kind", "family_Q", "--n", "40", "--seed", "4"]) for _ in range(2)]
    runs += 1
    if gen[0] != gen[1]:
        diffs.append("oracle generate")
    ok = not diffs
    verdict(capsys, 10, ok, f"{runs} commands run twice on {len(names)} fixtures: {len(diffs)} differing payloads {diffs[:3]}")
