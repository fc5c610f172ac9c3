"""Time the numba kernels against the pure-numpy fallback.

Kernel level: compiled dispatch vs the ``_np`` twin in one process.
End to end: the same workload in two subprocesses, ROTOKERNEL_NUMBA=1 and 0.

    python benchmarks/bench_kernels.py [--repeat 3] [--n 200] [--angles 200]

The numpy clipper loops over angles in python, so it is the slow one;
keep --n * --angles modest when the fallback is included.
"""
import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np

from rotokernel import _accel, _kernels
from rotokernel.geom_core import EPS_LEN
from rotokernel.oracle import _DoubleRows, edge_directions, generate

WORKLOAD = r"""
import json, math, time
from rotokernel._accel import backend_name
from rotokernel.oracle import generate, dense_scan
from rotokernel.ortho import optimize
from rotokernel.rotation_intervals import nonempty_intervals
P = generate("random_simple", 40, seed=1)
Q = generate("family_Q", {n}, seed=1)
S = generate("staircase", 2000, seed=1)
dense_scan(Q, (0.0, 0.5 * math.pi), 16, "double"); optimize(generate("family_Q", 24, seed=0))
out = {{"backend": backend_name()}}
for name, fn in [
    ("nonempty_intervals n=40", lambda: nonempty_intervals(P)),
    ("dense_scan double 500", lambda: dense_scan(Q, (0.0, 0.5 * math.pi), 500, "double")),
    ("optimize staircase 2000", lambda: optimize(S)),
]:
    best = math.inf
    for _ in range({repeat}):
        t0 = time.perf_counter(); fn(); best = min(best, time.perf_counter() - t0)
    out[name] = best
print(json.dumps(out))
"""


def kernel_level(n: int, repeat: int, angles: int):
    P = generate("family_Q", n, seed=3)
    xy = np.ascontiguousarray(P.xy)
    reflex = P.reflex_mask
    th = np.linspace(0.01, 1.5, angles)
    c, s = np.cos(th), np.sin(th)
    rows = _DoubleRows(P).batch(th)
    ed = edge_directions(P)
    ld = np.stack([-rows[:, :, 1], rows[:, :, 0]], axis=-1)
    ld /= np.hypot(ld[..., 0], ld[..., 1])[..., None]
    dirs = np.ascontiguousarray(np.concatenate([np.broadcast_to(ed, (len(th),) + ed.shape), ld], axis=1))
    cases = [
        ("strip_levels", _kernels.strip_levels, _kernels._strip_levels_np, (xy, reflex, c, s, EPS_LEN)),
        ("clip_measures", _kernels.clip_measures, _kernels._clip_measures_np, (xy, rows, dirs, EPS_LEN * EPS_LEN)),
        ("ring_area", _kernels.ring_area, _kernels._ring_area_np, (xy,)),
    ]
    out = []
    for name, fast, slow, args in cases:
        fast(*args)  # compile
        tf = min(timeit.repeat(lambda: fast(*args), number=1, repeat=repeat))
        ts = min(timeit.repeat(lambda: slow(*args), number=1, repeat=repeat))
        out.append((name, tf, ts))
    return out


def end_to_end(n: int, repeat: int):
    code = WORKLOAD.format(n=n, repeat=repeat)
    res = {}
    for flag in ("1", "0"):
        env = dict(os.environ, ROTOKERNEL_NUMBA=flag)
        p = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        res[flag] = json.loads(p.stdout)
    return res


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--n", type=int, default=200, help="vertex count of the family-Q test polygon")
    ap.add_argument("--angles", type=int, default=200)
    args = ap.parse_args()

    print(f"backend in this process: {_accel.backend_name()}")
    if _accel.USE_NUMBA:
        print(f"\nkernel level, n={args.n}, {args.angles} angles (best of {args.repeat})", flush=True)
        print(f"{'kernel':<16}{'numba s':>12}{'numpy s':>12}{'speedup':>10}")
        for name, tf, ts in kernel_level(args.n, args.repeat, args.angles):
            print(f"{name:<16}{tf:>12.5f}{ts:>12.5f}{ts / tf:>9.1f}x")
    else:
        print("numba disabled here; skipping the kernel-level table")

    print(f"\nend to end (best of {args.repeat})", flush=True)
    res = end_to_end(args.n, args.repeat)
    a, b = res["1"], res["0"]
    print(f"{'workload':<28}{a['backend'] + ' s':>12}{b['backend'] + ' s':>12}{'ratio':>10}")
    for key in a:
        if key == "backend":
            continue
        print(f"{key:<28}{a[key]:>12.4f}{b[key]:>12.4f}{b[key] / a[key]:>9.1f}x")


if __name__ == "__main__":
    main()
