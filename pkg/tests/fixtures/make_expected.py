"""Regenerate expected.json from the oracle module alone.

Run once before touching the main modules; the values are then frozen
and the tests compare against them.
"""
import json
import math
from pathlib import Path

import numpy as np

from rotokernel.geom_core import SimplePolygon
from rotokernel.oracle import dense_scan, kernel_full_clip

HERE = Path(__file__).parent


def load(name):
    return SimplePolygon(json.loads((HERE / f"{name}.json").read_text())["vertices"], orient="auto")


def runs(scan):
    """Maximal runs of nonempty samples as [first theta, last theta]."""
    out = []
    ne = ~scan.empty
    k = 0
    while k < len(ne):
        if ne[k]:
            j = k
            while j + 1 < len(ne) and ne[j + 1]:
                j += 1
            out.append([float(scan.thetas[k]), float(scan.thetas[j])])
            k = j + 1
        else:
            k += 1
    return out


def main():
    exp = {}
    for name in ("square", "nt", "dn", "lp", "plus"):
        P = load(name)
        single = dense_scan(P, (-0.5 * math.pi, 0.5 * math.pi), 2000, "single")
        entry = {"single_runs_2000": runs(single)}
        entry["single_area_theta0"] = kernel_full_clip(P, 0.0, "single").area
        d = np.abs(P.xy[:, None, :] - P.xy[None, :, :]).max()
        if d > 0 and name != "nt":
            dbl = dense_scan(P, (0.0, 0.5 * math.pi), 10_000, "double")
            t, a = dbl.best("area", "max")
            tp, p = dbl.best("perimeter", "max")
            entry["double_best_area_10000"] = [t, a]
            entry["double_best_perimeter_10000"] = [tp, p]
            entry["double_area_pi_4"] = kernel_full_clip(P, 0.25 * math.pi, "double").area
        exp[name] = entry
    (HERE / "expected.json").write_text(json.dumps(exp, indent=1, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
