"""The numba kernels and the numpy fallback must agree."""
import json
import os
import subprocess
import sys

import numpy as np
import pytest

from rotokernel import _accel, _kernels
from rotokernel.oracle import generate

PROBE = r"""
import json, math
import numpy as np
from rotokernel._accel import backend_name
from rotokernel.oracle import generate, dense_scan
from rotokernel.steady_kernel import kernel_area_perimeter
from rotokernel.ortho import optimize
out = {"backend": backend_name(), "single": [], "double": [], "opt": []}
for s in range(8):
    P = generate("random_simple", 12 + 3 * s, seed=s)
    for t in np.linspace(-1.5, 1.5, 7):
        out["single"].append(list(kernel_area_perimeter(P, float(t))))
    Q = generate("family_Q", 20 + 2 * s, seed=s)
    sc = dense_scan(Q, (0.0, 0.5 * math.pi), 64, "double")
    out["double"].append(sc.area.tolist() + sc.perimeter.tolist())
    r = optimize(Q)
    out["opt"].append([r.theta_star, r.value])
print(json.dumps(out))
"""


def _probe(flag):
    env = dict(os.environ, ROTOKERNEL_NUMBA=flag)
    p = subprocess.run([sys.executable, "-c", PROBE], env=env, capture_output=True, text=True, timeout=600)
    assert p.returncode == 0, p.stderr
    return json.loads(p.stdout)


@pytest.mark.skipif(not _accel.USE_NUMBA, reason="numba not importable")
def test_backends_agree_end_to_end():
    a, b = _probe("1"), _probe("0")
    assert (a["backend"], b["backend"]) == ("numba", "numpy")
    for key in ("single", "double", "opt"):
        np.testing.assert_allclose(np.array(a[key], dtype=float), np.array(b[key], dtype=float), rtol=1e-9, atol=1e-9)


def test_loop_and_vector_forms_agree(rng):
    # the dispatched form is compiled when numba is on; the _np form never is
    for s in range(20):
        P = generate("random_simple", 10 + s, seed=s)
        xy = P.xy
        a1 = _kernels.ring_area(xy)
        a2 = _kernels._ring_area_np(xy)
        assert a1 == pytest.approx(a2, rel=1e-12)
        reflex = np.zeros(len(xy), dtype=np.bool_)
        t = rng.uniform(-1.5, 1.5, 5)
        l1 = _kernels.strip_levels(xy, reflex, np.cos(t), np.sin(t), 1e-9)
        l2 = _kernels._strip_levels_np(xy, reflex, np.cos(t), np.sin(t), 1e-9)
        for u, v in zip(l1, l2):
            np.testing.assert_allclose(u, v, rtol=0, atol=1e-12)
