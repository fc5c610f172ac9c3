import json
import math
from pathlib import Path

import numpy as np
import pytest

from rotokernel.geom_core import SimplePolygon, point_in_polygon

FIXTURES = Path(__file__).parent / "fixtures"


def load(name: str) -> SimplePolygon:
    doc = json.loads((FIXTURES / f"{name}.json").read_text())
    return SimplePolygon(doc["vertices"], orient="auto")


def expected() -> dict:
    return json.loads((FIXTURES / "expected.json").read_text())


def sample_inside(xy, rng, k=1, margin=0.0):
    """k uniform points of the polygon ``xy`` at least ``margin`` from its boundary."""
    xy = np.asarray(xy, dtype=float)
    lo, hi = xy.min(axis=0), xy.max(axis=0)
    a, b = xy, np.roll(xy, -1, axis=0)
    e = b - a
    L2 = np.maximum((e * e).sum(axis=1), 1e-300)
    out = []
    for _ in range(20000):
        if len(out) == k:
            break
        p = rng.uniform(lo, hi)
        if not point_in_polygon(xy, p):
            continue
        t = np.clip(((p - a) * e).sum(axis=1) / L2, 0, 1)
        if np.hypot(*(p - a - t[:, None] * e).T).min() >= margin:
            out.append(p)
    return out


@pytest.fixture
def square():
    return load("square")


@pytest.fixture
def nt():
    return load("nt")


@pytest.fixture
def dn():
    return load("dn")


@pytest.fixture
def lp():
    return load("lp")


@pytest.fixture
def plus():
    return load("plus")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


HALF_PI = 0.5 * math.pi
