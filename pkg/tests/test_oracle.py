import math

import numpy as np
import pytest

from rotokernel.errors import PointOutside
from rotokernel.geom_core import SimplePolygon, point_in_polygon, rotate_points
from rotokernel.oracle import (
    GENERATOR_KINDS,
    StaircaseRaster,
    dense_scan,
    generate,
    kernel_full_clip,
    staircase_visible,
)
from rotokernel.ortho import is_in_family_Q

from conftest import HALF_PI

U_SHAPE = SimplePolygon([(0, 0), (3, 0), (3, 2), (2, 2), (2, 1), (1, 1), (1, 2), (0, 2)])


@pytest.mark.parametrize("kind", GENERATOR_KINDS)
def test_generators_deterministic(kind):
    a = generate(kind, 24, seed=5)
    b = generate(kind, 24, seed=5)
    assert np.array_equal(a.xy, b.xy)


def test_seed_env_override(monkeypatch):
    monkeypatch.setenv("ROTOKERNEL_SEED", "11")
    a = generate("random_simple", 12, seed=1)
    b = generate("random_simple", 12, seed=2)
    assert np.array_equal(a.xy, b.xy)


def test_generator_kinds_shape():
    assert generate("random_simple", 30, seed=0).n == 30
    for s in range(5):
        assert is_in_family_Q(generate("staircase", 100, seed=s))
        d = generate("random_orthogonal", 20, seed=s).xy
        e = np.roll(d, -1, axis=0) - d
        assert np.all(np.min(np.abs(e), axis=1) == 0)
    with pytest.raises(ValueError):
        generate("spiral", 10, seed=0)


def test_dense_scan_grid(lp):
    sc = dense_scan(lp, samples=10_000)
    assert len(sc) == 10_000
    assert sc.thetas[0] == -HALF_PI and sc.thetas[-1] < HALF_PI
    assert np.allclose(np.diff(sc.thetas), math.pi / 10_000)
    assert np.all(sc.empty == (sc.area <= 0))
    with pytest.raises(ValueError):
        dense_scan(lp, samples=1)


def test_dense_scan_matches_per_angle_clip():
    for s in range(5):
        P = generate("family_Q", 20, seed=s)
        sc = dense_scan(P, (0.0, HALF_PI), 50, "double")
        for t, a in zip(sc.thetas, sc.area):
            mode = "obs1" if t == 0.0 else "double"
            assert a == pytest.approx(kernel_full_clip(P, float(t), mode).area, abs=1e-9)


def test_dense_scan_square_constant(square):
    sc = dense_scan(square, samples=400, mode="double")
    assert np.allclose(sc.area, 1.0)


def test_staircase_examples(lp):
    sq = SimplePolygon([(0, 0), (1, 0), (1, 1), (0, 1)])
    assert staircase_visible(sq, (0.2, 0.2), (0.8, 0.7))
    assert not staircase_visible(U_SHAPE, (0.5, 1.8), (2.5, 1.8))
    assert staircase_visible(U_SHAPE, (0.5, 0.2), (2.5, 1.8), mode="double")
    assert staircase_visible(lp, (1.5, 0.5), (0.5, 0.5), theta=0.25 * math.pi)


def test_grid_path_is_monotone_and_inside():
    ok, path = staircase_visible(U_SHAPE, (0.5, 0.2), (2.5, 1.8), mode="double", return_path=True)
    assert ok and len(path) >= 2
    c = path.cells
    step = np.abs(np.diff(c, axis=0))
    assert np.all(step <= path.h * (1 + 1e-9))
    assert np.all(np.diff(c[:, 0]) >= -1e-12) and np.all(np.diff(c[:, 1]) >= -1e-12)
    assert all(point_in_polygon(U_SHAPE.xy, p) for p in c)


def test_rotated_path_is_monotone_in_frame(lp):
    t = 0.25 * math.pi
    ok, path = staircase_visible(lp, (1.5, 0.5), (0.5, 0.5), theta=t, mode="double", return_path=True)
    assert ok
    r = rotate_points(path.cells, -t)
    for k in range(2):
        d = np.diff(r[:, k])
        assert np.all(d >= -1e-9) or np.all(d <= 1e-9)


def test_point_outside():
    with pytest.raises(PointOutside):
        staircase_visible(U_SHAPE, (1.5, 1.5), (0.5, 0.5))
    with pytest.raises(PointOutside):
        staircase_visible(U_SHAPE, (0.0, 0.5), (0.5, 0.5))
    with pytest.raises(ValueError):
        StaircaseRaster(U_SHAPE).visible((0.5, 0.5), (2.5, 0.5), mode="triple")
