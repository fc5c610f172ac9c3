import math

import numpy as np
import pytest

from rotokernel.errors import NotOrthogonal, TiedExtremities
from rotokernel.oracle import calibrate_keep_sides, dense_scan, generate, kernel_full_clip
from rotokernel.ortho import (
    classify,
    constraint_set,
    is_in_family_Q,
    kernel_at_theta,
    lemma6_empty,
    optimize,
    prepare,
    supports_at,
)

from conftest import HALF_PI, expected


def test_classification_plus(plus):
    c = classify(plus)
    assert sorted(c.reflex_kinds.values()) == ["NE", "NW", "SE", "SW"]
    assert {k: len(v) for k, v in c.extremities.items()} == {"N": 1, "E": 1, "S": 1, "W": 1}
    assert all(not v for v in c.dents.values())


def test_classification_dn(dn):
    c = classify(dn)
    assert len(c.dents["N"]) == 1 and len(c.dents["S"]) == 1
    assert len(c.extremities["N"]) == 2 and len(c.extremities["S"]) == 2


def test_non_orthogonal_rejected(nt):
    with pytest.raises(NotOrthogonal):
        classify(nt)


def test_family_q_members(square, lp, plus):
    for P in (square, lp, plus):
        assert is_in_family_Q(P)
    for s in range(20):
        assert is_in_family_Q(generate("family_Q", 16 + 4 * s, seed=s))


def test_family_q_witness():
    seen = 0
    for s in range(200):
        P = generate("random_orthogonal", 16, seed=s)
        d = is_in_family_Q(P)
        if not d:
            assert 0 <= d.witness_edge < P.n and d.part and d.reason
            seen += 1
    assert seen > 0


def test_dominated_reflex_pair(square, plus, dn):
    assert lemma6_empty(square) is None and lemma6_empty(plus) is None
    kind, u, v = lemma6_empty(dn)
    assert kind == "NE/SW" and v[0] >= u[0] and v[1] >= u[1]
    for s in range(10):
        P = generate("with_lemma6_pair", 0, seed=s)
        assert lemma6_empty(P) is not None
        assert optimize(P).empty_for_all_theta


def test_kernel_examples(square, lp, plus):
    t = 0.25 * math.pi
    assert kernel_at_theta(square, 0.3).area == pytest.approx(1.0, abs=1e-12)
    assert kernel_at_theta(lp, t).area == pytest.approx(2.0, abs=1e-12)
    assert kernel_at_theta(plus, t).area == pytest.approx(2.0, abs=1e-12)
    assert kernel_at_theta(lp, 0.0).area == pytest.approx(3.0, abs=1e-12)
    with pytest.raises(ValueError):
        kernel_at_theta(square, HALF_PI)


def test_tied_extremities(dn):
    with pytest.raises(TiedExtremities):
        kernel_at_theta(dn, 0.3)
    r = optimize(dn)
    assert r.empty_for_all_theta and r.value == 0.0 and "share" in r.note


def test_kernel_matches_clip_oracle(rng):
    checked = 0
    for s in range(40):
        P = generate("family_Q", 12 + s, seed=s)
        for t in rng.uniform(0, HALF_PI, 5):
            try:
                k = kernel_at_theta(P, float(t))
            except TiedExtremities:
                continue
            o = kernel_full_clip(P, float(t), "double")
            assert k.area == pytest.approx(o.area, rel=1e-9, abs=1e-9)
            assert k.perimeter == pytest.approx(o.perimeter, rel=1e-9, abs=1e-9)
            if not k.is_empty:
                assert k.polygon.n <= 8
            checked += 1
    assert checked >= 150


def test_kernel_at_zero_matches_clip_oracle():
    for s in range(40):
        P = generate("random_orthogonal", 12 + s, seed=s)
        assert kernel_at_theta(P, 0.0).area == pytest.approx(kernel_full_clip(P, 0.0, "obs1").area, abs=1e-9)


@pytest.mark.parametrize("name", ["square", "lp", "plus"])
@pytest.mark.parametrize("objective", ["area", "perimeter"])
def test_optimize_fixtures(request, name, objective):
    P = request.getfixturevalue(name)
    t, v = expected()[name][f"double_best_{objective}_10000"]
    r = optimize(P, objective)
    assert r.value == pytest.approx(v, abs=1e-9)
    assert r.theta_star == pytest.approx(t, abs=1e-9)
    assert r.value_at_zero == pytest.approx(v, abs=1e-9)


def test_optimize_beats_scan():
    for s in range(6):
        P = generate("family_Q", 20 + 4 * s, seed=200 + s)
        for obj in ("area", "perimeter"):
            r = optimize(P, obj)
            sc = dense_scan(P, (0.0, HALF_PI), 2000, "double")
            _, best = sc.best(obj, "max")
            assert r.value >= best - 1e-9


def test_min_sense_reports_zero_plus(lp):
    r = optimize(lp, "area", "min")
    assert r.value <= r.value_at_zero
    assert r.value_at_zero_plus == pytest.approx(2.0, abs=1e-6)


def test_calibration_keep_sides(plus):
    polys = [plus] + [generate("family_Q", 20, seed=s) for s in range(2)]
    for P in polys:
        ctx = prepare(P)
        for t in (0.3, 0.25 * math.pi, 1.2):
            cons = constraint_set(ctx, supports_at(ctx.arcs, t))
            res = calibrate_keep_sides(P, [(c.cid, c.row(t)) for c in cons], t)
            assert all(r.verdict >= 0 for r in res), [(r.cid, r.verdict) for r in res]
            assert any(r.verdict == 1 for r in res) or P is not plus


def test_lp_kernel_membership(lp):
    from rotokernel.geom_core import point_in_polygon

    k = kernel_at_theta(lp, 0.25 * math.pi)
    assert point_in_polygon(k.polygon.xy, (1.5, 0.5))
    assert not point_in_polygon(k.polygon.xy, (0.5, 0.9))


def test_lp_antidiagonal_symmetry(lp):
    ts = HALF_PI * (1 + np.arange(511)) / 512
    for t in ts:
        a = kernel_at_theta(lp, float(t)).area
        b = kernel_at_theta(lp, float(HALF_PI - t)).area
        assert a == pytest.approx(b, abs=1e-9)
