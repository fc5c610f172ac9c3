import math

import numpy as np
import pytest

from rotokernel.geom_core import SimplePolygon
from rotokernel.oracle import generate
from rotokernel.rotation_intervals import (
    CANDIDATE_MAX,
    CANDIDATE_MIN,
    DualSegment,
    classify,
    dualize,
    envelope,
    event_intervals,
    nonempty_intervals,
    reflex_intervals,
)
from rotokernel.steady_kernel import strip

from conftest import HALF_PI, expected

HEXAGON = SimplePolygon([(2, 0), (4, 1), (4, 3), (2, 4), (0, 3), (0, 1)])
# reflex vertex (0, 0) with neighbours (1, 1) and (-1, 1)
VEE = SimplePolygon([(-2, -2), (2, -2), (1, 1), (0, 0), (-1, 1)])


def test_reflex_intervals_nt(nt):
    ivs = reflex_intervals(nt)
    assert [(iv.vertex_index, iv.role) for iv in ivs] == [(1, CANDIDATE_MAX)]
    lo, hi = ivs[0].theta
    assert lo == pytest.approx(-math.atan(0.5)) and hi == pytest.approx(math.atan(0.5))
    assert ivs[0].slope_intervals[0] == pytest.approx((-0.5, 0.5))
    assert reflex_intervals(HEXAGON) == []


def test_reflex_intervals_vee():
    ivs = {iv.role: iv for iv in reflex_intervals(VEE) if iv.vertex_index == 3}
    mn = ivs[CANDIDATE_MIN]
    assert mn.theta[0] < 0 < mn.theta[1] and not mn.straddles_vertical
    assert CANDIDATE_MAX not in ivs or not (ivs[CANDIDATE_MAX].theta[0] < 0 < ivs[CANDIDATE_MAX].theta[1])


def test_dual_segment_of_nt_vertex(nt):
    segs = [s for s in dualize(nt) if s.role == CANDIDATE_MAX and s.chart == "A"]
    assert len(segs) == 1
    s = segs[0]
    assert (s.owner, s.slope, s.intercept) == (1, 2.0, -1.0)
    assert (s.x0, s.x1) == pytest.approx((-0.5, 0.5))
    assert s.y(s.x0) == pytest.approx(-2.0) and s.y(s.x1) == pytest.approx(0.0)


def test_dual_map_orientation_pinned():
    # q above p in the horizontal frame -> D(q) below D(p) everywhere
    p, q = (0.0, 0.0), (0.0, 1.0)
    Dp = DualSegment(0, CANDIDATE_MAX, "A", -1, 1, p[0], -p[1])
    Dq = DualSegment(1, CANDIDATE_MAX, "A", -1, 1, q[0], -q[1])
    for x in np.linspace(-1, 1, 11):
        assert Dq.y(x) == -1.0 and Dp.y(x) == 0.0


def _segs(specs):
    return [DualSegment(k, CANDIDATE_MAX, "A", a, b, m, c) for k, (a, b, m, c) in enumerate(specs)]


def test_envelope_examples():
    S = _segs([(-1, 1, 0.0, 0.0), (-1, 1, 1.0, 0.0)])
    up = envelope(S, "upper")
    assert [(p.x0, p.x1, p.segment) for p in up.pieces] == [(-1, 0, 0), (0, 1, 1)]
    lo = envelope(S, "lower")
    assert [(p.x0, p.x1, p.segment) for p in lo.pieces] == [(-1, 0, 1), (0, 1, 0)]


def test_envelope_matches_brute_force(rng):
    for trial in range(5):
        specs = []
        for _ in range(64):
            a, b = np.sort(rng.uniform(-1, 1, 2))
            specs.append((a, b, rng.normal(), rng.normal()))
        S = _segs(specs)
        xs = np.linspace(-1, 1, 10_000)
        for side, fn in (("upper", np.max), ("lower", np.min)):
            E = envelope(S, side)
            for x in xs[::7]:
                vals = [s.y(x) for s in S if s.x0 <= x <= s.x1]
                got = E.value(x)
                if not vals:
                    assert got is None
                else:
                    assert got == pytest.approx(fn(vals), abs=1e-9)
            # owners come from the input; consecutive pieces meet
            for p, q in zip(E.pieces, E.pieces[1:]):
                assert 0 <= p.segment < len(S)
                if p.x1 == q.x0:
                    assert p.y(p.x1) == pytest.approx(q.y(q.x0), abs=1e-9) or not (S[q.segment].x0 < q.x0 and S[p.segment].x1 > p.x1)


def test_event_intervals_convex_all_fallback():
    evs = event_intervals(HEXAGON)
    assert evs[0].theta_range[0] == -HALF_PI and evs[-1].theta_range[1] == HALF_PI
    assert all(e.min_is_fallback and e.max_is_fallback for e in evs)
    for a, b in zip(evs, evs[1:]):
        assert a.theta_range[1] == pytest.approx(b.theta_range[0], abs=1e-12)


def test_event_intervals_nt(nt):
    w = math.atan(0.5)
    for e in event_intervals(nt):
        m = e.midpoint
        assert e.min_is_fallback
        if -w < m < w:
            assert (e.support_max, e.max_is_fallback) == (1, False)
        else:
            assert e.max_is_fallback


def test_event_intervals_dn(dn):
    # the flat dent edges switch endpoint at theta = 0, so 0 is an event
    evs = event_intervals(dn)
    near = [e for e in evs if 0.0 in e.theta_range]
    assert len(near) == 2
    for e in near:
        assert dn.xy[e.support_min][1] == 1 and dn.xy[e.support_max][1] == 2
        assert not (e.min_is_fallback or e.max_is_fallback)


def test_supports_validated_at_midpoints():
    for s in range(40):
        P = generate("random_simple", 6 + s % 30, seed=s)
        for e in event_intervals(P, with_chains=False):
            st = strip(P, e.midpoint)
            h = -P.xy[:, 0] * math.sin(e.midpoint) + P.xy[:, 1] * math.cos(e.midpoint)
            assert h[e.support_max] == pytest.approx(st.south_level, abs=1e-9)
            assert h[e.support_min] == pytest.approx(st.north_level, abs=1e-9)


def test_chain_endpoints_recorded(nt):
    evs = event_intervals(nt)
    assert all(isinstance(e.chain_endpoints, dict) for e in evs)
    assert any(e.chain_endpoints for e in evs)


def test_nonempty_examples(nt, dn):
    assert [(iv.lo, iv.hi) for iv in nonempty_intervals(HEXAGON)] == [(-HALF_PI, HALF_PI)]
    assert [(iv.lo, iv.hi) for iv in nonempty_intervals(nt)] == [(-HALF_PI, HALF_PI)]
    ivs = nonempty_intervals(dn)
    assert not classify(ivs, 0.0)
    # frozen dense-scan runs
    step = math.pi / 2000
    for a, b in expected()["dn"]["single_runs_2000"]:
        assert classify(ivs, a) and classify(ivs, b)
        match = [iv for iv in ivs if iv.lo - 2 * step <= a and b <= iv.hi + 2 * step]
        assert match


def test_isolated_vertical_orientation(dn):
    ivs = nonempty_intervals(dn)
    first = ivs[0]
    assert first.lo == first.hi == -HALF_PI and first.closed_lo and first.degenerate_lo
    assert not classify(ivs, -HALF_PI + 1e-6)


def test_chart_split_consistency():
    for s in range(30):
        P = generate("random_simple", 8 + s, seed=50 + s)
        a = nonempty_intervals(P, chart_split=0.25 * math.pi)
        b = nonempty_intervals(P, chart_split=math.pi / 6)
        assert len(a) == len(b)
        for x, y in zip(a, b):
            assert x.lo == pytest.approx(y.lo, abs=1e-9) and x.hi == pytest.approx(y.hi, abs=1e-9)


def test_intervals_sorted_disjoint_and_bounded():
    for s in range(40):
        P = generate("random_simple", 6 + s, seed=900 + s)
        ivs = nonempty_intervals(P)
        assert len(ivs) <= 8 * P.n
        for iv in ivs:
            assert -HALF_PI <= iv.lo <= iv.hi <= HALF_PI
        for x, y in zip(ivs, ivs[1:]):
            assert x.hi <= y.lo
