"""Profile calculus: construction, evaluation, truncation, level sets."""
import json
import math

import numpy as np
import pytest

from radialma import (
    ConvexityViolation,
    ConvexProfile,
    FiniteValue,
    MinusInfinity,
    MonotonicityViolation,
    OutOfDomain,
    UnorderedBreakpoints,
    annulus,
    closed_ball,
    constant_profile,
    linear_cap_profile,
    log_profile,
    make_compact,
    make_profile,
    max_const_profile,
    power_tail_profile,
    random_profile,
    sphere,
)

NEG_INF = float("-inf")


def test_log_profile_is_the_identity():
    p = make_profile([(0.0, 0.0)], MinusInfinity(1.0), log_R=1.0)
    assert p.value(-3.0) == -3.0
    assert p.value(0.5) == 0.5
    assert p.value(NEG_INF) == NEG_INF


def test_max_const_profile_evaluation():
    # u = max(log||z||, 0) on the ball of radius e
    p = max_const_profile(0.0, 1.0)
    assert p.value(-5.0) == 0.0
    assert p.value(NEG_INF) == 0.0
    assert p.value(0.5) == 0.5
    assert p.right_slope(-0.5) == 0.0
    assert p.right_slope(0.0) == 1.0


def test_constructor_rejects_bad_input():
    with pytest.raises(UnorderedBreakpoints):
        make_profile([(-1.0, 0.0), (-2.0, 1.0)], FiniteValue(0.0))
    with pytest.raises(MonotonicityViolation):
        make_profile([(-2.0, 0.0), (-1.0, -1.0)], FiniteValue(0.0))
    with pytest.raises(ConvexityViolation):
        make_profile(
            [(-3.0, -3.0), (-2.0, -1.0), (-1.0, -0.9)], FiniteValue(-3.0)
        )
    # asymptotic slope must stay below the first chord slope
    with pytest.raises(ConvexityViolation):
        make_profile([(-1.0, -1.0)], MinusInfinity(2.0), final_slope=1.0)
    with pytest.raises(ValueError):
        make_profile([(1.0, 1.0)], MinusInfinity(1.0), log_R=0.0)


def test_breakpoints_must_lie_below_boundary():
    with pytest.raises(OutOfDomain):
        log_profile().value(0.0)
    with pytest.raises(OutOfDomain):
        log_profile().right_slope(1.0)


def test_truncate_log():
    p = log_profile()
    q = p.truncate(2.0)
    assert q.left_end == FiniteValue(-2.0)
    assert q.value(-5.0) == -2.0
    assert q.value(-1.0) == -1.0
    assert q.right_slope(-3.0) == 0.0
    assert q.right_slope(-1.5) == 1.0


def test_truncate_below_minimum_is_identity():
    p = max_const_profile(0.0, 1.0)
    assert p.truncate(5.0) == p


def test_truncate_power_tail_crossing():
    # -sqrt(-t) = -3 at t = -9; the sampled profile crosses within one
    # rung of its value ladder
    p = power_tail_profile(0.5)
    q = p.truncate(3.0)
    assert q.left_end == FiniteValue(-3.0)
    edge = q.sublevel(-3.0 + 1e-12).intervals[0][1]
    assert abs(edge - (-9.0)) < 0.2
    assert abs(p.value(-9.0) - (-3.0)) < 0.02


@pytest.mark.parametrize("seed", range(25))
def test_truncation_lattice(seed):
    """truncate(truncate(p, j), k) == truncate(p, k) exactly for j >= k."""
    rng = np.random.default_rng(seed)
    p = random_profile(rng, 0.0)
    for j, k in [(8.0, 1.0), (4.0, 4.0), (1024.0, 2.0), (2.0, 0.5)]:
        assert p.truncate(j).truncate(k) == p.truncate(k)


@pytest.mark.parametrize("seed", range(25))
def test_truncate_matches_pointwise_max(seed):
    rng = np.random.default_rng(1000 + seed)
    p = random_profile(rng, 0.0)
    ts = rng.uniform(-20.0, -1e-6, size=200)
    for j in (0.5, 1.0, 3.0, 17.0):
        q = p.truncate(j)
        for t in ts:
            assert q.value(float(t)) == max(p.value(float(t)), -j)
        assert q.value(NEG_INF) == max(p.value(NEG_INF), -j)


@pytest.mark.parametrize("seed", range(10))
def test_right_slope_nondecreasing(seed):
    rng = np.random.default_rng(2000 + seed)
    p = random_profile(rng, 0.0)
    slopes = [p.right_slope(NEG_INF)]
    slopes += [p.right_slope(t) for t, _ in p.breakpoints]
    assert slopes[0] >= 0.0
    assert all(a <= b for a, b in zip(slopes, slopes[1:]))


def test_sublevel_sets():
    assert log_profile().sublevel(-3.0) == closed_ball(-3.0)
    assert max_const_profile(0.0, 1.0).sublevel(-1.0).is_empty
    # -sqrt(-t) <= -2 exactly when t <= -4; the ladder has a node there
    assert power_tail_profile(0.5).sublevel(-2.0) == closed_ball(-4.0)


@pytest.mark.parametrize("seed", range(10))
def test_sublevel_nesting(seed):
    rng = np.random.default_rng(3000 + seed)
    p = random_profile(rng, 0.0)
    levels = sorted(rng.uniform(-8.0, -0.1, size=5))
    for s1, s2 in zip(levels, levels[1:]):
        assert p.sublevel(s1).subset_of(p.sublevel(s2))


def test_level_sets():
    assert log_profile().level_set(-2.0) == sphere(-2.0)
    assert log_profile().truncate(2.0).level_set(-2.0) == closed_ball(-2.0)
    assert max_const_profile(0.0, 1.0).level_set(-1.0).is_empty
    # flat piece: the level set is the whole flat
    p = linear_cap_profile(1.0, -2.0)
    assert p.level_set(-2.0) == closed_ball(-2.0)


@pytest.mark.parametrize("seed", range(10))
def test_level_set_consistent_with_sublevels(seed):
    """{u = s} = {u <= s} minus {u < s}, via interval endpoints."""
    rng = np.random.default_rng(4000 + seed)
    p = random_profile(rng, 0.0)
    for s in rng.uniform(-8.0, -0.1, size=6):
        lev = p.level_set(float(s))
        sub = p.sublevel(float(s))
        if lev.is_empty:
            continue
        assert lev.subset_of(sub)
        # the level set's outer edge is the sublevel's outer edge
        assert lev.intervals[-1][1] == sub.intervals[-1][1]


def test_shift_keeps_measure_data():
    rng = np.random.default_rng(5)
    p = random_profile(rng, 0.0)
    q = p.shift(0.25)  # dyadic shift: knot sums stay exact
    assert [t for t, _ in q.breakpoints] == [t for t, _ in p.breakpoints]
    assert q.final_slope == p.final_slope
    assert q.value(-1.5) == p.value(-1.5) + 0.25


def test_boundary_limit():
    assert log_profile().boundary_limit == 0.0
    assert constant_profile(-2.0).boundary_limit == -2.0


@pytest.mark.parametrize("seed", range(30))
def test_profile_json_round_trip_is_bit_exact(seed):
    rng = np.random.default_rng(6000 + seed)
    p = random_profile(rng, 0.0)
    q = ConvexProfile.from_json(p.to_json())
    assert q == p
    # and once more through plain json to pin the wire format
    d = json.loads(p.to_json())
    assert ConvexProfile.from_json_dict(d) == p


def test_compact_algebra():
    A = annulus(-3.0, -1.0)
    B = closed_ball(-2.0)
    assert A.intersect(B) == annulus(-3.0, -2.0)
    assert A.union(B) == closed_ball(-1.0)
    assert sphere(-2.0).subset_of(A)
    assert not A.subset_of(B)
    assert make_compact([]).is_empty
    assert B.contains_origin and not A.contains_origin
    assert A.contains(-1.0) and not A.contains(-0.5)


def test_compact_json_round_trip():
    K = make_compact([(NEG_INF, -4.0), (-3.0, -2.5), (-1.0, -1.0)])
    assert K.from_json_dict(K.to_json_dict()) == K


def test_degenerate_constant_profile():
    p = constant_profile(-2.0)
    assert p.value(-50.0) == -2.0
    assert p.final_slope == 0.0
    assert math.isinf(p.sublevel(-2.0).intervals[0][1]) is False
    # sublevel at the constant's own level reaches the boundary
    assert p.sublevel(-2.0).sup == p.log_R
    assert p.sublevel(-2.1).is_empty
