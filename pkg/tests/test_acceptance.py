"""Acceptance suite: one test per shipping criterion, with pinned tolerances.

Each test records a single PASS/FAIL line (printed by the conftest summary
hook) and enforces its own runtime budget.  Tolerances are part of the
contract and must not be loosened here; if a criterion cannot be met the
test stays failing.
"""
import contextlib
import math
import time
import types

import numpy as np

import radialma as rm
from conftest import record_acceptance

TWO_PI = 2.0 * math.pi


@contextlib.contextmanager
def criterion(num, budget):
    """Time the body, record one summary line, enforce the runtime budget."""
    box = types.SimpleNamespace(detail="")
    t0 = time.monotonic()
    try:
        yield box
    except BaseException:
        record_acceptance(num, False, f"failed after {time.monotonic() - t0:.2f}s")
        raise
    elapsed = time.monotonic() - t0
    ok = elapsed < budget
    record_acceptance(num, ok, f"{box.detail} [{elapsed:.2f}s, budget {budget:.0f}s]")
    assert ok, f"runtime {elapsed:.2f}s exceeds the {budget}s budget"


def profile_battery(rng):
    # criterion 3 battery, reused by criterion 4
    return [
        rm.log_profile(),
        rm.max_const_profile(-1.0),
        rm.power_tail_profile(0.25),
        rm.power_tail_profile(0.5),
        rm.power_tail_profile(0.75),
        rm.random_profile(rng, 0.0),
    ]


def test_criterion_1_capacity_table():
    with criterion(1, budget=10.0) as c:
        for j in range(1, 1025):
            cap = rm.capacity(rm.closed_ball(float(-j)), 0.0, 1)
            want = TWO_PI / j
            assert abs(cap - want) <= 1e-12 * want, (j, cap)
        # each oracle solve costs ~0.1 s, so the 10 s budget forces the
        # relaxation path onto the dyadic subset of 1..1024
        h = 1e-3
        geo = rm.geometric_schedule(1024)
        for j in geo:
            ora = rm.oracle_capacity(rm.closed_ball(float(-j)), 0.0, 1, h=h)
            want = TWO_PI / j
            assert abs(ora - want) <= 10 * h * want, (j, ora)
        scaled = rm.build_series(
            "j_times_capacity",
            [(j, j * rm.capacity(rm.closed_ball(float(-j)), 0.0, 1)) for j in geo],
        )
        assert scaled.flag == rm.CONVERGING_TO_POSITIVE, scaled.flag
        c.detail = (
            "C1(ball_j)=2pi/j for j=1..1024 rel<=1e-12; oracle (h=1e-3) "
            "within 10h on dyadic j; j*C1 flags converging-to-positive"
        )


def test_criterion_2_counterexample_masses():
    with criterion(2, budget=5.0) as c:
        K = rm.closed_ball(0.0)
        for n in (1, 2, 3):
            seq = rm.counterexample_sequence(1.0)
            for k in rm.geometric_schedule(1024):
                assert rm.ma_measure(seq.member(k), n).mass_on(K) == 0.0, (n, k)
            assert rm.nonpolar_part(seq.limit, n).mass_on(K) == TWO_PI**n, n
            rep = rm.setwise_gap(seq, K, n)
            assert rep.verdict == "persistent-gap", rep.verdict
        h = 1e-3
        grid = rm.Grid1D.from_bounds(-3.0, 0.5, h)
        fd = rm.fd_riesz_measure(rm.counterexample_sequence(1.0).limit, grid)
        fd_mass = fd.mass_on(rm.make_compact([(grid.left, 0.25)]))
        assert abs(fd_mass - TWO_PI) <= 10 * h * TWO_PI, fd_mass
        c.detail = (
            "mass_on(K)=0 exactly for every j at n=1,2,3; NP target=(2pi)^n; "
            "n=1 fd cross-check within 10h; persistent-gap verdict"
        )


def test_criterion_3_truncation_equivalence():
    with criterion(3, budget=30.0) as c:
        profiles = profile_battery(np.random.default_rng(2026))
        compacts = [rm.closed_ball(-2.0), rm.annulus(-3.0, -1.5), rm.sphere(-2.0)]
        for p in profiles:
            for K in compacts:
                rep = rm.truncation_analysis(p, K, 2)
                assert rep.verdict == "flags-agree", (K.intervals, rep.flags)
                assert rep.details["exact_decomposition"] is True
                assert rep.details["level_zero_forces_total"] is True
        c.detail = (
            "6 profiles x 3 compacts at n=2: level/total flags agree, "
            "decomposition total=interior+level with zero error"
        )


def test_criterion_4_weak_convergence_implication():
    with criterion(4, budget=60.0) as c:
        phis = rm.default_battery(0.0)
        assert len(phis) == 16, len(phis)
        for p in profile_battery(np.random.default_rng(2026)):
            hyp = rm.condition_sublevel(p, 2)
            rep = rm.weak_convergence_test(rm.truncation_sequence(p), phis, 2)
            assert rep.details["implication_respected"], rep.flags
            if hyp.flag != rm.CONVERGING_TO_ZERO:
                continue
            for ser in rep.conclusion_series:
                tgt = ser.metadata["target"]
                if not math.isfinite(tgt):
                    continue
                final = ser.values[-1]
                assert abs(final - tgt) <= 1e-9 * (1.0 + abs(tgt)), (
                    ser.label,
                    final,
                    tgt,
                )
        log_rep = rm.weak_convergence_test(
            rm.truncation_sequence(rm.log_profile()), phis, 1
        )
        assert log_rep.hypothesis_series.flag == rm.CONVERGING_TO_POSITIVE
        assert all(
            s.flag == rm.CONVERGING_TO_ZERO for s in log_rep.conclusion_series
        )
        c.detail = (
            "zero-flag profiles reach the NP target within 1e-9 rel on all 16 "
            "test functions; log gives positive hypothesis, converging "
            "conclusions, no converse claim"
        )


def test_criterion_5_liminf_lower_bound():
    with criterion(5, budget=60.0) as c:
        phis = rm.default_battery(0.0)
        rng = np.random.default_rng(99)
        for trial in range(100):
            seq = rm.random_decreasing_sequence(rng, 0.0)
            n = trial % 3 + 1
            npm = rm.nonpolar_part(seq.limit, n)
            for phi in phis:
                target = npm.integrate(phi)
                tol = 1e-9 * (1.0 + target)
                for k in (8, 16, 32, 64, 128):
                    got = rm.ma_measure(seq.member(k), n).integrate(phi)
                    assert target - got <= tol, (trial, k, phi.label)
        c.detail = (
            "100 random decreasing sequences x 16 nonnegative test functions: "
            "no tail integral below the NP target by more than 1e-9*(1+target)"
        )


def test_criterion_6_oracle_equivalence():
    with criterion(6, budget=60.0) as c:
        rng = np.random.default_rng(777)
        # lattice-aligned profiles make the midpoint distribution comparison
        # exact up to roundoff
        lat = 1.0 / 16
        grid = rm.Grid1D.from_bounds(-16.0, -lat, lat)
        mids = (grid.nodes[:-1] + grid.nodes[1:]) / 2.0
        worst = 0.0
        for _ in range(100):
            p = rm.random_profile(rng, 0.0, bounded=True, lattice=lat, allow_clamp=False)
            exact = rm.distribution_function(rm.ma_measure(p, 1), mids)
            fd = rm.distribution_function(rm.fd_riesz_measure(p, grid), mids)
            worst = max(worst, float(np.max(np.abs(exact - fd))))
        assert worst <= 1e-9, worst

        def pt_err(alpha, h):
            g = rm.Grid1D.from_bounds(-6.0, -0.25, h)
            prof = rm.sample_analytic(rm.PowerTail(alpha), g.nodes)
            fd = rm.fd_riesz_measure(prof, g)
            ts = np.linspace(-4.0, -0.5, 141)
            F = rm.distribution_function(fd, ts)
            analytic = TWO_PI * alpha * (-ts) ** (alpha - 1.0)
            base = TWO_PI * alpha * 4.0 ** (alpha - 1.0)
            F0 = rm.distribution_function(fd, np.array([-4.0]))[0]
            return float(np.max(np.abs((F - F0) - (analytic - base))))

        hs = (1e-2, 5e-3, 2.5e-3)
        for alpha in (0.25, 0.5, 0.75):
            errs = [pt_err(alpha, h) for h in hs]
            for h, e in zip(hs, errs):
                assert e <= 10 * h, (alpha, h, e)
            # halving h should roughly halve the error; 1.4 leaves slack
            assert errs[0] / errs[1] >= 1.4, (alpha, errs)
            assert errs[1] / errs[2] >= 1.4, (alpha, errs)
        c.detail = (
            f"100 piecewise-linear profiles: exact vs fd distribution sup "
            f"error {worst:.1e} <= 1e-9; sampled PowerTail within 10h with "
            f"first-order decay over h=1e-2,5e-3,2.5e-3"
        )


def test_criterion_7_envelope_extremality():
    with criterion(7, budget=60.0) as c:
        rng = np.random.default_rng(1234)
        h = 2e-3
        for trial in range(50):
            K = rm.random_compact(rng, 0.0)
            ext = rm.extremal_profile(K, 0.0)
            b_max = max(b for _, b in K.intervals)
            finite_as = [a for a, _ in K.intervals if a > float("-inf")]
            left = min(finite_as) if finite_as else b_max - 2.0
            ts = np.linspace(left - 3.0, -1e-9, 257)
            comps = []
            for _ in range(100):
                # extremals of supersets are admissible and lie below
                if rng.random() < 0.5:
                    pad = float(rng.uniform(0.0, 0.5))
                    comps.append(
                        rm.extremal_profile(
                            rm.closed_ball(min(b_max + pad, -1e-3)), 0.0
                        )
                    )
                else:
                    pad = float(rng.uniform(0.0, 0.3))
                    iv = [
                        (a - pad if a > float("-inf") else a, min(b + pad, -1e-3))
                        for a, b in K.intervals
                    ]
                    comps.append(rm.extremal_profile(rm.make_compact(iv), 0.0))
            for _ in range(100):
                # clipped lines: max(-1, s*t + const), forced <= -1 on K
                sl = float(rng.uniform(0.0, 2.0))
                const = min(-1.0 - sl * b_max, 0.0) - float(rng.uniform(0.0, 1.0))
                comps.append(rm.constant_profile(-1.0, 0.0).max_with_affine(sl, const))
            for comp in comps:
                pts = (
                    list(ts)
                    + [t for t, _ in comp.breakpoints]
                    + [t for t, _ in ext.breakpoints]
                )
                for t in pts:
                    assert comp.value(float(t)) - ext.value(float(t)) <= 1e-12, trial
            cap = rm.capacity(K, 0.0, 1)
            ora = rm.oracle_capacity(K, 0.0, 1, h=h)
            assert abs(ora - cap) <= 10 * h * cap, (trial, ora, cap)
        c.detail = (
            "50 random compacts: extremal dominates 200 admissible competitors "
            "pointwise (tol 1e-12); capacity matches the relaxation oracle "
            "within 10h at h=2e-3"
        )
