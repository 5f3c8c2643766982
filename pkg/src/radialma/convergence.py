"""Convergence harnesses for truncated Monge-Ampere measures.

Each harness builds the relevant diagnostic series, decides flags, and
returns a uniform HarnessReport.  The harnesses check one-directional
statements only: a capacity condition with a zero flag is evidence for
convergence to the nonpolar part, but a positive flag never lets a
harness conclude divergence (the log profile is the standing
counterexample: its scaled sublevel capacities are constant (2*pi)^n
while the truncated measures still converge).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .capacity import condition_level, condition_sublevel
from .errors import NonMonotoneSequence
from .families import (
    max_const_profile,
    punctured_battery,
    random_profile,
    standard_exhaustion,
)
from .measures import (
    RadialMeasure,
    RadialTestFunction,
    ma_measure,
    nonpolar_part,
)
from .profiles import ConvexProfile, FiniteValue, RadialCompact, NEG_INF
from .series import (
    CONVERGING_TO_POSITIVE,
    CONVERGING_TO_ZERO,
    DiagnosticSeries,
    build_series,
    geometric_schedule,
)


@dataclass(frozen=True)
class ProfileSequence:
    """A profile sequence u_k with its pointwise limit.

    ``member_fn`` maps k >= 1 to the k-th profile.  Sequences fed to the
    harnesses are expected to decrease pointwise to the limit; the
    harnesses spot-check that and raise NonMonotoneSequence otherwise.
    """

    label: str
    limit: ConvexProfile
    member_fn: Callable[[int], ConvexProfile]

    def member(self, k: int) -> ConvexProfile:
        if k < 1:
            raise ValueError(f"sequence index must be >= 1, got {k}")
        return self.member_fn(k)


def truncation_sequence(limit: ConvexProfile, label: str = "") -> ProfileSequence:
    """The canonical decreasing sequence u_k = max(u, -k)."""
    return ProfileSequence(
        label or "truncation", limit, lambda k: limit.truncate(float(k))
    )


def counterexample_sequence(log_R: float = 1.0) -> ProfileSequence:
    """u_k = max(log ||z||, 1/k) decreasing to max(log ||z||, 0).

    Every u_k puts zero Monge-Ampere mass on the closed unit ball while
    the limit's nonpolar part gives it (2*pi)^n; the ball radius must
    exceed 1 for the sets to live inside the domain.
    """
    if not log_R > 0.0:
        raise ValueError("this sequence needs log_R > 0")
    return ProfileSequence(
        "max(log r, 1/k)",
        max_const_profile(0.0, log_R),
        lambda k: max_const_profile(1.0 / k, log_R),
    )


def shifted_sequence(
    limit: ConvexProfile, scale: float = 1.0, label: str = ""
) -> ProfileSequence:
    """u_k = u + c_k, c_k = scale/k snapped to the 2^-12 value lattice.

    Lattice shifts add exactly to lattice knot values, so equal-slope
    runs in the limit survive bit for bit in every member; c_k is
    nonincreasing and eventually 0, keeping the sequence decreasing.
    """

    def member(k: int) -> ConvexProfile:
        return limit.shift(round(scale * 4096.0 / k) / 4096.0)

    return ProfileSequence(label or "shifted", limit, member)


def clipped_sequence(
    limit: ConvexProfile,
    slope: float,
    intercept: float,
    drop: float = 1.0,
    label: str = "",
) -> ProfileSequence:
    """u_k = max(u, slope*t + intercept - drop*(k-1)), sinking lines."""
    return ProfileSequence(
        label or "clipped",
        limit,
        lambda k: limit.max_with_affine(slope, intercept - drop * (k - 1)),
    )


def random_decreasing_sequence(
    rng: np.random.Generator, log_R: float = 0.0
) -> ProfileSequence:
    """Seeded decreasing sequence over a random limit profile."""
    limit = random_profile(rng, log_R)
    mode = rng.choice(["truncation", "shift", "clip"])
    if mode == "truncation":
        return truncation_sequence(limit, label="random-truncation")
    if mode == "shift":
        return shifted_sequence(
            limit, scale=float(rng.uniform(0.5, 3.0)), label="random-shift"
        )
    slope = float(rng.uniform(0.0, 2.0))
    anchor = limit.breakpoints[0][0]
    intercept = limit.value(anchor) - slope * anchor
    return clipped_sequence(
        limit,
        slope,
        intercept,
        drop=float(rng.uniform(0.5, 2.0)),
        label="random-clip",
    )


def check_decreasing(
    seq: ProfileSequence, ks: Sequence[int], tol: float = 1e-9
) -> None:
    """Spot-check that members decrease along ks and stay above the limit."""
    limit = seq.limit
    t0 = limit.breakpoints[0][0]
    ts = [NEG_INF, *(t for t, _ in limit.breakpoints)]
    ts += list(np.linspace(t0 - 6.0, limit.log_R - 1e-6, 33))
    prev: list[float] | None = None
    lim_vals = [limit.value(t) for t in ts]
    for k in ks:
        prof = seq.member(k)
        vals = [prof.value(t) for t in ts]
        for i, (t, v) in enumerate(zip(ts, vals)):
            lv = lim_vals[i]
            slack = tol * (1.0 + (abs(lv) if math.isfinite(lv) else 0.0))
            if math.isfinite(lv) and v < lv - slack:
                raise NonMonotoneSequence(
                    f"{seq.label}: member {k} dips below the limit at t={t}"
                )
            if prev is not None and math.isfinite(prev[i]) and v > prev[i] + slack:
                raise NonMonotoneSequence(
                    f"{seq.label}: member {k} rises above the previous one at t={t}"
                )
        prev = vals


@dataclass(frozen=True)
class HarnessReport:
    """Uniform result shape for every convergence harness."""

    scenario: str
    hypothesis_series: DiagnosticSeries | None
    conclusion_series: tuple[DiagnosticSeries, ...]
    flags: dict
    verdict: str
    battery: tuple[str, ...] = ()
    details: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "hypothesis_series": (
                None
                if self.hypothesis_series is None
                else self.hypothesis_series.to_json_dict()
            ),
            "conclusion_series": [
                s.to_json_dict() for s in self.conclusion_series
            ],
            "flags": dict(self.flags),
            "verdict": self.verdict,
            "battery": list(self.battery),
            "details": dict(self.details),
        }


def _classify_on(
    profile: ConvexProfile,
    clamped: ConvexProfile,
    measure: RadialMeasure,
    K: RadialCompact,
    j: float,
) -> tuple[list[float], list[float], list[float]]:
    """Split the measure's mass on K into {u > -j}, {u = -j}, {u < -j}.

    The atom released by the truncation clamp is identified structurally
    (first atom of the measure, present when the clamp is active at
    level -j exactly), so no float comparison of interpolated values is
    involved.  A profile carrying a deeper clamp of its own keeps its
    release atom classified by value: it lies inside {u > -j}.
    """
    release_t = None
    if measure.atoms and clamped.floor == -j:
        release_t = measure.atoms[0][0]
    interior: list[float] = []
    level: list[float] = []
    below: list[float] = []
    if measure.origin_mass != 0.0 and K.contains_origin:
        lv = profile.left_value
        if lv > -j:
            interior.append(measure.origin_mass)
        elif lv == -j:
            level.append(measure.origin_mass)
        else:
            below.append(measure.origin_mass)
    for t, m in measure.atoms:
        if not K.contains(t):
            continue
        if t == release_t:
            level.append(m)
            continue
        v = profile.value(t)
        if v > -j:
            interior.append(m)
        elif v == -j:
            level.append(m)
        else:
            below.append(m)
    return interior, level, below


def truncation_analysis(
    profile: ConvexProfile,
    K: RadialCompact,
    n: int,
    schedule=None,
) -> HarnessReport:
    """Total vs nonpolar mass on K for the truncations, split by level.

    Series (a) is the total mass of (dd^c max(u, -j))^n on K, flagged
    against the nonpolar target; series (b) is the part carried by
    {u = -j}, flagged as a mass series.  The decomposition
    total = interior + level is asserted in exact rational arithmetic.
    """
    if schedule is None:
        schedule = geometric_schedule()
    np_m = nonpolar_part(profile, n)
    np_mass = np_m.mass_on(K)
    rows_total: list[tuple[float, float]] = []
    rows_level: list[tuple[float, float]] = []
    rows_interior: list[tuple[float, float]] = []
    for j in schedule:
        clamped = profile.truncate(float(j))
        measure = ma_measure(clamped, n)
        interior, level, below = _classify_on(profile, clamped, measure, K, j)
        below_fr = sum(Fraction(m) for m in below)
        if below_fr != 0:
            raise AssertionError(
                f"truncated measure charged {{u < -{j}}}: {float(below_fr)}"
            )
        interior_fr = sum(Fraction(m) for m in interior)
        level_fr = sum(Fraction(m) for m in level)
        total_fr = sum(Fraction(m) for m in interior + level + below)
        if total_fr != interior_fr + level_fr:
            raise AssertionError("exact decomposition failed")
        rows_total.append((j, float(math.fsum(interior + level))))
        rows_level.append((j, float(math.fsum(level))))
        rows_interior.append((j, float(math.fsum(interior))))
    for (_, a), (_, b) in zip(rows_interior, rows_interior[1:]):
        if b < a:
            raise AssertionError("interior masses must be nondecreasing in j")
    series_total = build_series(
        "j", rows_total, target=np_mass, extra_metadata={"series": "total_on_K"}
    )
    series_level = build_series(
        "j", rows_level, extra_metadata={"series": "level_part"}
    )
    series_interior = build_series(
        "j",
        rows_interior,
        target=np_mass,
        extra_metadata={"series": "interior_part"},
    )
    flags = {
        "total_vs_np": series_total.flag,
        "level": series_level.flag,
        "interior_vs_np": series_interior.flag,
    }
    agree = (series_total.flag == CONVERGING_TO_ZERO) == (
        series_level.flag == CONVERGING_TO_ZERO
    )
    level_zero_forces_total = not (
        series_level.flag == CONVERGING_TO_ZERO
        and series_total.flag != CONVERGING_TO_ZERO
    )
    return HarnessReport(
        scenario="truncation-analysis",
        hypothesis_series=None,
        conclusion_series=(series_total, series_level, series_interior),
        flags=flags,
        verdict="flags-agree" if agree else "flags-disagree",
        details={
            "np_mass_on_K": np_mass,
            "np_total_mass": np_m.total_mass,
            "np_finite": True,
            "exact_decomposition": True,
            "level_zero_forces_total": level_zero_forces_total,
        },
    )


def weak_convergence_test(
    seq: ProfileSequence,
    phis: Sequence[RadialTestFunction],
    n: int,
    k_schedule=None,
    check_monotone: bool = True,
) -> HarnessReport:
    """Integrals against each phi along the sequence vs the nonpolar target.

    The hypothesis series is the scaled sublevel capacity condition of
    the limit.  A zero hypothesis flag together with converging
    conclusions is the direction this harness checks; nothing is
    inferred from a positive hypothesis flag (the converse is false).

    Profiles that climb steeply toward the boundary get a
    ``boundary_caution`` detail: the domain is open on the right, so
    mass piling up near the edge sits outside every compact and the
    battery may not see it.
    """
    if k_schedule is None:
        k_schedule = geometric_schedule(1024)
    if check_monotone:
        check_decreasing(seq, k_schedule)
    limit = seq.limit
    np_m = nonpolar_part(limit, n)
    hypothesis = condition_sublevel(limit, n)
    conclusion = []
    flags = {}
    measures = [(k, ma_measure(seq.member(k), n)) for k in k_schedule]
    for phi in phis:
        target = np_m.integrate(phi)
        entries = [(k, mk.integrate(phi)) for k, mk in measures]
        s = build_series(
            "k", entries, target=target, extra_metadata={"phi": phi.label}
        )
        conclusion.append(s)
        flags[phi.label or f"phi{len(flags)}"] = s.flag
    all_converge = all(s.flag == CONVERGING_TO_ZERO for s in conclusion)
    hyp_zero = hypothesis.flag == CONVERGING_TO_ZERO
    implication_respected = (not hyp_zero) or all_converge
    verdict = (
        f"hypothesis={hypothesis.flag}; "
        f"conclusion={'converging' if all_converge else 'not-converging'}"
    )
    return HarnessReport(
        scenario=f"weak-convergence[{seq.label}]",
        hypothesis_series=hypothesis,
        conclusion_series=tuple(conclusion),
        flags=flags,
        verdict=verdict,
        battery=tuple(phi.label for phi in phis),
        details={
            "np_total_mass": np_m.total_mass,
            "np_is_radon": True,
            "implication_respected": implication_respected,
            "boundary_caution": limit.final_slope >= 8.0,
            "n": n,
        },
    )


def setwise_gap(
    seq: ProfileSequence,
    K: RadialCompact,
    n: int,
    k_schedule=None,
) -> HarnessReport:
    """Masses on a fixed compact along the sequence vs the nonpolar mass.

    Demonstrates that weak convergence to the nonpolar part does not
    force setwise convergence: the counterexample sequence keeps mass 0
    on the closed unit ball while the target is (2*pi)^n.
    """
    if k_schedule is None:
        k_schedule = geometric_schedule(1024)
    check_decreasing(seq, k_schedule)
    limit = seq.limit
    np_m = nonpolar_part(limit, n)
    target = np_m.mass_on(K)
    hypothesis = condition_sublevel(limit, n)
    entries = [
        (k, ma_measure(seq.member(k), n).mass_on(K)) for k in k_schedule
    ]
    s = build_series("k", entries, target=target)
    gap = target - entries[-1][1]
    persistent = s.flag != CONVERGING_TO_ZERO and abs(gap) > 1e-9 * (
        1.0 + abs(target)
    )
    return HarnessReport(
        scenario=f"setwise-gap[{seq.label}]",
        hypothesis_series=hypothesis,
        conclusion_series=(s,),
        flags={"mass_on_K": s.flag, "hypothesis": hypothesis.flag},
        verdict="persistent-gap" if persistent else "converges-setwise",
        details={"np_mass_on_K": target, "final_gap": gap, "n": n},
    )


def maximality_check(
    profile: ConvexProfile,
    n: int,
    phis: Sequence[RadialTestFunction] | None = None,
    schedule=None,
    exhaustion: Sequence[RadialCompact] | None = None,
) -> HarnessReport:
    """Radial maximality (away from the origin): vanishing nonpolar part.

    Checks that NP(dd^c u)^n carries no mass on an exhaustion and that
    the truncated measures integrate to 0 against test functions
    supported off the origin; the level-set capacity condition is
    reported as the hypothesis series.
    """
    if schedule is None:
        schedule = geometric_schedule()
    if phis is None:
        phis = punctured_battery(profile.log_R)
    if exhaustion is None:
        exhaustion = standard_exhaustion(profile.log_R)
    np_m = nonpolar_part(profile, n)
    np_masses = [np_m.mass_on(K) for K in exhaustion]
    np_zero = np_m.total_mass == 0.0
    hypothesis = condition_level(profile, n, schedule)
    conclusion = []
    flags = {}
    truncs = [(j, ma_measure(profile.truncate(float(j)), n)) for j in schedule]
    for phi in phis:
        entries = [(j, mj.integrate(phi)) for j, mj in truncs]
        s = build_series(
            "j", entries, target=0.0, extra_metadata={"phi": phi.label}
        )
        conclusion.append(s)
        flags[phi.label] = s.flag
    all_zero = all(s.flag == CONVERGING_TO_ZERO for s in conclusion)
    maximal = np_zero and all_zero
    return HarnessReport(
        scenario="maximality-check",
        hypothesis_series=hypothesis,
        conclusion_series=tuple(conclusion),
        flags=flags,
        verdict="maximal-off-origin" if maximal else "not-maximal",
        battery=tuple(phi.label for phi in phis),
        details={
            "criterion": "vanishing nonpolar part, radial reading",
            "np_total_mass": np_m.total_mass,
            "np_masses_on_exhaustion": np_masses,
            "n": n,
        },
    )


def ma_domain_membership(
    profile: ConvexProfile,
    n: int,
    exhaustion: Sequence[RadialCompact] | None = None,
    schedule=None,
) -> HarnessReport:
    """Membership test for the natural domain of the Monge-Ampere operator.

    A Radon nonpolar part plus a zero-flagged sublevel capacity
    condition puts the function in the domain; a positive flag yields
    no verdict either way.
    """
    if exhaustion is None:
        exhaustion = standard_exhaustion(profile.log_R)
    np_m = nonpolar_part(profile, n)
    np_masses = [np_m.mass_on(K) for K in exhaustion]
    radon = all(math.isfinite(m) for m in np_masses)
    hypothesis = condition_sublevel(profile, n, schedule)
    if hypothesis.flag == CONVERGING_TO_ZERO and radon:
        verdict = "in-domain"
    elif hypothesis.flag == CONVERGING_TO_POSITIVE:
        verdict = "hypothesis-positive-no-verdict"
    else:
        verdict = "inconclusive"
    np_equals_ma = False
    if isinstance(profile.left_end, FiniteValue):
        np_equals_ma = np_m == ma_measure(profile, n)
        if not np_equals_ma:
            raise AssertionError(
                "bounded profile must have nonpolar part equal to its measure"
            )
    return HarnessReport(
        scenario="ma-domain-membership",
        hypothesis_series=hypothesis,
        conclusion_series=(),
        flags={"hypothesis": hypothesis.flag},
        verdict=verdict,
        details={
            "np_masses_on_exhaustion": np_masses,
            "np_is_radon": radon,
            "bounded_np_equals_ma": np_equals_ma,
            "n": n,
        },
    )


def cegrell_f_diagnostic(
    profile: ConvexProfile,
    n: int,
    schedule=None,
) -> HarnessReport:
    """Class-F style diagnostic: boundary limit 0, bounded total masses.

    The truncations are the canonical bounded approximants; for a
    piecewise-linear radial profile their total mass is (2*pi*s)^n with
    s the final slope, so the series is constant and the supremum is
    finite whenever the profile is admissible.
    """
    from .errors import NotAdmissible

    if schedule is None:
        schedule = geometric_schedule()
    bl = profile.boundary_limit
    scale = 1.0 + max(abs(v) for _, v in profile.breakpoints)
    if abs(bl) > 1e-12 * scale:
        raise NotAdmissible(
            f"boundary limit {bl} is not 0; not a candidate for class F"
        )
    entries = [
        (j, ma_measure(profile.truncate(float(j)), n).total_mass)
        for j in schedule
    ]
    s = build_series("j", entries, extra_metadata={"series": "total_mass"})
    sup_mass = max(v for _, v in entries)
    return HarnessReport(
        scenario="cegrell-f-diagnostic",
        hypothesis_series=None,
        conclusion_series=(s,),
        flags={"total_mass": s.flag},
        verdict="bounded-approximating-masses",
        details={"sup_total_mass": sup_mass, "n": n},
    )


def generalized_condition(
    seq: ProfileSequence,
    n: int,
    j_schedule=None,
    k_schedule=None,
) -> DiagnosticSeries:
    """Uniform-in-k sublevel masses: j -> sup_k mass of (dd^c u_k)^n
    on {u_k <= -j}.

    The sequence-level strengthening of the capacity condition; a zero
    flag supports convergence for the whole sequence at once.
    """
    if j_schedule is None:
        j_schedule = geometric_schedule()
    if k_schedule is None:
        k_schedule = geometric_schedule(1024)
    profs = [seq.member(k) for k in k_schedule]
    members = [(p, ma_measure(p, n)) for p in profs]
    entries = []
    for j in j_schedule:
        sup = 0.0
        for prof, mk in members:
            sub = prof.sublevel(float(-j))
            if not sub.is_empty:
                sup = max(sup, mk.mass_on(sub))
        entries.append((j, sup))
    return build_series(
        "j", entries, extra_metadata={"series": "sup_k sublevel mass", "n": n}
    )
