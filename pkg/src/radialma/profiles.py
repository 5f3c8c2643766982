"""Exact calculus of convex nondecreasing piecewise-linear radial profiles.

A radial plurisubharmonic function u on the ball {||z|| < R} of C^n is
u(z) = chi(log ||z||) with chi convex and nondecreasing on (-inf, log R).
This module holds chi itself: construction, evaluation, clamping from
below, maxima with affine functions, sublevel and level sets, one-sided
slopes, and JSON round-trips.  Everything is closed-form float
arithmetic on the breakpoint data; nothing is discretized.

A profile is stored as an underlying piecewise-linear formula (knots
plus two tail slopes) together with a clamp value ``floor``; the profile
is max(formula, floor).  Truncation max(chi, -j) therefore only replaces
the clamp and never touches the knots, which keeps repeated truncations
and the derived measures bitwise reproducible.
"""
from __future__ import annotations

import json
import math
from bisect import bisect_right
from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np

from .errors import (
    ConvexityViolation,
    MonotonicityViolation,
    OutOfDomain,
    UnorderedBreakpoints,
)

NEG_INF = float("-inf")


@dataclass(frozen=True)
class FiniteValue:
    """Left tail is constant: chi(t) = value for all t <= first breakpoint."""

    value: float


@dataclass(frozen=True)
class MinusInfinity:
    """Left tail is linear with slope > 0, so chi decreases to -inf."""

    slope: float


LeftEnd = FiniteValue | MinusInfinity


@dataclass(frozen=True)
class RadialCompact:
    """Finite union of closed intervals in the log radius t = log ||z||.

    An interval (-inf, b] encodes the closed ball of radius e^b, [a, a]
    a sphere, and [a, b] with finite a a closed annulus.  Intervals are
    stored sorted and pairwise disjoint with strict gaps.
    """

    intervals: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        prev_b = NEG_INF
        for i, (a, b) in enumerate(self.intervals):
            if not a <= b:
                raise ValueError(f"interval {i}: need a <= b, got ({a}, {b})")
            if math.isinf(b) or (math.isinf(a) and a > 0):
                raise ValueError(f"interval {i}: endpoints must be < +inf")
            if i > 0 and not prev_b < a:
                raise ValueError("intervals must be disjoint and sorted")
            prev_b = b

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def contains_origin(self) -> bool:
        return bool(self.intervals) and self.intervals[0][0] == NEG_INF

    @property
    def sup(self) -> float:
        """Rightmost point; NEG_INF for the empty set."""
        return self.intervals[-1][1] if self.intervals else NEG_INF

    def contains(self, t: float) -> bool:
        for a, b in self.intervals:
            if a <= t <= b:
                return True
        return False

    def intersect(self, other: "RadialCompact") -> "RadialCompact":
        out = []
        for a1, b1 in self.intervals:
            for a2, b2 in other.intervals:
                lo, hi = max(a1, a2), min(b1, b2)
                if lo <= hi:
                    out.append((lo, hi))
        return make_compact(out)

    def union(self, other: "RadialCompact") -> "RadialCompact":
        return make_compact(list(self.intervals) + list(other.intervals))

    def subset_of(self, other: "RadialCompact") -> bool:
        return self.intersect(other).intervals == self.intervals

    def to_json_dict(self) -> dict:
        return {
            "intervals": [
                [None if a == NEG_INF else a, b] for a, b in self.intervals
            ]
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "RadialCompact":
        ivs = [
            (NEG_INF if a is None else float(a), float(b))
            for a, b in data["intervals"]
        ]
        return cls(tuple(ivs))


def make_compact(intervals) -> RadialCompact:
    """Sort and merge overlapping or touching intervals."""
    ivs = sorted((float(a), float(b)) for a, b in intervals)
    merged: list[tuple[float, float]] = []
    for a, b in ivs:
        if merged and a <= merged[-1][1]:
            pa, pb = merged[-1]
            merged[-1] = (pa, max(pb, b))
        else:
            merged.append((a, b))
    return RadialCompact(tuple(merged))


def closed_ball(b: float) -> RadialCompact:
    """Closed ball {||z|| <= e^b} as a radial compact."""
    return RadialCompact(((NEG_INF, float(b)),))


def annulus(a: float, b: float) -> RadialCompact:
    return RadialCompact(((float(a), float(b)),))


def sphere(t: float) -> RadialCompact:
    return RadialCompact(((float(t), float(t)),))


def empty_compact() -> RadialCompact:
    return RadialCompact(())


@dataclass(frozen=True)
class ConvexProfile:
    """Convex nondecreasing piecewise-linear profile on (-inf, log_R).

    ``breakpoints`` is a strictly increasing tuple of (t, chi(t)) knots
    of the underlying formula, all with t < log_R.  Left of the first
    knot the formula follows ``tail`` (a constant, or a line of positive
    slope going to -inf); right of the last knot it is linear with slope
    ``final_slope``.  The profile itself is max(formula, floor); a floor
    of -inf means no clamp is active.  Instances are immutable and safe
    to share across threads.
    """

    breakpoints: tuple[tuple[float, float], ...]
    tail: LeftEnd
    final_slope: float
    log_R: float = 0.0
    floor: float = NEG_INF

    def __post_init__(self) -> None:
        bps = self.breakpoints
        if not bps:
            raise ValueError("need at least one breakpoint")
        for t, v in bps:
            if not (math.isfinite(t) and math.isfinite(v)):
                raise ValueError("breakpoints must be finite")
            if t >= self.log_R:
                raise ValueError(f"breakpoint t={t} not < log_R={self.log_R}")
        for i in range(1, len(bps)):
            if not bps[i - 1][0] < bps[i][0]:
                raise UnorderedBreakpoints(
                    f"t[{i - 1}]={bps[i - 1][0]} !< t[{i}]={bps[i][0]}"
                )
        slopes = self._slope_run()
        for i, s in enumerate(slopes):
            if s < 0.0:
                raise MonotonicityViolation(f"segment {i} has slope {s} < 0")
        for i in range(1, len(slopes)):
            if slopes[i] < slopes[i - 1]:
                raise ConvexityViolation(
                    f"slope drops from {slopes[i - 1]} to {slopes[i]} "
                    f"at segment {i}"
                )
        le = self.tail
        if isinstance(le, FiniteValue):
            if not math.isfinite(le.value):
                raise ValueError("FiniteValue must carry a finite value")
            if le.value != bps[0][1]:
                raise ConvexityViolation(
                    "left end value must equal the first breakpoint value "
                    f"({le.value} != {bps[0][1]})"
                )
        elif isinstance(le, MinusInfinity):
            if le.slope <= 0.0 or not math.isfinite(le.slope):
                raise MonotonicityViolation(
                    "MinusInfinity slope must be positive and finite; "
                    "use FiniteValue for a bounded left tail"
                )
        else:
            raise TypeError(f"unknown left end {le!r}")
        if math.isnan(self.floor) or self.floor == math.inf:
            raise ValueError("floor must be a float or -inf")
        # canonical form: drop a clamp that never bites
        if self.floor != NEG_INF and self.floor <= self._formula_left_value():
            object.__setattr__(self, "floor", NEG_INF)

    # -- formula-level helpers (clamp ignored) --------------------------

    def _slope_run(self) -> list[float]:
        """Formula slopes in order: tail, each chord, final."""
        bps = self.breakpoints
        left = self.tail.slope if isinstance(self.tail, MinusInfinity) else 0.0
        run = [left]
        for i in range(1, len(bps)):
            (t0, v0), (t1, v1) = bps[i - 1], bps[i]
            run.append((v1 - v0) / (t1 - t0))
        run.append(self.final_slope)
        return run

    @cached_property
    def _ts(self) -> tuple[float, ...]:
        return tuple(t for t, _ in self.breakpoints)

    @cached_property
    def _vs(self) -> tuple[float, ...]:
        return tuple(v for _, v in self.breakpoints)

    def _formula_left_value(self) -> float:
        if isinstance(self.tail, FiniteValue):
            return self.tail.value
        return NEG_INF

    @property
    def _tail_slope(self) -> float:
        return self.tail.slope if isinstance(self.tail, MinusInfinity) else 0.0

    def _formula_value(self, t: float) -> float:
        ts, vs = self._ts, self._vs
        if t == NEG_INF:
            return self._formula_left_value()
        if t <= ts[0]:
            if isinstance(self.tail, FiniteValue):
                return self.tail.value
            return vs[0] + self.tail.slope * (t - ts[0])
        if t >= ts[-1]:
            return vs[-1] + self.final_slope * (t - ts[-1])
        i = bisect_right(ts, t) - 1
        s = (vs[i + 1] - vs[i]) / (ts[i + 1] - ts[i])
        return vs[i] + s * (t - ts[i])

    def _formula_boundary_limit(self) -> float:
        t, v = self.breakpoints[-1]
        return v + self.final_slope * (self.log_R - t)

    def _formula_right_slope(self, t: float) -> float:
        ts = self._ts
        if t < ts[0]:
            return self._tail_slope
        if t >= ts[-1]:
            return self.final_slope
        run = self._slope_run()
        # run[i + 1] is the chord slope on [ts[i], ts[i + 1])
        i = bisect_right(ts, t) - 1
        return run[i + 1]

    def _formula_sublevel_edge(self, s: float) -> float | None:
        """sup{t : formula(t) <= s}, None when empty, log_R when total.

        The crossing on a rising segment is computed by one fixed
        interpolation formula anchored at the stored knots, so repeated
        queries at the same level agree bitwise.
        """
        if self._formula_left_value() > s:
            return None
        ts, vs = self._ts, self._vs
        if self._formula_boundary_limit() <= s:
            return self.log_R
        if isinstance(self.tail, MinusInfinity) and vs[0] > s:
            return ts[0] + (s - vs[0]) / self.tail.slope
        # last knot with value <= s; the crossing sits on the next segment
        k = bisect_right(vs, s) - 1
        if k < 0:
            raise AssertionError("unreachable: sublevel edge before knots")
        if k == len(ts) - 1:
            return ts[k] + (s - vs[k]) / self.final_slope
        slope = (vs[k + 1] - vs[k]) / (ts[k + 1] - ts[k])
        return ts[k] + (s - vs[k]) / slope

    @cached_property
    def _floor_edge(self) -> float:
        """Where the active clamp releases; NEG_INF when no clamp."""
        if self.floor == NEG_INF:
            return NEG_INF
        edge = self._formula_sublevel_edge(self.floor)
        assert edge is not None  # canonical form guarantees floor > inf chi
        return edge

    @cached_property
    def knot_slopes(self) -> tuple[tuple[float, float, float], ...]:
        """Per-knot (t, slope_before, slope_after) triples of the formula."""
        run = self._slope_run()
        return tuple(
            (t, run[i], run[i + 1]) for i, (t, _) in enumerate(self.breakpoints)
        )

    # -- profile-level interface (clamp applied) ------------------------

    @property
    def left_end(self) -> LeftEnd:
        """The profile's own left tail, clamp included."""
        if self.floor != NEG_INF:
            return FiniteValue(self.floor)
        return self.tail

    @property
    def left_value(self) -> float:
        """chi(-inf): the infimum of the profile."""
        if self.floor != NEG_INF:
            return self.floor
        return self._formula_left_value()

    @property
    def left_slope(self) -> float:
        """Asymptotic slope at -inf; 0 whenever the profile is bounded."""
        if self.floor != NEG_INF:
            return 0.0
        return self._tail_slope

    @property
    def boundary_limit(self) -> float:
        """lim chi(t) as t -> log_R from the left."""
        return max(self._formula_boundary_limit(), self.floor)

    def value(self, t: float) -> float:
        """Evaluate chi(t).  Accepts t = -inf; raises OutOfDomain at log_R."""
        if t >= self.log_R:
            raise OutOfDomain(f"t={t} >= log_R={self.log_R}")
        return max(self._formula_value(t), self.floor)

    def values(self, ts: np.ndarray) -> np.ndarray:
        """Vectorized evaluation on an array of finite t < log_R."""
        ts = np.asarray(ts, dtype=float)
        if ts.size and float(ts.max()) >= self.log_R:
            raise OutOfDomain("grid reaches log_R")
        xp = np.array(self._ts)
        fp = np.array(self._vs)
        out = np.interp(ts, xp, fp)
        left = ts < xp[0]
        if left.any():
            if isinstance(self.tail, FiniteValue):
                out[left] = self.tail.value
            else:
                out[left] = fp[0] + self.tail.slope * (ts[left] - xp[0])
        right = ts > xp[-1]
        if right.any():
            out[right] = fp[-1] + self.final_slope * (ts[right] - xp[-1])
        if self.floor != NEG_INF:
            np.maximum(out, self.floor, out=out)
        return out

    def right_slope(self, t: float) -> float:
        """One-sided derivative chi'(t+).  At -inf returns the tail slope."""
        if t >= self.log_R:
            raise OutOfDomain(f"t={t} >= log_R={self.log_R}")
        if self.floor != NEG_INF and t < self._floor_edge:
            return 0.0
        if t == NEG_INF:
            return self.left_slope
        return self._formula_right_slope(t)

    def shift(self, c: float) -> "ConvexProfile":
        """chi + c; the Monge-Ampere data is unchanged."""
        if not math.isfinite(c):
            raise ValueError("shift must be finite")
        bps = tuple((t, v + c) for t, v in self.breakpoints)
        le = self.tail
        if isinstance(le, FiniteValue):
            le = FiniteValue(le.value + c)
        return ConvexProfile(bps, le, self.final_slope, self.log_R, self.floor + c)

    def sublevel(self, s: float) -> RadialCompact:
        """{chi <= s} as a radial compact; (-inf, edge] or empty.

        The edge equals log_R when the whole profile sits at or below s;
        the result then touches the boundary and has no extremal profile.
        """
        if s < self.floor:
            return empty_compact()
        edge = self._formula_sublevel_edge(s)
        if edge is None:
            return empty_compact()
        return RadialCompact(((NEG_INF, edge),))

    def level_set(self, s: float) -> RadialCompact:
        """{chi == s}: empty, a sphere, a closed annulus, or a closed ball."""
        if s < self.floor or self.left_value > s:
            return empty_compact()
        hi = self._formula_sublevel_edge(s)
        if self.left_value == s:
            # the clamp (or a constant tail) attains s on a whole ball
            return RadialCompact(((NEG_INF, hi),))
        # now s > floor, so the level set is a formula-level question
        ts, vs = self._ts, self._vs
        if self._formula_boundary_limit() < s:
            return empty_compact()
        if isinstance(self.tail, MinusInfinity) and vs[0] >= s:
            lo = ts[0] + (s - vs[0]) / self.tail.slope
        else:
            k = bisect_right(vs, s) - 1
            if vs[k] == s:
                # walk back across any flat run at level s
                while k > 0 and vs[k - 1] == s:
                    k -= 1
                lo = ts[k]
            elif k == len(ts) - 1:
                if self.final_slope == 0.0:
                    return empty_compact()  # chi < s up to the boundary
                lo = ts[k] + (s - vs[k]) / self.final_slope
            else:
                slope = (vs[k + 1] - vs[k]) / (ts[k + 1] - ts[k])
                lo = ts[k] + (s - vs[k]) / slope
        if hi is None or hi < lo or lo >= self.log_R:
            return empty_compact()
        return RadialCompact(((lo, hi),))

    def _max_with_constant(self, c: float) -> "ConvexProfile":
        """max(chi, c): only the clamp moves, knots stay verbatim."""
        if c <= self.left_value:
            return self
        return replace(self, floor=c)

    def truncate(self, j: float) -> "ConvexProfile":
        """max(chi, -j) for j > 0: the profile of max(u, -j).

        Truncation only raises the clamp, so truncate(truncate(chi, j), k)
        == truncate(chi, k) bitwise whenever j >= k, and the measures of
        shared knots are float-identical across truncation levels.
        """
        if not j > 0.0:
            raise ValueError(f"truncation level j must be positive, got {j}")
        return self._max_with_constant(-j)

    @staticmethod
    def _assemble(bps, tail, final_slope, log_R) -> "ConvexProfile":
        """Construct a profile from near-convex knots, dropping the odd
        knot whose recomputed chord slopes invert by an ulp.

        Materialized crossing points sit within one rounding error of
        the true convex graph, but over a short interval that is enough
        to flip a chord comparison; removing such a point changes the
        function by at most the same rounding error.
        """
        lead = tail.slope if isinstance(tail, MinusInfinity) else 0.0
        finite_left = isinstance(tail, FiniteValue)
        stack: list[tuple[float, float]] = []
        for p in bps:
            drop = False
            while stack:
                if len(stack) >= 2:
                    a, b = stack[-2], stack[-1]
                    s_prev = (b[1] - a[1]) / (b[0] - a[0])
                else:
                    s_prev = lead
                s_new = (p[1] - stack[-1][1]) / (p[0] - stack[-1][0])
                if s_new >= s_prev:
                    break
                if len(stack) == 1 and finite_left:
                    drop = True  # the continuity anchor must survive
                    break
                stack.pop()
            if not drop:
                stack.append(p)
        while len(stack) >= 2:
            a, b = stack[-2], stack[-1]
            if (b[1] - a[1]) / (b[0] - a[0]) > final_slope:
                stack.pop()
            else:
                break
        return ConvexProfile(tuple(stack), tail, final_slope, log_R)

    def max_with_affine(self, slope: float, intercept: float) -> "ConvexProfile":
        """max(chi, slope*t + intercept) for slope >= 0; still convex."""
        if slope < 0.0:
            raise MonotonicityViolation("affine minorant must have slope >= 0")
        if slope == 0.0:
            return self._max_with_constant(intercept)

        def line(t: float) -> float:
            return slope * t + intercept

        # formula - line is convex piecewise linear; the line can win on
        # at most one interval (lo, hi).  The clamp is reapplied at the end.
        run = self._slope_run()
        ts, vs = self._ts, self._vs
        d_at = [vs[i] - line(ts[i]) for i in range(len(ts))]
        d_bnd = self._formula_boundary_limit() - line(self.log_R)

        if isinstance(self.tail, MinusInfinity):
            if self.tail.slope > slope:
                wins_left = True  # chi falls faster, the line wins near -inf
            elif self.tail.slope < slope:
                wins_left = False
            else:
                wins_left = d_at[0] < 0.0
        else:
            wins_left = False  # the line drops to -inf, the constant tail stays
        if not wins_left and min(d_at) >= 0.0 and d_bnd >= 0.0:
            return self  # the line never rises above the formula

        def cross_left() -> float:
            """Leftmost zero of formula - line; -inf when the line wins at -inf."""
            if wins_left:
                return NEG_INF
            if d_at[0] <= 0.0:
                s0 = self._tail_slope
                if s0 == slope:
                    return NEG_INF
                return ts[0] + (-d_at[0]) / (s0 - slope)
            for i in range(1, len(ts)):
                if d_at[i] <= 0.0:
                    si = run[i]
                    return ts[i - 1] + (-d_at[i - 1]) / (si - slope)
            return ts[-1] + (-d_at[-1]) / (self.final_slope - slope)

        def cross_right() -> float:
            """Rightmost zero of formula - line; log_R when the line wins there."""
            if d_bnd <= 0.0:
                return self.log_R
            if d_at[-1] <= 0.0:
                return ts[-1] + (-d_at[-1]) / (self.final_slope - slope)
            for i in range(len(ts) - 2, -1, -1):
                if d_at[i] <= 0.0:
                    si = run[i + 1]
                    return ts[i] + (-d_at[i]) / (si - slope)
            s0 = self._tail_slope
            return ts[0] + (-d_at[0]) / (s0 - slope)

        lo, hi = cross_left(), cross_right()
        if hi <= lo:
            return self  # tangency or numerically empty overtake region
        right_knots = tuple((t, v) for t, v in self.breakpoints if t > hi)
        if hi >= self.log_R:
            # the line wins up to the boundary
            if lo == NEG_INF:
                anchor = min(ts[0], self.log_R - 1.0)
                out = ConvexProfile(
                    ((anchor, line(anchor)),),
                    MinusInfinity(slope),
                    slope,
                    self.log_R,
                )
            else:
                left_knots = tuple((t, v) for t, v in self.breakpoints if t < lo)
                bps = left_knots + ((lo, self._formula_value(lo)),)
                out = self._assemble(bps, self.tail, slope, self.log_R)
        else:
            hi_pair = ((hi, self._formula_value(hi)),)
            if right_knots and right_knots[0][0] == hi:
                hi_pair = ()
            if lo == NEG_INF:
                out = self._assemble(
                    hi_pair + right_knots,
                    MinusInfinity(slope),
                    self.final_slope,
                    self.log_R,
                )
            else:
                left_knots = tuple((t, v) for t, v in self.breakpoints if t < lo)
                lo_pair = ((lo, self._formula_value(lo)),)
                if left_knots and left_knots[-1][0] == lo:
                    lo_pair = ()
                out = self._assemble(
                    left_knots + lo_pair + hi_pair + right_knots,
                    self.tail,
                    self.final_slope,
                    self.log_R,
                )
        if self.floor == NEG_INF:
            return out
        return out._max_with_constant(self.floor)

    # -- serialization ---------------------------------------------------

    def to_json_dict(self) -> dict:
        def encode(le: LeftEnd) -> dict:
            if isinstance(le, FiniteValue):
                return {"kind": "finite", "value_or_slope": le.value}
            return {"kind": "minus_infinity", "value_or_slope": le.slope}

        data = {
            "left_end": encode(self.left_end),
            "breakpoints": [[t, v] for t, v in self.breakpoints],
            "final_slope": self.final_slope,
            "log_R": self.log_R,
        }
        if self.floor != NEG_INF:
            # the clamp shows up as the finite left end above; the extra
            # key preserves the underlying formula tail for the round-trip
            data["formula_tail"] = encode(self.tail)
        return data

    @classmethod
    def from_json_dict(cls, data: dict) -> "ConvexProfile":
        def decode(entry: dict) -> LeftEnd:
            kind = entry["kind"]
            x = float(entry["value_or_slope"])
            if kind == "finite":
                return FiniteValue(x)
            if kind == "minus_infinity":
                return MinusInfinity(x)
            raise ValueError(f"unknown left end kind {kind!r}")

        bps = tuple((float(t), float(v)) for t, v in data["breakpoints"])
        if "formula_tail" in data:
            tail = decode(data["formula_tail"])
            floor = float(data["left_end"]["value_or_slope"])
        else:
            tail = decode(data["left_end"])
            floor = NEG_INF
        return cls(
            bps,
            tail,
            float(data["final_slope"]),
            float(data.get("log_R", 0.0)),
            floor,
        )

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json(cls, text: str) -> "ConvexProfile":
        return cls.from_json_dict(json.loads(text))


def make_profile(
    breakpoints,
    left_end: LeftEnd,
    final_slope: float | None = None,
    log_R: float = 0.0,
) -> ConvexProfile:
    """Build a validated unclamped profile.

    When ``final_slope`` is None the last chord slope is continued past
    the last knot (the tail slope for a single knot with a MinusInfinity
    tail, otherwise 0).
    """
    bps = tuple((float(t), float(v)) for t, v in breakpoints)
    if final_slope is None:
        if len(bps) >= 2:
            (t0, v0), (t1, v1) = bps[-2], bps[-1]
            final_slope = (v1 - v0) / (t1 - t0)
        elif isinstance(left_end, MinusInfinity):
            final_slope = left_end.slope
        else:
            final_slope = 0.0
    return ConvexProfile(bps, left_end, float(final_slope), float(log_R))
