"""Profile families, test-function batteries, and randomized generators.

The analytic families Log, MaxConst and LinearCap are themselves
piecewise linear, so sampling them is exact; PowerTail(alpha) is the
profile -(-t)^alpha and gets sampled on a grid with a node-wise
convexity check.  ``power_tail_profile`` places its nodes on a
geometric value ladder so the clamp levels -1, -2, -4, ... of the
doubling truncation schedule land exactly on nodes and the deepest node
value is exactly the scheduled bottom.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvexityViolation, MonotonicityViolation, NotConvexOnGrid
from .measures import RadialTestFunction, annular_plateau, hat
from .profiles import (
    ConvexProfile,
    FiniteValue,
    MinusInfinity,
    RadialCompact,
    closed_ball,
    make_compact,
    make_profile,
)


@dataclass(frozen=True)
class Log:
    """chi(t) = t, the profile of log ||z||."""


@dataclass(frozen=True)
class MaxConst:
    """chi(t) = max(t, c)."""

    c: float


@dataclass(frozen=True)
class PowerTail:
    """chi(t) = -(-t)^alpha for t < 0, with 0 < alpha < 1."""

    alpha: float


@dataclass(frozen=True)
class LinearCap:
    """chi(t) = max(a*t, b) for a >= 0; a = 0 means the constant b."""

    a: float
    b: float


def log_profile(log_R: float = 0.0) -> ConvexProfile:
    anchor = log_R - 1.0
    return make_profile(((anchor, anchor),), MinusInfinity(1.0), 1.0, log_R)


def max_const_profile(c: float, log_R: float = 0.0) -> ConvexProfile:
    """Profile of max(log ||z||, c); constant when the kink is outside."""
    if c >= log_R:
        return constant_profile(c, log_R)
    return make_profile(((c, c),), FiniteValue(c), 1.0, log_R)


def constant_profile(c: float, log_R: float = 0.0) -> ConvexProfile:
    return make_profile(((log_R - 1.0, c),), FiniteValue(c), 0.0, log_R)


def linear_cap_profile(a: float, b: float, log_R: float = 0.0) -> ConvexProfile:
    """Profile of max(a * log ||z||, b); constant b when a = 0."""
    if a < 0.0:
        raise MonotonicityViolation(f"LinearCap slope must be >= 0, got {a}")
    if a == 0.0 or b >= a * log_R:
        # the line never beats b inside the ball
        return constant_profile(b, log_R)
    return make_profile(((b / a, b),), FiniteValue(b), a, log_R)


def sample_analytic(family, grid=None, log_R: float = 0.0) -> ConvexProfile:
    """Piecewise-linear profile of an analytic family.

    Log, MaxConst and LinearCap are exactly piecewise linear and ignore
    the grid.  PowerTail requires a strictly increasing grid of negative
    t below log_R; its samples are checked node-wise for convexity and
    the final slope continues the analytic tangent at the last node.
    """
    if isinstance(family, Log):
        return log_profile(log_R)
    if isinstance(family, MaxConst):
        return max_const_profile(family.c, log_R)
    if isinstance(family, LinearCap):
        return linear_cap_profile(family.a, family.b, log_R)
    if isinstance(family, PowerTail):
        alpha = family.alpha
        if not 0.0 < alpha < 1.0:
            raise ValueError(f"PowerTail needs 0 < alpha < 1, got {alpha}")
        if grid is None:
            raise ValueError("PowerTail sampling requires a grid")
        ts = [float(t) for t in grid]
        if not ts or any(t >= min(0.0, log_R) for t in ts):
            raise ValueError("PowerTail grid must be negative and below log_R")
        pairs = tuple((t, -((-t) ** alpha)) for t in ts)
        final = alpha * (-ts[-1]) ** (alpha - 1.0)
        try:
            return make_profile(pairs, FiniteValue(pairs[0][1]), final, log_R)
        except ConvexityViolation as exc:
            raise NotConvexOnGrid(str(exc)) from exc
    raise TypeError(f"unknown family {family!r}")


def power_tail_profile(
    alpha: float,
    v_max: float = 1024.0,
    log_R: float = 0.0,
    per_octave: int = 4,
) -> ConvexProfile:
    """PowerTail profile with nodes on a geometric value ladder.

    Node values are -2^(m/per_octave) from -2^-6 down to exactly -v_max
    (v_max a power of two), positions t = -(-v)^(1/alpha).  Truncation
    at any power-of-two level up to v_max then clamps exactly at a node,
    and the minimum equals -v_max exactly, so the truncation sequence
    stabilizes with zero error once the level passes v_max.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"need 0 < alpha < 1, got {alpha}")
    q = per_octave
    m_top = round(q * math.log2(v_max))
    if 2.0 ** (m_top / q) != v_max:
        raise ValueError(f"v_max must be a power of two, got {v_max}")
    inv = 1.0 / alpha
    pairs = []
    for m in range(m_top, -6 * q - 1, -1):
        v = -(2.0 ** (m / q))
        t = -((-v) ** inv)
        pairs.append((t, v))
    final = alpha * (-pairs[-1][0]) ** (alpha - 1.0)
    return make_profile(pairs, FiniteValue(pairs[0][1]), final, log_R)


# -- compacts and exhaustions ------------------------------------------


def standard_exhaustion(log_R: float = 0.0, count: int = 6) -> tuple[RadialCompact, ...]:
    """Increasing closed balls exhausting the domain."""
    return tuple(closed_ball(log_R - 4.0 * 2.0**-i) for i in range(count))


def random_compact(rng: np.random.Generator, log_R: float = 0.0) -> RadialCompact:
    """1 to 3 well-separated intervals, sometimes starting with a ball."""
    pieces = int(rng.integers(1, 4))
    gaps = rng.uniform(0.1, 1.4, size=2 * pieces)
    edges = (log_R - 0.2) - np.cumsum(gaps)[::-1]
    intervals = [(edges[2 * i], edges[2 * i + 1]) for i in range(pieces)]
    if rng.random() < 0.4:
        a, b = intervals[0]
        intervals[0] = (float("-inf"), b)
    if rng.random() < 0.2:
        a, b = intervals[-1]
        intervals[-1] = (b, b)  # degenerate sphere
    return make_compact(intervals)


# -- randomized profiles -----------------------------------------------


def _dyadic(x, bits: int):
    """Round to a multiple of 2**-bits; keeps generated data exact."""
    scale = float(2**bits)
    return np.round(np.asarray(x, dtype=float) * scale) / scale


def random_profile(
    rng: np.random.Generator,
    log_R: float = 0.0,
    max_knots: int = 6,
    bounded: bool | None = None,
    lattice: float | None = None,
    allow_clamp: bool = True,
) -> ConvexProfile:
    """Seeded random convex nondecreasing profile.

    ``bounded`` forces the left end kind (None draws it).  With
    ``lattice`` = h the knots sit on {log_R - 1/4 - k*h}, so a grid
    built on the same lattice hits every knot exactly (h should be
    dyadic).  Occasional zero slope increments produce flat pieces and
    collinear knots on purpose.  Gaps, slopes and values are drawn as
    dyadic rationals so chord slopes recompute exactly and collinear
    runs survive the convexity validation bit for bit.
    """
    if bounded is None:
        bounded = bool(rng.random() < 0.5)
    for _ in range(32):
        m = int(rng.integers(1, max_knots + 1))
        hi = log_R - 0.25
        if lattice is not None:
            steps = rng.choice(np.arange(1, int(8.0 / lattice)), size=m, replace=False)
            ts = np.sort(hi - lattice * steps.astype(float))
        else:
            offsets = np.cumsum(_dyadic(rng.uniform(0.2, 1.4, size=m), 10))
            ts = hi - offsets[::-1]
        tail_slope = 0.0 if bounded else float(_dyadic(rng.uniform(0.05, 1.5), 12))
        incs = _dyadic(rng.uniform(0.0, 1.2, size=m), 12)
        incs[rng.random(m) < 0.3] = 0.0
        if not bounded:
            incs[0] = max(incs[0], 0.05)  # keep the first chord above the tail
        run = tail_slope + np.cumsum(incs)  # chord slopes then the final slope
        v0 = float(_dyadic(rng.uniform(-6.0, -0.5), 12))
        vs = [v0]
        for i in range(1, m):
            vs.append(vs[-1] + float(run[i - 1]) * float(ts[i] - ts[i - 1]))
        left = FiniteValue(v0) if bounded else MinusInfinity(tail_slope)
        try:
            profile = make_profile(
                tuple(zip(map(float, ts), vs)), left, float(run[-1]), log_R
            )
        except ConvexityViolation:
            # possible only for non-dyadic log_R, where knot differences
            # reintroduce rounding; redraw
            continue
        if allow_clamp and rng.random() < 0.25:
            level = float(_dyadic(rng.uniform(0.5, 4.0), 8))
            if -level > profile.left_value:
                profile = profile.truncate(level)
        return profile
    raise ConvexityViolation("could not draw a convex profile in 32 attempts")


# -- test function batteries -------------------------------------------


def default_battery(log_R: float = 0.0) -> tuple[RadialTestFunction, ...]:
    """16 test functions at geometric scales below the boundary.

    Annular plateaus and hats only: all of them vanish at the origin, so
    pairings see exactly the nonpolar mass of an atomic limit measure
    and never the origin atom.
    """
    out = []
    for i in range(-2, 6):
        c = -(2.0**i)
        out.append(
            annular_plateau(
                log_R + 4.0 * c,
                log_R + 2.0 * c,
                log_R + c,
                log_R + c / 2.0,
                log_R,
                label=f"plateau@{c:g}",
            )
        )
    for i in range(-2, 6):
        c = -(2.0**i)
        out.append(
            hat(log_R + 2.0 * c, log_R + c, log_R + c / 2.0, log_R, label=f"hat@{c:g}")
        )
    return tuple(out)


def punctured_battery(log_R: float = 0.0) -> tuple[RadialTestFunction, ...]:
    """16 hats vanishing near the origin (support away from 0)."""
    out = []
    for i in range(-2, 6):
        c = -(2.0**i)
        out.append(
            hat(log_R + 2.0 * c, log_R + c, log_R + c / 2.0, log_R, label=f"hat@{c:g}")
        )
        out.append(
            hat(log_R + 2.0 * c, log_R + 1.5 * c, log_R + c, log_R, label=f"hat2@{c:g}")
        )
    return tuple(out)
