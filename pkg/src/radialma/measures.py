"""Radial Monge-Ampere measures and their nonpolar parts.

For u(z) = chi(log ||z||) with chi convex, nondecreasing and piecewise
linear, (dd^c u)^n lives on spheres: the closed ball {||z|| <= e^t}
carries mass (2*pi)^n * chi'(t+)^n.  Each slope jump s- -> s+ at a knot
t therefore contributes the sphere atom (2*pi)^n * (s+^n - s-^n), and a
left tail of asymptotic slope s gives the origin the atom (2*pi*s)^n.
The normalization is pinned by n = 1: u = log ||z|| has total mass 2*pi.
"""
from __future__ import annotations

import json
import math
from bisect import bisect_right
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import NonStabilized, OutOfDomain
from .profiles import ConvexProfile, MinusInfinity, RadialCompact, NEG_INF

TWO_PI = 2.0 * math.pi

# doubling truncation schedule used to realize the nonpolar part as an
# honest increasing limit
NP_SCHEDULE: tuple[int, ...] = tuple(2**k for k in range(21))


@dataclass(frozen=True)
class RadialMeasure:
    """Purely atomic radial measure: an origin mass plus sphere atoms.

    ``atoms`` is a strictly increasing tuple of (t, mass) pairs with
    mass > 0; the atom at t charges the sphere {||z|| = e^t}.
    """

    n: int
    origin_mass: float
    atoms: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"dimension n must be >= 1, got {self.n}")
        if not self.origin_mass >= 0.0:
            raise ValueError(f"origin mass must be >= 0, got {self.origin_mass}")
        prev = NEG_INF
        for t, m in self.atoms:
            if not math.isfinite(t):
                raise ValueError("atom positions must be finite")
            if not m > 0.0:
                raise ValueError(f"atom at t={t} has nonpositive mass {m}")
            if not t > prev:
                raise ValueError("atom positions must be strictly increasing")
            prev = t

    @property
    def total_mass(self) -> float:
        return math.fsum([self.origin_mass] + [m for _, m in self.atoms])

    def mass_on(self, region: RadialCompact) -> float:
        """Measure of the region; exact interval/atom bookkeeping."""
        parts = [self.origin_mass] if region.contains_origin else []
        for t, m in self.atoms:
            if region.contains(t):
                parts.append(m)
        return math.fsum(parts)

    def restrict(self, region: RadialCompact) -> "RadialMeasure":
        origin = self.origin_mass if region.contains_origin else 0.0
        kept = tuple((t, m) for t, m in self.atoms if region.contains(t))
        return RadialMeasure(self.n, origin, kept)

    def integrate(self, phi: "RadialTestFunction") -> float:
        """Pair with a radial test function, origin value included."""
        parts = [self.origin_mass * phi.origin_value]
        parts += [m * phi.value(t) for t, m in self.atoms]
        return math.fsum(parts)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "origin_mass": self.origin_mass,
            "atoms": [[t, m] for t, m in self.atoms],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "RadialMeasure":
        return cls(
            int(data["n"]),
            float(data["origin_mass"]),
            tuple((float(t), float(m)) for t, m in data["atoms"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json(cls, text: str) -> "RadialMeasure":
        return cls.from_json_dict(json.loads(text))


def ma_measure(profile: ConvexProfile, n: int) -> RadialMeasure:
    """Monge-Ampere measure (dd^c u)^n of u = chi(log ||z||) on the ball.

    Zero-mass atoms (knots with no slope jump) are dropped, so equal
    measures compare equal as dataclasses.  For a clamped profile the
    flat part contributes nothing; the clamp release point carries the
    atom (2*pi*sigma)^n with sigma the formula slope there, and every
    knot right of it keeps the float-identical mass it has without the
    clamp.
    """
    if n < 1:
        raise ValueError(f"dimension n must be >= 1, got {n}")
    scale = TWO_PI**n
    if profile.floor == NEG_INF:
        origin = scale * profile.left_slope**n
        atoms = []
        for t, s_before, s_after in profile.knot_slopes:
            jump = scale * (s_after**n - s_before**n)
            if jump != 0.0:
                atoms.append((t, jump))
        return RadialMeasure(n, origin, tuple(atoms))
    edge = profile._floor_edge
    if edge >= profile.log_R:
        return RadialMeasure(n, 0.0, ())  # constant profile, no mass
    sigma = profile._formula_right_slope(edge)
    assert sigma > 0.0, "clamp release point must have rising formula"
    atoms = [(edge, scale * sigma**n)]
    for t, s_before, s_after in profile.knot_slopes:
        if t <= edge:
            continue
        jump = scale * (s_after**n - s_before**n)
        if jump != 0.0:
            atoms.append((t, jump))
    return RadialMeasure(n, 0.0, tuple(atoms))


def nonpolar_part(
    profile: ConvexProfile,
    n: int,
    schedule: Sequence[int] = NP_SCHEDULE,
) -> RadialMeasure:
    """Nonpolar part NP(dd^c u)^n as the limit of truncated measures.

    Runs the increasing limit of (dd^c max(u, -j))^n restricted to
    {u > -j} over the doubling schedule.  Restriction is structural: the
    truncation's clamp release atom sits exactly on {u = -j} and is
    dropped, but only when the clamp is active at level -j; a profile
    that already carries a deeper clamp of its own keeps its release
    atom, which lies inside {u > -j}.  Because truncation preserves
    every surviving atom bit for bit, the limit is reached exactly when
    the kept atoms equal the full measure's atoms as float tuples, and
    the result is that atom list with no origin mass (the origin atom,
    present only when chi(-inf) = -inf, never meets {u > -j}).
    Raises NonStabilized when the schedule is exhausted first.
    """
    full = ma_measure(profile, n)
    for j in schedule:
        clamped = profile.truncate(j)
        kept = ma_measure(clamped, n).atoms
        if kept and clamped.floor == -float(j):
            kept = kept[1:]
        if kept == full.atoms:
            return RadialMeasure(n, 0.0, full.atoms)
    raise NonStabilized(
        f"nonpolar part did not stabilize with levels up to {schedule[-1]}"
    )


@dataclass(frozen=True)
class RadialTestFunction:
    """Continuous piecewise-linear radial test function phi(log ||z||).

    Constant equal to ``origin_value`` left of the first node, affine
    between nodes, and identically 0 from the last node on, so the
    support stays compactly inside the ball (last node < log_R).
    """

    origin_value: float
    nodes: tuple[tuple[float, float], ...]
    log_R: float = 0.0
    label: str = ""

    def __post_init__(self) -> None:
        if not self.nodes:
            raise ValueError("need at least one node")
        prev = NEG_INF
        for t, v in self.nodes:
            if not (math.isfinite(t) and math.isfinite(v)):
                raise ValueError("nodes must be finite")
            if not t > prev:
                raise ValueError("node positions must be strictly increasing")
            prev = t
        if not self.nodes[-1][0] < self.log_R:
            raise ValueError("support must end strictly before log_R")
        if self.nodes[0][1] != self.origin_value:
            raise ValueError("first node value must equal origin_value")
        if self.nodes[-1][1] != 0.0:
            raise ValueError("last node value must be 0 (compact support)")

    @cached_property
    def _ts(self) -> tuple[float, ...]:
        return tuple(t for t, _ in self.nodes)

    @cached_property
    def _vs(self) -> tuple[float, ...]:
        return tuple(v for _, v in self.nodes)

    def value(self, t: float) -> float:
        """phi(t); accepts t = -inf and anything up to log_R."""
        if t > self.log_R:
            raise OutOfDomain(f"t={t} > log_R={self.log_R}")
        ts, vs = self._ts, self._vs
        if t <= ts[0]:
            return self.origin_value
        if t >= ts[-1]:
            return 0.0
        i = bisect_right(ts, t) - 1
        s = (vs[i + 1] - vs[i]) / (ts[i + 1] - ts[i])
        return vs[i] + s * (t - ts[i])


def plateau(t_one: float, t_zero: float, log_R: float = 0.0, label: str = "") -> RadialTestFunction:
    """1 on the ball up to t_one, then linear down to 0 at t_zero."""
    return RadialTestFunction(
        1.0, ((float(t_one), 1.0), (float(t_zero), 0.0)), log_R, label
    )


def hat(a: float, m: float, b: float, log_R: float = 0.0, label: str = "") -> RadialTestFunction:
    """Tent supported on [a, b] with peak 1 at m; vanishes at the origin."""
    return RadialTestFunction(
        0.0, ((float(a), 0.0), (float(m), 1.0), (float(b), 0.0)), log_R, label
    )


def annular_plateau(
    a: float, b: float, c: float, d: float, log_R: float = 0.0, label: str = ""
) -> RadialTestFunction:
    """Trapezoid supported on the annulus [a, d], flat 1 on [b, c]."""
    return RadialTestFunction(
        0.0,
        ((float(a), 0.0), (float(b), 1.0), (float(c), 1.0), (float(d), 0.0)),
        log_R,
        label,
    )


def distribution_function(measure: RadialMeasure, ts: np.ndarray) -> np.ndarray:
    """t -> measure of the closed ball {log ||z|| <= t}, vectorized."""
    ts = np.asarray(ts, dtype=float)
    pos = np.array([t for t, _ in measure.atoms])
    mas = np.array([m for _, m in measure.atoms])
    cum = np.concatenate(([0.0], np.cumsum(mas)))
    idx = np.searchsorted(pos, ts, side="right")
    return measure.origin_mass + cum[idx]
