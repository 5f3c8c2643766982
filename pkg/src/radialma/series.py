"""Diagnostic series: indexed value sequences with a convergence flag.

Condition checkers and convergence harnesses all emit the same shape: a
sequence (j, value) over a schedule, a flag saying where the tail is
heading, and metadata recording how the flag was decided.  The flag
rule, on the finite entries:

  converging-to-positive  last three values agree to 1e-6 relative and
                          exceed eps0 = 1e-6 * (first value + 1)
  converging-to-zero      tail is nonincreasing and the extrapolated
                          limit (Aitken delta-squared on the last three
                          values) is below eps0 in absolute value
  inconclusive            anything else

Aitken's delta-squared is exact for v_j = c + a * rho^i, which is what a
power-law tail c + a * j^(-beta) becomes on a geometric schedule, so the
zero flag still fires when the values themselves are far from zero but
extrapolate there.  Entries recorded as inf (a sublevel set that filled
the whole ball) are excluded from the fit and noted in the metadata.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

CONVERGING_TO_ZERO = "converging-to-zero"
CONVERGING_TO_POSITIVE = "converging-to-positive"
INCONCLUSIVE = "inconclusive"

_REL_AGREE = 1e-6


def geometric_schedule(j_max: int = 1024) -> tuple[int, ...]:
    """Powers of two up to j_max: 1, 2, 4, ..."""
    if j_max < 1:
        raise ValueError("j_max must be >= 1")
    out = []
    j = 1
    while j <= j_max:
        out.append(j)
        j *= 2
    return tuple(out)


def _aitken_limit(v3: float, v2: float, v1: float) -> float:
    """Extrapolated limit from the last three values (v1 most recent)."""
    d1 = v2 - v3
    d2 = v1 - v2
    scale = max(abs(v1), abs(v2), abs(v3), 1.0)
    if abs(d2) <= 1e-14 * scale:
        return v1  # already stabilized
    dd = d2 - d1
    if abs(dd) <= 1e-14 * scale:
        return v1  # no curvature to extrapolate from
    return v1 - d2 * d2 / dd


def decide_flag(values: list[float]) -> tuple[str, dict]:
    """Flag a nonnegative series tail; returns (flag, fit metadata)."""
    finite = [v for v in values if math.isfinite(v)]
    meta: dict = {"dropped_infinite": len(values) - len(finite)}
    if len(finite) < 3:
        meta["reason"] = "fewer than three finite entries"
        return INCONCLUSIVE, meta
    eps0 = 1e-6 * (finite[0] + 1.0)
    meta["eps0"] = eps0
    last3 = finite[-3:]
    spread = max(last3) - min(last3)
    scale = max(abs(x) for x in last3)
    if spread <= _REL_AGREE * max(scale, 1e-300) and finite[-1] > eps0:
        meta["limit"] = finite[-1]
        return CONVERGING_TO_POSITIVE, meta
    tail = finite[len(finite) // 2 :]
    slack = 1e-12 * (abs(finite[0]) + 1.0)
    nonincreasing = all(
        tail[i + 1] <= tail[i] + slack for i in range(len(tail) - 1)
    )
    meta["tail_nonincreasing"] = nonincreasing
    if not nonincreasing:
        return INCONCLUSIVE, meta
    limit = _aitken_limit(*finite[-3:])
    meta["limit"] = limit
    # decay-rate estimate from successive tail differences, metadata only
    diffs = [tail[i] - tail[i + 1] for i in range(len(tail) - 1)]
    pos = [d for d in diffs if d > 0.0]
    if len(pos) >= 2:
        first, last = pos[0], pos[-1]
        if first > 0 and last > 0 and len(pos) > 1:
            meta["decay_ratio"] = (last / first) ** (1.0 / (len(pos) - 1))
    if abs(limit) < eps0:
        return CONVERGING_TO_ZERO, meta
    return INCONCLUSIVE, meta


@dataclass(frozen=True)
class DiagnosticSeries:
    """An indexed series with its convergence flag.

    ``entries`` are (index, value) pairs in schedule order.  When the
    series tracks an integral against a known target, the flag is
    decided on the deviations |value - target| and ``target`` is stored
    in the metadata; a mass series is flagged on the raw values.
    """

    index_name: str
    entries: tuple[tuple[float, float], ...]
    flag: str
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.flag not in (
            CONVERGING_TO_ZERO,
            CONVERGING_TO_POSITIVE,
            INCONCLUSIVE,
        ):
            raise ValueError(f"unknown flag {self.flag!r}")
        for (j0, _), (j1, _) in zip(self.entries, self.entries[1:]):
            if not j1 > j0:
                raise ValueError(f"series indices must increase: {j0} -> {j1}")
        for j, v in self.entries:
            if math.isnan(v):
                raise ValueError(f"series value at {j} is NaN")
            if math.isfinite(v) and v < 0.0 and not self.metadata.get("signed"):
                raise ValueError(f"mass series went negative at {j}: {v}")

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(v for _, v in self.entries)

    @property
    def indices(self) -> tuple[float, ...]:
        return tuple(j for j, _ in self.entries)

    def to_csv(self) -> str:
        lines = [f"{self.index_name},value,flag"]
        for j, v in self.entries:
            ix = int(j) if float(j).is_integer() else j
            lines.append(f"{ix},{v!r},{self.flag}")
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "index_name": self.index_name,
            "entries": [[j, v] for j, v in self.entries],
            "flag": self.flag,
            "metadata": self.metadata,
        }


def build_series(
    index_name: str,
    entries,
    target: float | None = None,
    extra_metadata: dict | None = None,
) -> DiagnosticSeries:
    """Assemble a DiagnosticSeries, deciding the flag automatically.

    With a ``target`` the flag reads the deviations |value - target|
    (converging-to-zero then means the series reaches the target); the
    raw values are what get stored either way.
    """
    pairs = tuple((float(j), float(v)) for j, v in entries)
    if target is None:
        flagged = [v for _, v in pairs]
    else:
        flagged = [
            abs(v - target) if math.isfinite(v) else v for _, v in pairs
        ]
    flag, meta = decide_flag(flagged)
    if target is not None:
        meta["target"] = target
        meta["flag_reads"] = "abs(value - target)"
        meta["signed"] = True
    if extra_metadata:
        meta.update(extra_metadata)
    return DiagnosticSeries(index_name, pairs, flag, meta)
