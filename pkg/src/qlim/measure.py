"""Bounded-support probability measures on the real line.

Two measure kinds are supported:

* :class:`DiscreteMeasure` -- a finite collection of weighted atoms with
  exact integer counts (the normalized counting measure of a tuple).
* :class:`AnalyticDistribution` -- a continuous law given by closed-form
  cdf and quantile callbacks plus support bounds.

The cdf is the right-continuous F(v) = P(-inf, v]; the quantile is the
generalized inverse Q(p) = min{v : F(v) >= p}, left-continuous on (0, 1)
for the discrete kind, and extended to the endpoints by the continuity
rule Q(0) = min support, Q(1) = max support.  Putting p = 0 into the
infimum formula would give -inf, so the endpoint rule is explicit.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass

__all__ = [
    "DiscreteMeasure",
    "AnalyticDistribution",
    "QuantileFunction",
    "empirical_from_samples",
    "from_value_counts",
    "cdf_eval",
    "quantile_eval",
    "support_bounds",
    "step_quantile",
    "analytic_quantile",
    "arcsine_law",
    "uniform_law",
]

# Recognize p*total that is an integer up to float rounding, so that the
# quantile at a node p = j/d lands exactly on the j-th sorted value even
# when j/d itself was rounded in binary.
_NODE_SNAP = 4.0 * 2.0**-53


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finite atomic measure with mass multiplicity/total at each value.

    ``values`` are strictly increasing (equal samples are merged into
    multiplicities at construction), ``cumulative`` caches the running
    integer counts so cdf and quantile evaluation never accumulate
    floating-point mass.
    """

    values: tuple[float, ...]
    multiplicities: tuple[int, ...]
    total: int
    cumulative: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.values:
            raise ValueError("empty sample set")
        if any(m <= 0 for m in self.multiplicities):
            raise ValueError("multiplicities must be positive")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("values must be strictly increasing")
        if sum(self.multiplicities) != self.total:
            raise ValueError("multiplicities do not sum to total")

    @property
    def atom_count(self) -> int:
        return len(self.values)

    def masses(self) -> list[float]:
        return [m / self.total for m in self.multiplicities]

    def blocks(self) -> Iterable[tuple[float, float, float]]:
        """Yield (p_lo, p_hi, value): the step quantile equals ``value``
        on the probability block (p_lo, p_hi]."""
        prev = 0
        for v, c in zip(self.values, self.cumulative):
            yield prev / self.total, c / self.total, v
            prev = c


@dataclass(frozen=True)
class AnalyticDistribution:
    """Continuous limit law given by evaluable cdf and quantile callbacks.

    The two callbacks are independent closed forms; their mutual
    consistency is a testable property, not an enforced constraint.
    """

    cdf: Callable[[float], float]
    quantile: Callable[[float], float]
    support_min: float
    support_max: float

    def __post_init__(self) -> None:
        if not self.support_min <= self.support_max:
            raise ValueError("support bounds out of order")


Measure = DiscreteMeasure | AnalyticDistribution


def empirical_from_samples(samples: Sequence[float]) -> DiscreteMeasure:
    """Normalized counting measure of a finite real tuple.

    Atoms sit exactly at the distinct sample values with mass equal to
    frequency/total; ties are merged so ordering ambiguities never arise
    downstream.
    """
    n = len(samples)
    if n == 0:
        raise ValueError("empty sample set")
    for s in samples:
        if not math.isfinite(s):
            raise ValueError("non-finite sample")
    ordered = sorted(float(s) for s in samples)
    values: list[float] = []
    mults: list[int] = []
    for v in ordered:
        if values and v == values[-1]:
            mults[-1] += 1
        else:
            values.append(v)
            mults.append(1)
    cum: list[int] = []
    running = 0
    for m in mults:
        running += m
        cum.append(running)
    return DiscreteMeasure(tuple(values), tuple(mults), n, tuple(cum))


def from_value_counts(pairs: Iterable[tuple[float, int]]) -> DiscreteMeasure:
    """Build a discrete measure from (value, count) pairs with exact
    integer counts; counts may be astronomically large (walk ensembles)."""
    items = sorted((float(v), int(c)) for v, c in pairs if c != 0)
    if not items:
        raise ValueError("empty sample set")
    values = []
    mults = []
    for v, c in items:
        if not math.isfinite(v):
            raise ValueError("non-finite sample")
        if c < 0:
            raise ValueError("negative count")
        if values and v == values[-1]:
            mults[-1] += c
        else:
            values.append(v)
            mults.append(c)
    cum = []
    running = 0
    for m in mults:
        running += m
        cum.append(running)
    return DiscreteMeasure(tuple(values), tuple(mults), running, tuple(cum))


def cdf_eval(m: Measure, v: float) -> float:
    """Right-continuous cumulative distribution function at ``v``."""
    if not math.isfinite(v):
        raise ValueError("non-finite value")
    if isinstance(m, AnalyticDistribution):
        return float(m.cdf(v))
    idx = bisect_right(m.values, v)
    if idx == 0:
        return 0.0
    return m.cumulative[idx - 1] / m.total


def quantile_eval(m: Measure, p: float) -> float:
    """Generalized inverse Q(p) = min{v : F(v) >= p}, with the endpoint
    extension Q(0) = min support and Q(1) = max support.

    For discrete measures the infimum is attained at an atom and is
    found by binary search over the exact cumulative counts.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("probability out of range")
    if isinstance(m, AnalyticDistribution):
        if p == 0.0:
            return m.support_min
        if p == 1.0:
            return m.support_max
        return float(m.quantile(p))
    if p == 0.0:
        return m.values[0]
    t = p * m.total
    r = round(t)
    if r >= 1 and abs(t - r) <= _NODE_SNAP * m.total:
        k = int(r)
    else:
        k = math.ceil(t)
    if k > m.total:
        k = m.total
    return m.values[bisect_left(m.cumulative, k)]


def support_bounds(m: Measure) -> tuple[float, float]:
    """Minimum and maximum of the support."""
    if isinstance(m, AnalyticDistribution):
        return m.support_min, m.support_max
    return m.values[0], m.values[-1]


@dataclass(frozen=True)
class QuantileFunction:
    """Evaluable quantile function, either the left-continuous step
    function of a discrete measure or an analytic closed form."""

    kind: str  # "step" | "analytic"
    source: Measure

    def __post_init__(self) -> None:
        if self.kind not in ("step", "analytic"):
            raise ValueError(f"unknown quantile kind {self.kind!r}")
        wants_discrete = self.kind == "step"
        if wants_discrete != isinstance(self.source, DiscreteMeasure):
            raise ValueError("quantile kind does not match source type")

    def __call__(self, p: float) -> float:
        return quantile_eval(self.source, p)


def step_quantile(m: DiscreteMeasure) -> QuantileFunction:
    return QuantileFunction("step", m)


def analytic_quantile(dist: AnalyticDistribution) -> QuantileFunction:
    return QuantileFunction("analytic", dist)


def arcsine_law() -> AnalyticDistribution:
    """The arcsine law on [0, 1]: F(v) = (2/pi) arcsin(sqrt(v)), whose
    quantile is the sine law Q(p) = sin^2(pi p / 2)."""

    def cdf(v: float) -> float:
        if v <= 0.0:
            return 0.0
        if v >= 1.0:
            return 1.0
        return (2.0 / math.pi) * math.asin(math.sqrt(v))

    def quantile(p: float) -> float:
        return math.sin(math.pi * p / 2.0) ** 2

    return AnalyticDistribution(cdf, quantile, 0.0, 1.0)


def uniform_law() -> AnalyticDistribution:
    """Uniform law on [0, 1]; both cdf and quantile are the identity."""

    def cdf(v: float) -> float:
        return min(1.0, max(0.0, v))

    def quantile(p: float) -> float:
        return p

    return AnalyticDistribution(cdf, quantile, 0.0, 1.0)
