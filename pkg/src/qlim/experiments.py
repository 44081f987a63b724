"""The three experiment families: random-walk sine law, Weyl
equidistribution, and the sums-of-products Toeplitz singular-value study,
plus the Riemann-sampling comparison that replaces quantile values by
sorted function samples.
"""

from __future__ import annotations

import math
import time
from bisect import insort
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from .convergence import error_report
from .measure import DiscreteMeasure, QuantileFunction, from_value_counts
from .spectra import singular_values
from .toeplitz import (
    MatrixExpr,
    evaluate_expr,
    symbol_modulus_quantile,
)

__all__ = [
    "WalkDistributionTable",
    "ExperimentRow",
    "HypothesisCheck",
    "arcsine_distribution",
    "enumerate_walk_counts",
    "sine_law_error",
    "weyl_fractional_parts",
    "weyl_sequence_error",
    "weyl_bound_scan",
    "riemann_compare",
    "asymptotic_sequence_error",
    "toeplitz_product_experiment",
    "toeplitz_product_details",
    "check_segment_hypothesis",
]

MAX_WALK_STEPS = 62  # counts fit exact signed 64-bit integers: 2^62 < 2^63
SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class WalkDistributionTable:
    """Exact distribution of the positive-time fraction over all 2^n sign
    walks: counts[j] walks spend exactly j of n steps with positive
    partial sum (strict positivity; a partial sum of zero does not
    count)."""

    n: int
    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.counts) != self.n + 1:
            raise ValueError("counts must have n+1 entries")
        if sum(self.counts) != 1 << self.n:
            raise ValueError("counts must sum to 2^n")

    def values(self) -> list[float]:
        return [j / self.n for j in range(self.n + 1)]

    def to_measure(self) -> DiscreteMeasure:
        return from_value_counts(
            (j / self.n, c) for j, c in enumerate(self.counts) if c > 0
        )


@dataclass(frozen=True)
class ExperimentRow:
    n: int
    node_error: float
    interval_error: float
    runtime_ms: int
    hypothesis_ok: bool | None = None


@dataclass(frozen=True)
class HypothesisCheck:
    """Numerical check of the segment-plus-norm hypothesis: the limit
    symbol's sampled range must look like [0, beta] (tiny minimum, no
    interior gap at grid scale) and every matrix norm must stay below
    beta."""

    beta: float
    min_value: float
    max_range_gap: float
    gap_tolerance: float
    range_ok: bool


def arcsine_distribution(n: int) -> WalkDistributionTable:
    """Exact counts of walks by positive-time fraction, via dynamic
    programming over (steps taken, partial sum, positive count).

    Equivalent by construction to enumerating all 2^n sign sequences;
    the state space is O(n^2) per step with O(1) transitions, so n = 62
    (the int64 limit) is instantaneous.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n > MAX_WALK_STEPS:
        raise ValueError("count overflow")
    # state[s + n, c]: walks after k steps with partial sum s and c
    # positive partial sums so far
    state = np.zeros((2 * n + 1, n + 1), dtype=np.int64)
    state[n, 0] = 1
    for _ in range(n):
        new = np.zeros_like(state)
        # step +1: sum offset rises by one; count rises where new sum > 0
        new[n + 1 :, 1:] += state[n:-1, :-1]
        new[1 : n + 1, :] += state[:n, :]
        # step -1: sum offset drops by one
        new[n + 1 : -1, 1:] += state[n + 2 :, :-1]
        new[: n + 1, :] += state[1 : n + 2, :]
        state = new
    counts = state.sum(axis=0)
    return WalkDistributionTable(n, tuple(int(c) for c in counts))


def enumerate_walk_counts(n: int) -> WalkDistributionTable:
    """Brute-force enumeration of all 2^n walks; exhaustive oracle for
    validating the dynamic program (practical up to n around 20)."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > 24:
        raise ValueError("enumeration limited to n <= 24")
    codes = np.arange(1 << n, dtype=np.uint32)
    bits = ((codes[:, None] >> np.arange(n)[None, :]) & 1).astype(np.int8)
    steps = 2 * bits - 1
    sums = np.cumsum(steps, axis=1, dtype=np.int32)
    positives = (sums > 0).sum(axis=1)
    counts = np.bincount(positives, minlength=n + 1)
    return WalkDistributionTable(n, tuple(int(c) for c in counts))


def _sine_quantile(p: float) -> float:
    return math.sin(math.pi * p / 2.0) ** 2


def sine_law_error(n: int) -> ExperimentRow:
    """Node and interval errors of the sorted positive-time fractions
    against the sine-law quantile sin^2(pi p / 2).

    The sorted tuple of length 2^n is constant on count blocks, and the
    comparison quantile is monotone, so the maximum deviation over a
    block is attained at the block's first or last index: 2(n+1)
    quantile evaluations replace 2^n of them.
    """
    start = time.perf_counter()
    table = arcsine_distribution(n)
    d = 1 << n
    node = 0.0
    interval = 0.0
    cum = 0
    for j_val, cnt in enumerate(table.counts):
        if cnt == 0:
            continue
        lo = cum + 1
        cum += cnt
        hi = cum
        value = j_val / n
        node = max(node, abs(value - _sine_quantile(lo / d)), abs(value - _sine_quantile(hi / d)))
        interval = max(
            interval,
            abs(value - _sine_quantile((lo - 1) / d)),
            abs(value - _sine_quantile(hi / d)),
        )
    elapsed = int(round((time.perf_counter() - start) * 1000))
    return ExperimentRow(n, node, max(interval, node), elapsed)


def weyl_fractional_parts(n: int) -> np.ndarray:
    """frac(j*sqrt(2)) for j = 1..n, unsorted.

    Double precision is ample: for n <= 1e5 the error in frac(j*sqrt 2)
    stays below 1e-10, three orders under the quantities reported.
    """
    if n < 1:
        raise ValueError("n must be positive")
    j = np.arange(1, n + 1, dtype=np.float64)
    return (j * SQRT2) % 1.0


def weyl_sequence_error(n: int) -> ExperimentRow:
    """Sorted Weyl sequence prefix against the identity quantile of the
    uniform limit law."""
    start = time.perf_counter()
    ordered = np.sort(weyl_fractional_parts(n))
    nodes = np.arange(1, n + 1) / n
    node = float(np.abs(ordered - nodes).max())
    interval = float(
        np.maximum(np.abs(ordered - nodes), np.abs(ordered - (nodes - 1.0 / n))).max()
    )
    elapsed = int(round((time.perf_counter() - start) * 1000))
    return ExperimentRow(n, node, max(interval, node), elapsed)


def weyl_bound_scan(n_max: int) -> float:
    """max over n in 2..n_max of node_error(n) * n / ln(n).

    Incremental insertion keeps the prefix sorted so each n costs one
    insort plus a vector scan.
    """
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    ordered: list[float] = [float(SQRT2 % 1.0)]
    worst = 0.0
    for n in range(2, n_max + 1):
        insort(ordered, float((n * SQRT2) % 1.0))
        arr = np.asarray(ordered)
        err = float(np.abs(arr - np.arange(1, n + 1) / n).max())
        worst = max(worst, err * n / math.log(n))
    return worst


def riemann_compare(
    x_map: Callable[[np.ndarray], np.ndarray] | Callable[[float], float],
    d: int,
    q_ref: QuantileFunction | Callable[[float], float],
    interval: tuple[float, float] = (0.0, 1.0),
) -> float:
    """Evaluate the map at the midpoints of the canonical d-partition of
    the interval, sort the values, and return the maximum deviation from
    q_ref at the nodes j/d.

    Any point of each subinterval would do for the limit statement; the
    midpoint is fixed here for reproducibility.
    """
    if d < 1:
        raise ValueError("d must be positive")
    lo, hi = interval
    xi = lo + (hi - lo) * (np.arange(1, d + 1) - 0.5) / d
    try:
        vals = np.asarray(x_map(xi), dtype=float)
        if vals.shape != xi.shape:
            raise TypeError
    except (TypeError, ValueError):
        vals = np.array([float(x_map(float(t))) for t in xi])
    vals = np.sort(vals)
    return float(max(abs(vals[j - 1] - q_ref(j / d)) for j in range(1, d + 1)))


def asymptotic_sequence_error(
    beta: Callable[[int], float],
    n: int,
    q_ref: QuantileFunction | Callable[[float], float],
) -> float:
    """Sort the first n terms of a bounded sequence and return the maximum
    deviation from q_ref at the nodes j/n; the generic driver behind the
    Weyl experiment."""
    if n < 1:
        raise ValueError("n must be positive")
    ordered = np.sort(np.array([float(beta(j)) for j in range(1, n + 1)]))
    return float(max(abs(ordered[j - 1] - q_ref(j / n)) for j in range(1, n + 1)))


def check_segment_hypothesis(q_lim: QuantileFunction, grid: int) -> HypothesisCheck:
    """Decide numerically whether the sampled limit values fill a segment
    [0, beta]: the minimum must be negligible and consecutive sorted
    values may not leave a gap much wider than the grid resolution."""
    m = q_lim.source
    assert isinstance(m, DiscreteMeasure)
    vals = np.asarray(m.values)
    beta = float(vals[-1])
    gap_tol = 32.0 * max(1.0, beta) / grid
    max_gap = float(np.diff(vals).max()) if vals.size > 1 else 0.0
    min_value = float(vals[0])
    range_ok = min_value <= gap_tol and max_gap <= gap_tol
    return HypothesisCheck(beta, min_value, max_gap, gap_tol, range_ok)


def toeplitz_product_details(
    expr: MatrixExpr,
    size_schedule: Sequence[int],
    quantile_grid: int,
    limit_expr: MatrixExpr | None = None,
    grid_refinement: int = 4,
) -> tuple[QuantileFunction, HypothesisCheck, list[tuple[ExperimentRow, np.ndarray]]]:
    """Full result of the sums-of-products study: the limit quantile, the
    segment-hypothesis verdict, and per size the row together with the
    ascending singular values (for plotting).

    ``limit_expr`` may supply the factors in sampled form when the
    matrix-side expression uses truncated coefficient maps of
    discontinuous symbols (truncation would smear the limit).  A failed
    hypothesis check flags the row but does not abort: the approximation
    may still be observed, or its failure is itself the point.
    """
    q_lim = symbol_modulus_quantile(limit_expr or expr, quantile_grid)
    hypothesis = check_segment_hypothesis(q_lim, quantile_grid ** (limit_expr or expr).levels)
    beta = hypothesis.beta
    norm_tol = 1e-8 * max(1.0, beta)
    detailed: list[tuple[ExperimentRow, np.ndarray]] = []
    for n in size_schedule:
        start = time.perf_counter()
        matrix = evaluate_expr(expr, n)
        spectrum = singular_values(matrix)
        report = error_report(spectrum.values, q_lim, grid_refinement)
        norm_ok = float(spectrum.values[-1]) <= beta + norm_tol
        elapsed = int(round((time.perf_counter() - start) * 1000))
        row = ExperimentRow(
            n=int(np.prod(np.atleast_1d(n))),
            node_error=report.node_error,
            interval_error=report.interval_error,
            runtime_ms=elapsed,
            hypothesis_ok=hypothesis.range_ok and norm_ok,
        )
        detailed.append((row, spectrum.values))
    return q_lim, hypothesis, detailed


def toeplitz_product_experiment(
    expr: MatrixExpr,
    size_schedule: Sequence[int],
    quantile_grid: int,
    limit_expr: MatrixExpr | None = None,
    grid_refinement: int = 4,
) -> list[ExperimentRow]:
    """Rows of the sums-of-products study; see toeplitz_product_details."""
    if not size_schedule:
        return []
    _, _, detailed = toeplitz_product_details(
        expr, size_schedule, quantile_grid, limit_expr, grid_refinement
    )
    return [row for row, _ in detailed]
