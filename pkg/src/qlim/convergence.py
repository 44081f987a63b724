"""Uniform-distance functionals between step quantiles and continuous limits.

The central quantities are the node error

    max_{1<=j<=d} |t_j - Q(j/d)|

of an ascending tuple (t_1, ..., t_d) against a limit quantile Q, and the
interval error in which the node j/d is replaced by the supremum over the
whole subinterval [(j-1)/d, j/d].  Because a step quantile and a monotone
continuous limit are both monotone, suprema over constancy blocks are
attained at block endpoints, so every functional here is computed exactly
by endpoint evaluation; ``grid_refinement`` adds interior probe points as
a defensive extra.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .measure import (
    AnalyticDistribution,
    DiscreteMeasure,
    QuantileFunction,
    cdf_eval,
    quantile_eval,
)

__all__ = [
    "ErrorReport",
    "PortmanteauReport",
    "quantile_sup_distance",
    "node_error",
    "interval_error",
    "error_report",
    "monotone_uniform_check",
    "portmanteau_check",
]

QuantileLike = QuantileFunction | Callable[[float], float]


@dataclass(frozen=True)
class ErrorReport:
    """Node and interval errors of one tuple, plus the 1-based index at
    which the node maximum is attained.  node_error <= interval_error
    always: each subinterval supremum dominates its right endpoint."""

    node_error: float
    interval_error: float
    argmax_index: int


def _check_ascending(tup: np.ndarray) -> None:
    if tup.size > 1 and np.any(np.diff(tup) < 0):
        raise ValueError("tuple not ascending")


def node_error(sorted_tuple: Sequence[float], q_lim: QuantileLike, d: int) -> float:
    """max over j in 1..d of |tuple[j] - q_lim(j/d)|."""
    tup = np.asarray(sorted_tuple, dtype=float)
    if tup.size != d:
        raise ValueError("tuple length does not match d")
    _check_ascending(tup)
    return max(abs(tup[j - 1] - q_lim(j / d)) for j in range(1, d + 1))


def interval_error(
    sorted_tuple: Sequence[float],
    q_lim: QuantileLike,
    d: int,
    grid_refinement: int = 4,
) -> float:
    """max over j of sup over u in [(j-1)/d, j/d] of |tuple[j] - q_lim(u)|.

    Monotonicity of q_lim puts the per-interval supremum at an endpoint;
    interior probes are evaluated anyway when grid_refinement > 0.
    """
    return error_report(sorted_tuple, q_lim, grid_refinement).interval_error


def error_report(
    sorted_tuple: Sequence[float],
    q_lim: QuantileLike,
    grid_refinement: int = 4,
) -> ErrorReport:
    """Compute node and interval errors in one pass."""
    if grid_refinement <= 0:
        raise ValueError("refinement must be positive")
    tup = np.asarray(sorted_tuple, dtype=float)
    d = tup.size
    if d == 0:
        raise ValueError("empty tuple")
    _check_ascending(tup)
    node = -1.0
    node_arg = 1
    interval = 0.0
    probes = np.linspace(0.0, 1.0, grid_refinement + 2)
    for j in range(1, d + 1):
        t = tup[j - 1]
        dev_node = abs(t - q_lim(j / d))
        if dev_node > node:
            node = dev_node
            node_arg = j
        lo = (j - 1) / d
        hi = j / d
        dev_iv = max(abs(t - q_lim(lo + (hi - lo) * s)) for s in probes)
        interval = max(interval, dev_iv)
    return ErrorReport(float(node), float(max(interval, node)), node_arg)


def quantile_sup_distance(
    q_step: QuantileFunction,
    q_lim: QuantileLike,
    grid_refinement: int = 4,
) -> float:
    """sup over p in [0, 1] of |q_step(p) - q_lim(p)| for a step quantile
    against a continuous monotone limit.

    The step function is constant on each block ((j-1+..)/total, c_j/total]
    of cumulative counts, and the monotone continuous limit attains its
    extreme deviation per block at the block endpoints, so evaluating
    q_lim at both endpoints of every block (plus interior probes) gives
    the supremum exactly up to the limit's modulus of continuity.
    """
    if grid_refinement <= 0:
        raise ValueError("refinement must be positive")
    if q_step.kind != "step":
        raise ValueError("q_step must be a step quantile")
    m = q_step.source
    assert isinstance(m, DiscreteMeasure)
    probes = np.linspace(0.0, 1.0, grid_refinement + 2)
    best = 0.0
    for p_lo, p_hi, value in m.blocks():
        for s in probes:
            p = p_lo + (p_hi - p_lo) * s
            best = max(best, abs(value - q_lim(p)))
    return float(best)


def monotone_uniform_check(
    f_family: Callable[[int], Callable[[float], float]],
    g: Callable[[float], float],
    index_list: Sequence[int],
    probe_grid: int,
) -> list[float]:
    """Probed sup of |f_n - g| over the grid {0, 1/probe_grid, ..., 1} for
    each index n.

    For a family of monotone maps converging pointwise to a continuous g,
    the returned deviations must decrease to zero; this is the harness the
    property tests drive.
    """
    if probe_grid <= 0:
        raise ValueError("probe grid must be positive")
    out = []
    grid = [j / probe_grid for j in range(probe_grid + 1)]
    for n in index_list:
        f = f_family(n)
        out.append(max(abs(f(p) - g(p)) for p in grid))
    return out


@dataclass(frozen=True)
class PortmanteauReport:
    """Per-probe deviation sequences |F_n(v) - F(v)| and |Q_n(p) - Q(p)|,
    with converged indicators (tail deviation below tolerance) and a
    consistency verdict between the cdf and quantile criteria."""

    cdf_deviations: dict[float, list[float]] = field(default_factory=dict)
    quantile_deviations: dict[float, list[float]] = field(default_factory=dict)
    cdf_converged: dict[float, bool] = field(default_factory=dict)
    quantile_converged: dict[float, bool] = field(default_factory=dict)
    consistent: bool = True


def portmanteau_check(
    m_seq: Sequence[DiscreteMeasure],
    limit: AnalyticDistribution,
    v_probes: Sequence[float],
    p_probes: Sequence[float],
    tolerance: float = 1e-3,
) -> PortmanteauReport:
    """Probe convergence in distribution through its two elementary faces:
    cdf convergence at continuity points and quantile convergence at
    continuity points.

    The checker reports deviations and threshold indicators; it does not
    certify a limit statement (no finite computation can), and it refuses
    quantile probes at 0 or 1 where the criterion does not apply.
    """
    for p in p_probes:
        if not 0.0 < p < 1.0:
            raise ValueError("quantile probe outside (0, 1)")
    cdf_dev: dict[float, list[float]] = {}
    q_dev: dict[float, list[float]] = {}
    cdf_ok: dict[float, bool] = {}
    q_ok: dict[float, bool] = {}
    for v in v_probes:
        seq = [abs(cdf_eval(m, v) - cdf_eval(limit, v)) for m in m_seq]
        cdf_dev[v] = seq
        cdf_ok[v] = bool(seq and seq[-1] < tolerance)
    for p in p_probes:
        seq = [abs(quantile_eval(m, p) - quantile_eval(limit, p)) for m in m_seq]
        q_dev[p] = seq
        q_ok[p] = bool(seq and seq[-1] < tolerance)
    consistent = True
    if cdf_ok and q_ok:
        consistent = all(cdf_ok.values()) == all(q_ok.values())
    return PortmanteauReport(cdf_dev, q_dev, cdf_ok, q_ok, consistent)
