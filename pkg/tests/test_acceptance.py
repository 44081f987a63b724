"""End-to-end acceptance checks.

Each test prints one PASS/FAIL line (run with ``pytest -s`` to see them
all).  Reference values are frozen from exact enumeration, closed forms,
or the tabulated experiment results they reproduce.
"""

import math
import time

import numpy as np
import pytest

from qlim.cli import main
from qlim.convergence import monotone_uniform_check
from qlim.experiments import (
    arcsine_distribution,
    enumerate_walk_counts,
    riemann_compare,
    toeplitz_product_details,
    weyl_bound_scan,
    weyl_sequence_error,
)
from qlim.measure import (
    arcsine_law,
    cdf_eval,
    empirical_from_samples,
    quantile_eval,
    support_bounds,
    uniform_law,
)
from qlim.selfcheck import _char_poly_roots_2x2, _char_poly_roots_3x3
from qlim.spectra import hermitian_eigenvalues, singular_values
from qlim.toeplitz import (
    SymbolSpec,
    evaluate_expr,
    gap_pair_expr,
    gap_pair_sampled_expr,
    toeplitz_matrix,
)

SEED = 20260809


def _criterion(name: str, ok: bool, detail: str = "") -> None:
    line = f"{'PASS' if ok else 'FAIL'} {name}"
    if detail:
        line += f"  [{detail}]"
    print(line)
    assert ok, line


def _round_2sig(x: float) -> float:
    exp = math.floor(math.log10(abs(x)))
    return round(x, 1 - exp)


def test_sine_law_table(tmp_path):
    start = time.perf_counter()
    rc = main([
        "arcsine", "--sizes", "5,10,15,20,25,30",
        "--out", str(tmp_path), "--format", "csv",
    ])
    elapsed = time.perf_counter() - start
    assert rc == 0
    lines = (tmp_path / "arcsine.csv").read_text().splitlines()[1:]
    got = [float(line.split(",")[1]) for line in lines]
    expected = [0.300, 0.209, 0.164, 0.144, 0.126, 0.116]
    ok = all(abs(g - e) <= 5e-4 for g, e in zip(got, expected)) and len(got) == 6
    _criterion(
        "sine-law table n=5..30 within 5e-4",
        ok,
        f"{elapsed:.2f}s, values {[round(g, 4) for g in got]}",
    )


def test_arcsine_oracle_exact():
    start = time.perf_counter()
    ok = all(
        arcsine_distribution(n).counts == enumerate_walk_counts(n).counts
        for n in range(1, 17)
    )
    elapsed = time.perf_counter() - start
    _criterion("walk counts equal exhaustive enumeration, n<=16", ok, f"{elapsed:.2f}s")


def test_weyl_table(tmp_path):
    start = time.perf_counter()
    rc = main([
        "weyl", "--sizes", "32,64,128,512,1024",
        "--out", str(tmp_path), "--format", "csv",
    ])
    elapsed = time.perf_counter() - start
    assert rc == 0
    lines = (tmp_path / "weyl.csv").read_text().splitlines()[1:]
    got = {int(l.split(",")[0]): float(l.split(",")[1]) for l in lines}
    printed = {32: 4.6e-2, 64: 2.6e-2, 128: 1.1e-2, 512: 3.3e-3, 1024: 2.4e-3}
    ok = all(_round_2sig(got[n]) == printed[n] for n in printed)
    # the tabulated value at 256 disagrees with the computation by a
    # factor of ten; the computed value decides, the discrepancy is logged
    got256 = weyl_sequence_error(256).node_error
    r256 = _round_2sig(got256)
    note = ""
    if r256 == 5.6e-3:
        note = "n=256 computes to 5.6e-03, not the tabulated 5.6e-02 (factor-10 slip)"
    ok = ok and r256 in (5.6e-3, 5.6e-2)
    _criterion(
        "Weyl table at two significant figures",
        ok,
        f"{elapsed:.2f}s, n=256 -> {got256:.4e}; {note}",
    )


def test_weyl_bound():
    start = time.perf_counter()
    worst = weyl_bound_scan(10000)
    elapsed = time.perf_counter() - start
    _criterion(
        "Weyl bound max eps(n)*n/ln(n) <= 0.7 for n=2..10000",
        worst <= 0.7,
        f"{elapsed:.2f}s, worst ratio {worst:.4f}",
    )


def test_quantile_node_identity():
    rng = np.random.default_rng(SEED)
    ok = True
    for _ in range(1000):
        d = int(rng.integers(1, 80))
        if rng.random() < 0.5:
            samples = rng.uniform(-10, 10, size=d)
        else:
            pool = rng.uniform(-1, 1, size=max(1, d // 3))
            samples = rng.choice(pool, size=d)
        ordered = np.sort(samples)
        m = empirical_from_samples(samples.tolist())
        for j in range(1, d + 1):
            if quantile_eval(m, j / d) != ordered[j - 1]:
                ok = False
                break
        if not ok:
            break
    _criterion("quantile at nodes j/d returns the sorted tuple exactly", ok)


def test_galois_duality_suite():
    rng = np.random.default_rng(SEED + 1)
    ok = True
    detail = ""
    laws = [arcsine_law(), uniform_law()]
    try:
        for trial in range(1000):
            d = int(rng.integers(1, 40))
            samples = np.round(rng.uniform(-5, 5, size=d), 3)
            m = empirical_from_samples(samples.tolist())
            alpha, beta = support_bounds(m)
            gaps = np.diff(m.values)
            step = float(gaps.min()) / 3 if gaps.size else 0.25
            # right continuity of F, left continuity of Q
            for v in m.values[:: max(1, len(m.values) // 3)]:
                assert cdf_eval(m, v) == cdf_eval(m, v + step)
            for p_lo, p_hi, _ in list(m.blocks())[:3]:
                if p_hi - p_lo > 1e-9:
                    eps = (p_hi - p_lo) / 3
                    assert quantile_eval(m, p_hi) == quantile_eval(m, p_hi - eps)
            # dual inequalities and the equivalence
            for v in rng.uniform(alpha - 1, beta + 1, size=3):
                f = cdf_eval(m, float(v))
                if f > 0:
                    assert quantile_eval(m, f) <= v + 1e-12
                u = float(rng.uniform(1e-9, 1))
                assert (quantile_eval(m, u) <= v) == (u <= f)
            for u in rng.uniform(0, 1, size=3):
                assert cdf_eval(m, quantile_eval(m, float(u))) >= u - 1e-12
            # distribution of Q is F, from the jump sites
            v = float(rng.uniform(alpha - 0.5, beta + 0.5))
            covered = sum(
                mult for mult, val in zip(m.multiplicities, m.values) if val <= v
            )
            assert covered / m.total == cdf_eval(m, v)
            # boundary behavior
            assert cdf_eval(m, alpha - 1.0) == 0.0
            assert cdf_eval(m, beta) == 1.0
            assert quantile_eval(m, 0.0) == alpha
            assert quantile_eval(m, 1.0) == beta
        for law in laws:
            for v in np.linspace(0, 1, 101):
                assert abs(quantile_eval(law, cdf_eval(law, float(v))) - v) <= 1e-12
                assert cdf_eval(law, quantile_eval(law, float(v))) >= v - 1e-12
    except AssertionError as exc:
        ok = False
        detail = str(exc)
    _criterion("Galois and duality relations on 1000 random measures", ok, detail)


def test_spectra_oracles():
    rng = np.random.default_rng(SEED + 2)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        m2 = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        h2 = (m2 + m2.conj().T) / 2
        worst = max(
            worst,
            float(np.abs(hermitian_eigenvalues(h2).values - _char_poly_roots_2x2(h2)).max()),
        )
        m3 = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        h3 = (m3 + m3.conj().T) / 2
        worst = max(
            worst,
            float(np.abs(hermitian_eigenvalues(h3).values - _char_poly_roots_3x3(h3)).max()),
        )
    ok = worst <= 1e-10
    # tridiagonal reference
    tri = toeplitz_matrix(
        SymbolSpec.from_coefficients({(0,): 2.0, (1,): -1.0, (-1,): -1.0}), 3
    )
    expected = np.array([2 - math.sqrt(2), 2.0, 2 + math.sqrt(2)])
    ok = ok and np.abs(hermitian_eigenvalues(tri).values - expected).max() <= 1e-10
    # conservation on experiment matrices
    expr = gap_pair_expr(63)
    for n in (8, 16, 32, 64):
        b = evaluate_expr(expr, n)
        norm = max(float(np.linalg.norm(b)), 1.0)
        eigs = hermitian_eigenvalues(b)
        ok = ok and abs(eigs.values.sum() - np.trace(b).real) <= 1e-9 * n * norm
        sv = singular_values(b)
        ok = ok and abs((sv.values**2).sum() - norm**2) <= 1e-9 * n * norm**2
    elapsed = time.perf_counter() - start
    _criterion(
        "eigenvalue oracles and conservation laws",
        ok,
        f"{elapsed:.2f}s, worst closed-form gap {worst:.2e}",
    )


def test_toeplitz_product_study():
    start = time.perf_counter()
    expr = gap_pair_expr(255)
    limit = gap_pair_sampled_expr(4096)
    _, hypothesis, detailed = toeplitz_product_details(
        expr, [32, 64, 128, 256], 4096, limit_expr=limit
    )
    elapsed = time.perf_counter() - start
    errors = {row.n: row.node_error for row, _ in detailed}
    decreasing = all(
        errors[a] > errors[b] for a, b in ((32, 64), (64, 128), (128, 256))
    )
    halved = errors[256] < errors[64] / 2
    hypothesis_ok = hypothesis.range_ok and all(row.hypothesis_ok for row, _ in detailed)
    _criterion(
        "product study: errors strictly decreasing, 256 below half of 64, hypothesis holds",
        decreasing and halved and hypothesis_ok,
        f"{elapsed:.1f}s, errors {[round(errors[n], 4) for n in (32, 64, 128, 256)]}, "
        f"beta {hypothesis.beta:.4f}",
    )


def test_riemann_convergence_identity_reference():
    """Sorted midpoint samples of the arcsine cdf against the identity
    quantile, d doubling from 128 to 4096: monotone decrease holds, but
    the deviations approach sup |(2/pi)asin(sqrt p) - p| = 0.10525
    instead of zero, because the pushforward of the uniform law under
    the arcsine cdf is not uniform (its quantile is the arcsine cdf
    itself, not the identity).  The companion test below shows the
    pushforward comparator meeting the same schedule.  This check is
    kept in its stated form as an executable record and fails at the
    5e-3 threshold."""
    law = arcsine_law()
    x_map = np.vectorize(law.cdf)
    ds = [128, 256, 512, 1024, 2048, 4096]
    values = [riemann_compare(x_map, d, lambda p: p) for d in ds]
    monotone = all(b <= a + 1e-12 for a, b in zip(values, values[1:]))
    below = values[-1] < 5e-3
    _criterion(
        "Riemann comparison vs identity quantile below 5e-3 at d=4096",
        monotone and below,
        f"values {[round(v, 5) for v in values]}",
    )


def test_riemann_convergence_pushforward_comparator():
    # same schedule, mathematically consistent comparator: the quantile
    # of the pushforward measure, which for the arcsine cdf is the same
    # function again; deviations shrink like (2/pi)/sqrt(2 d) and cross
    # 5e-3 one doubling later, at d = 8192
    law = arcsine_law()
    x_map = np.vectorize(law.cdf)
    ds = [128, 256, 512, 1024, 2048, 4096, 8192]
    values = [riemann_compare(x_map, d, law.cdf) for d in ds]
    monotone = all(b <= a + 1e-12 for a, b in zip(values, values[1:]))
    _criterion(
        "Riemann comparison vs pushforward quantile decreases and reaches 5e-3 by d=8192",
        monotone and values[-2] < 1e-2 and values[-1] < 5e-3,
        f"values {[round(v, 5) for v in values]}",
    )


def test_monotone_family_harness():
    devs = monotone_uniform_check(
        lambda n: (lambda p: p ** (1 + 1 / n)),
        lambda p: p,
        [1, 10, 100, 1000],
        probe_grid=1000,
    )
    monotone = all(b < a for a, b in zip(devs, devs[1:]))
    _criterion(
        "monotone family probe: deviations decrease, n=1000 below 1e-3",
        monotone and devs[-1] < 1e-3,
        f"deviations {[f'{d:.2e}' for d in devs]}",
    )
