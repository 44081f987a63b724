import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qlim.measure import (
    AnalyticDistribution,
    arcsine_law,
    cdf_eval,
    empirical_from_samples,
    from_value_counts,
    quantile_eval,
    step_quantile,
    support_bounds,
    uniform_law,
)

WALK3 = [0, 0, 0, 1 / 3, 1 / 3, 2 / 3, 1, 1]


def test_empirical_merges_ties():
    m = empirical_from_samples(WALK3)
    assert m.values == (0.0, 1 / 3, 2 / 3, 1.0)
    assert m.multiplicities == (3, 2, 1, 2)
    assert m.total == 8


def test_empirical_point_mass():
    m = empirical_from_samples([5])
    assert m.values == (5.0,)
    assert m.total == 1
    assert support_bounds(m) == (5.0, 5.0)


def test_empirical_all_equal():
    m = empirical_from_samples([1, 1, 1, 1])
    assert m.values == (1.0,)
    assert m.multiplicities == (4,)
    assert m.total == 4


def test_empirical_errors():
    with pytest.raises(ValueError, match="empty sample set"):
        empirical_from_samples([])
    with pytest.raises(ValueError, match="non-finite sample"):
        empirical_from_samples([1.0, math.inf])
    with pytest.raises(ValueError, match="non-finite sample"):
        empirical_from_samples([math.nan])


def test_cdf_walk_values():
    m = empirical_from_samples(WALK3)
    assert cdf_eval(m, 0.0) == 3 / 8
    assert cdf_eval(m, 0.5) == 5 / 8
    assert cdf_eval(m, -1.0) == 0.0
    assert cdf_eval(m, 1.0) == 1.0


def test_quantile_nodes_recover_sorted_tuple():
    m = empirical_from_samples(WALK3)
    got = [quantile_eval(m, j / 8) for j in range(1, 9)]
    assert got == sorted(WALK3)
    assert quantile_eval(m, 0.0) == 0.0


def test_quantile_arcsine_median():
    assert abs(quantile_eval(arcsine_law(), 0.5) - 0.5) < 1e-15


def test_quantile_domain_errors():
    m = empirical_from_samples(WALK3)
    for bad in (-0.1, 1.1):
        with pytest.raises(ValueError, match="probability out of range"):
            quantile_eval(m, bad)


def test_support_bounds():
    assert support_bounds(empirical_from_samples(WALK3)) == (0.0, 1.0)
    assert support_bounds(arcsine_law()) == (0.0, 1.0)
    assert support_bounds(uniform_law()) == (0.0, 1.0)


def test_node_exactness_awkward_denominators():
    # j/d rounds upward in binary for many (j, d); the quantile must
    # still land on the j-th sorted value exactly
    for d in (3, 5, 7, 11, 49, 63, 97):
        samples = sorted(np.random.default_rng(d).uniform(-1, 1, size=d).tolist())
        m = empirical_from_samples(samples)
        for j in range(1, d + 1):
            assert quantile_eval(m, j / d) == samples[j - 1], (j, d)


def test_from_value_counts_large_totals():
    m = from_value_counts([(0.0, 1 << 61), (1.0, 1 << 61)])
    assert m.total == 1 << 62
    assert cdf_eval(m, 0.0) == 0.5
    assert quantile_eval(m, 0.25) == 0.0
    assert quantile_eval(m, 0.75) == 1.0


def test_step_quantile_kind_checks():
    m = empirical_from_samples(WALK3)
    q = step_quantile(m)
    assert q.kind == "step"
    assert q(3 / 8) == 0.0
    with pytest.raises(ValueError, match="does not match source"):
        from qlim.measure import QuantileFunction

        QuantileFunction("analytic", m)


def test_analytic_boundaries():
    law = arcsine_law()
    assert quantile_eval(law, 0.0) == 0.0
    assert quantile_eval(law, 1.0) == 1.0
    assert cdf_eval(law, -0.5) == 0.0
    assert cdf_eval(law, 1.0) == 1.0
    with pytest.raises(ValueError):
        AnalyticDistribution(lambda v: v, lambda p: p, 1.0, 0.0)


finite_floats = st.floats(
    min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False
)


@settings(max_examples=200, deadline=None)
@given(st.lists(finite_floats, min_size=1, max_size=40), st.floats(0, 1))
def test_galois_relations(samples, u):
    m = empirical_from_samples(samples)
    q = quantile_eval(m, u)
    # F(Q(u)) >= u
    assert cdf_eval(m, q) >= u
    # Q(F(v)) <= v wherever F(v) > 0
    for v in m.values:
        f = cdf_eval(m, v)
        if f > 0:
            assert quantile_eval(m, f) <= v


@settings(max_examples=200, deadline=None)
@given(
    st.lists(finite_floats, min_size=1, max_size=40),
    st.floats(1e-9, 1.0),
    finite_floats,
)
def test_galois_equivalence(samples, u, v):
    m = empirical_from_samples(samples)
    assert (quantile_eval(m, u) <= v) == (u <= cdf_eval(m, v))


@settings(max_examples=150, deadline=None)
@given(st.lists(finite_floats, min_size=1, max_size=30))
def test_distribution_of_quantile_is_cdf(samples):
    # Lebesgue measure of {u : Q(u) <= v}, summed from the jump sites,
    # equals F(v)
    m = empirical_from_samples(samples)
    probes = list(m.values) + [m.values[0] - 1.0, m.values[-1] + 1.0]
    for v in probes:
        covered = sum(
            mult for mult, value in zip(m.multiplicities, m.values) if value <= v
        )
        assert covered / m.total == cdf_eval(m, v)


@settings(max_examples=150, deadline=None)
@given(st.lists(finite_floats, min_size=1, max_size=30))
def test_boundary_properties(samples):
    m = empirical_from_samples(samples)
    alpha, beta = support_bounds(m)
    width = max(beta - alpha, 1.0)
    assert cdf_eval(m, alpha - 0.125 * width) == 0.0
    assert cdf_eval(m, alpha) == m.multiplicities[0] / m.total
    assert cdf_eval(m, beta) == 1.0
    assert quantile_eval(m, 0.0) == alpha
    assert quantile_eval(m, 1.0) == beta
    for p in (0.25, 0.5, 0.75):
        assert alpha <= quantile_eval(m, p) <= beta


def test_analytic_inverse_identity_on_connected_support():
    for law in (arcsine_law(), uniform_law()):
        for v in np.linspace(0.0, 1.0, 257):
            roundtrip = quantile_eval(law, cdf_eval(law, float(v)))
            assert abs(roundtrip - v) <= 1e-12
    point = from_value_counts([(5.0, 1)])
    assert quantile_eval(point, cdf_eval(point, 5.0)) == 5.0


def test_cdf_right_continuity_and_quantile_left_continuity():
    m = empirical_from_samples(WALK3)
    for v in m.values:
        assert cdf_eval(m, v) == cdf_eval(m, v + 1e-9)
    # no jump site of Q inside (p - eps, p]: value must not move
    assert quantile_eval(m, 0.5) == quantile_eval(m, 0.5 - 1e-4)
    assert quantile_eval(m, 5 / 8) == quantile_eval(m, 5 / 8 - 1e-4)
