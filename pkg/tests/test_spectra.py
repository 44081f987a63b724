import math

import numpy as np
import pytest

from qlim.selfcheck import _char_poly_roots_2x2, _char_poly_roots_3x3
from qlim.spectra import hermitian_eigenvalues, singular_values
from qlim.toeplitz import SymbolSpec, toeplitz_matrix


def test_tridiagonal_closed_form():
    sym = SymbolSpec.from_coefficients({(0,): 2.0, (1,): -1.0, (-1,): -1.0}, real_valued=True)
    spec = hermitian_eigenvalues(toeplitz_matrix(sym, 3))
    expected = np.array([2 - math.sqrt(2), 2.0, 2 + math.sqrt(2)])
    assert np.max(np.abs(spec.values - expected)) < 1e-10


def test_identity_and_diagonal():
    spec = hermitian_eigenvalues(np.eye(5))
    assert np.allclose(spec.values, 1.0)
    spec = hermitian_eigenvalues(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(spec.values, [1.0, 2.0, 3.0])


def test_not_hermitian_rejected():
    bad = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(ValueError, match="matrix not Hermitian"):
        hermitian_eigenvalues(bad)


def test_singular_values_shift():
    sym = SymbolSpec.from_coefficients({(1,): 1.0})
    spec = singular_values(toeplitz_matrix(sym, 3))
    assert np.allclose(spec.values, [0.0, 1.0, 1.0], atol=1e-12)
    assert spec.kind == "singular-values"
    assert np.all(spec.values >= 0)


def test_singular_values_upper_2x2():
    spec = singular_values(np.array([[0.0, 2.0], [0.0, 0.0]]))
    assert np.allclose(spec.values, [0.0, 2.0], atol=1e-12)


def test_positive_definite_singulars_match_eigenvalues():
    a = np.diag([1.0, 2.0, 3.0])
    eigs = hermitian_eigenvalues(a).values
    sings = singular_values(a).values
    assert np.max(np.abs(eigs - sings)) < 1e-12


def test_closed_form_oracle_random():
    rng = np.random.default_rng(42)
    for _ in range(300):
        m = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        h = (m + m.conj().T) / 2
        assert np.max(np.abs(hermitian_eigenvalues(h).values - _char_poly_roots_2x2(h))) < 1e-10
        m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        h = (m + m.conj().T) / 2
        assert np.max(np.abs(hermitian_eigenvalues(h).values - _char_poly_roots_3x3(h))) < 1e-10


def test_conservation_laws():
    rng = np.random.default_rng(3)
    for _ in range(20):
        d = int(rng.integers(2, 10))
        m = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        h = (m + m.conj().T) / 2
        fro2 = float(np.linalg.norm(h) ** 2)
        norm = max(float(np.linalg.norm(h)), 1.0)
        spec = hermitian_eigenvalues(h)
        assert abs(spec.values.sum() - np.trace(h).real) <= 1e-9 * d * norm
        assert abs((spec.values**2).sum() - fro2) <= 1e-9 * d * norm**2
        sv = singular_values(m)
        fro2 = float(np.linalg.norm(m) ** 2)
        assert abs((sv.values**2).sum() - fro2) <= 1e-9 * d * max(fro2, 1.0)


def test_gershgorin_containment():
    rng = np.random.default_rng(5)
    for _ in range(25):
        d = int(rng.integers(2, 8))
        m = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        h = (m + m.conj().T) / 2
        spec = hermitian_eigenvalues(h)
        centers = np.diag(h).real
        radii = np.abs(h).sum(axis=1) - np.abs(np.diag(h))
        for lam in spec.values:
            assert np.any(np.abs(lam - centers) <= radii + 1e-9)


def test_permutation_invariance():
    rng = np.random.default_rng(8)
    a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    s1 = singular_values(a).values
    s2 = singular_values(a[::-1, :].copy()).values
    assert np.max(np.abs(s1 - s2)) < 1e-10


def test_residual_below_threshold():
    rng = np.random.default_rng(13)
    m = rng.standard_normal((12, 12))
    h = (m + m.T) / 2
    spec = hermitian_eigenvalues(h)
    assert spec.residual <= 1e-12 * np.linalg.norm(h)


def test_ascending_always():
    rng = np.random.default_rng(21)
    for _ in range(10):
        m = rng.standard_normal((7, 7)) + 1j * rng.standard_normal((7, 7))
        h = (m + m.conj().T) / 2
        assert np.all(np.diff(hermitian_eigenvalues(h).values) >= 0)
        assert np.all(np.diff(singular_values(m).values) >= 0)
