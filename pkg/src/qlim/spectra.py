"""Dense Hermitian eigenvalues and singular values at desk scale.

The solver is a cyclic Jacobi iteration with complex rotations.  It is
dimension-free in accuracy (every rotation is an exact 2x2 unitary
similarity up to roundoff) and entirely adequate for the matrix sizes
this package targets (d <= 4096, experiments run at d <= 256).

Singular values are obtained from the eigenvalues of A^H A; this squares
the condition number, which is acceptable here because the experiments
need absolute accuracy around 1e-6 on values of order one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Spectrum",
    "NoConvergenceError",
    "hermitian_eigenvalues",
    "singular_values",
]

HERMITIAN_TOL = 1e-12
OFFDIAG_TOL = 1e-12
MAX_SWEEPS = 64


class NoConvergenceError(RuntimeError):
    """Jacobi sweep budget exhausted before the off-diagonal mass fell
    below threshold."""


@dataclass(frozen=True)
class Spectrum:
    """Ascending real spectrum with the solver residual at termination.

    ``residual`` is the off-diagonal Frobenius mass left when the sweep
    loop stopped; for singular values it also absorbs the magnitude of
    any negative eigenvalue of A^H A clamped to zero before the square
    root.
    """

    values: np.ndarray
    kind: str  # "eigenvalues" | "singular-values"
    residual: float

    def __post_init__(self) -> None:
        assert np.all(np.diff(self.values) >= 0), "spectrum not ascending"


def _offdiag_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def _jacobi_diagonalize(a: np.ndarray) -> tuple[np.ndarray, float]:
    """Cyclic Jacobi on a Hermitian matrix; returns (diagonal, residual)."""
    d = a.shape[0]
    if d == 1:
        return np.array([a[0, 0].real]), 0.0
    fro = float(np.linalg.norm(a))
    threshold = OFFDIAG_TOL * max(fro, np.finfo(float).tiny)
    for _ in range(MAX_SWEEPS):
        if _offdiag_norm(a) <= threshold:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                phase = apq / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                if tau != 0.0:
                    t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(tau, 1.0))
                else:
                    t = 1.0
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # Unitary G = I except G[pp]=c, G[pq]=s*phase,
                # G[qp]=-s*conj(phase), G[qq]=c; apply A <- G^H A G.
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * np.conj(phase) * col_q
                a[:, q] = s * phase * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * phase * row_q
                a[q, :] = s * np.conj(phase) * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    else:
        raise NoConvergenceError("no convergence")
    return np.diag(a).real.copy(), _offdiag_norm(a)


def hermitian_eigenvalues(a: np.ndarray) -> Spectrum:
    """All d eigenvalues of a Hermitian matrix, ascending, multiplicities
    included.

    The input must be Hermitian within 1e-12 (relative Frobenius); it is
    symmetrized to (A + A^H)/2 before the rotations start.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    scale = max(float(np.linalg.norm(a)), 1.0)
    if float(np.linalg.norm(a - a.conj().T)) > HERMITIAN_TOL * scale:
        raise ValueError("matrix not Hermitian")
    work = (a + a.conj().T) / 2.0
    diag, residual = _jacobi_diagonalize(work)
    return Spectrum(np.sort(diag), "eigenvalues", residual)


def singular_values(a: np.ndarray) -> Spectrum:
    """Ascending singular values of a general complex matrix, computed as
    square roots of the eigenvalues of A^H A with negatives (roundoff)
    clamped to zero."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if not np.all(np.isfinite(a.view(float))):
        raise ValueError("non-finite entries")
    normal = a.conj().T @ a
    normal = (normal + normal.conj().T) / 2.0
    diag, residual = _jacobi_diagonalize(normal)
    clamp = float(max(0.0, -diag.min())) if diag.size else 0.0
    vals = np.sqrt(np.clip(np.sort(diag), 0.0, None))
    return Spectrum(vals, "singular-values", max(residual, clamp))
