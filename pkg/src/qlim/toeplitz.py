"""Multilevel Toeplitz matrices from torus symbols, and matrix expressions
built as sums of products of Toeplitz factors.

A symbol is a bounded function on the k-torus, represented either by a
finite Fourier coefficient map on Z^k or by samples on the uniform N^k
grid.  The k-level Toeplitz matrix of a symbol has entries a_{i-j}
indexed by k-tuples, linearized row-major with the last dimension
fastest; its dimension is the product of the per-level sizes.

Matrix evaluation is dense on purpose: desk scale (d <= 4096, override
via the QLIM_MAX_DIM environment variable) keeps every entry auditable.
"""

from __future__ import annotations

import json
import math
import os
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from .measure import QuantileFunction, empirical_from_samples, step_quantile

__all__ = [
    "SymbolSpec",
    "MatrixExpr",
    "SymbolFormatError",
    "fourier_coefficients",
    "toeplitz_matrix",
    "evaluate_expr",
    "symbol_modulus_quantile",
    "parse_symbol_file",
    "max_matrix_dim",
    "gap_pair_coefficient_symbols",
    "gap_pair_callables",
    "gap_pair_expr",
    "gap_pair_sampled_expr",
]

DEFAULT_MAX_DIM = 4096
DEFAULT_CUTOFF = 64
TAIL_ENERGY_TOL = 1e-10
MIN_QUANTILE_GRID = 256


class SymbolFormatError(ValueError):
    """Raised when a symbol specification document cannot be parsed."""


def max_matrix_dim() -> int:
    raw = os.environ.get("QLIM_MAX_DIM")
    if raw is None:
        return DEFAULT_MAX_DIM
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"QLIM_MAX_DIM must be an integer, got {raw!r}") from exc
    if value <= 0:
        raise ValueError("QLIM_MAX_DIM must be positive")
    return value


@dataclass
class SymbolSpec:
    """A function on T^k, as a finite coefficient map or a sampled grid.

    Immutable by convention after construction.  ``real_valued`` symbols
    must satisfy the conjugate symmetry a_{-j} = conj(a_j), which is
    verified when the coefficients are given explicitly.
    """

    levels: int
    coefficients: dict[tuple[int, ...], complex] | None = None
    samples: np.ndarray | None = None
    real_valued: bool = False

    def __post_init__(self) -> None:
        if self.levels < 1:
            raise ValueError("levels must be positive")
        if (self.coefficients is None) == (self.samples is None):
            raise ValueError("exactly one representation required")
        if self.coefficients is not None:
            fixed: dict[tuple[int, ...], complex] = {}
            for idx, val in self.coefficients.items():
                key = tuple(int(i) for i in (idx if isinstance(idx, tuple) else (idx,)))
                if len(key) != self.levels:
                    raise ValueError("coefficient index arity mismatch")
                fixed[key] = complex(val)
            self.coefficients = fixed
            if self.real_valued:
                for idx, val in fixed.items():
                    neg = tuple(-i for i in idx)
                    if abs(fixed.get(neg, 0.0) - val.conjugate()) > 1e-12:
                        raise ValueError(
                            "real-valued symbol lacks conjugate symmetry"
                        )
        else:
            arr = np.asarray(self.samples, dtype=complex)
            n = round(arr.size ** (1.0 / self.levels))
            if n**self.levels != arr.size:
                raise ValueError("sample count is not a perfect grid")
            self.samples = arr.reshape((n,) * self.levels)

    @classmethod
    def from_coefficients(
        cls,
        coefficients: Mapping[tuple[int, ...] | int, complex],
        levels: int = 1,
        real_valued: bool = False,
    ) -> "SymbolSpec":
        return cls(levels, dict(coefficients), None, real_valued)

    @classmethod
    def from_samples(cls, values: np.ndarray, levels: int = 1) -> "SymbolSpec":
        return cls(levels, None, np.asarray(values, dtype=complex))

    @property
    def is_coefficient_map(self) -> bool:
        return self.coefficients is not None

    @property
    def grid_size(self) -> int:
        if self.samples is None:
            raise ValueError("symbol has no sampled grid")
        return self.samples.shape[0]

    def bandwidth(self) -> int:
        assert self.coefficients is not None
        return max((max(abs(i) for i in idx) for idx in self.coefficients), default=0)

    def to_coefficients(self, cutoff: int = DEFAULT_CUTOFF) -> "SymbolSpec":
        """Coefficient-map form of this symbol.

        Sampled symbols are truncated at |j_i| <= cutoff; the discarded
        spectral tail must carry at most 1e-10 of the total energy, else
        the truncation would silently change the symbol.
        """
        if self.coefficients is not None:
            return self
        assert self.samples is not None
        n = self.grid_size
        cutoff = min(cutoff, (n - 1) // 2)
        spec = np.fft.fftn(self.samples) / self.samples.size
        energy = float(np.sum(np.abs(spec) ** 2))
        coeffs: dict[tuple[int, ...], complex] = {}
        kept = 0.0
        for idx in np.ndindex(*(2 * cutoff + 1,) * self.levels):
            j = tuple(i - cutoff for i in idx)
            val = spec[tuple(jj % n for jj in j)]
            kept += abs(val) ** 2
            if val != 0:
                coeffs[j] = complex(val)
        if energy > 0 and energy - kept > TAIL_ENERGY_TOL * energy:
            raise ValueError(
                "discarded spectral tail exceeds 1e-10 of total energy; "
                "raise the cutoff or supply coefficients directly"
            )
        return SymbolSpec(self.levels, coeffs, None, self.real_valued)

    def evaluate_on_grid(self, grid: int) -> np.ndarray:
        """Symbol values on the uniform grid^k partition of T^k (angles
        2*pi*t/grid), synthesized from coefficients when necessary."""
        if self.samples is not None and self.grid_size == grid:
            return self.samples
        spec = self if self.coefficients is not None else self.to_coefficients()
        assert spec.coefficients is not None
        theta = 2.0 * math.pi * np.arange(grid) / grid
        basis = np.exp(1j * theta)
        out = np.zeros((grid,) * self.levels, dtype=complex)
        for idx, val in spec.coefficients.items():
            factor = val
            for axis, j in enumerate(idx):
                shape = [1] * self.levels
                shape[axis] = grid
                factor = factor * (basis**j).reshape(shape)
            out = out + factor
        return out


@dataclass
class MatrixExpr:
    """Formal sum of products of Toeplitz factors: each term is a list of
    symbols whose matrices are multiplied left to right, and the terms
    are added."""

    terms: list[list[SymbolSpec]]

    def __post_init__(self) -> None:
        if not self.terms or any(not t for t in self.terms):
            raise ValueError("expression needs at least one term, each with a factor")
        k = self.terms[0][0].levels
        if any(f.levels != k for t in self.terms for f in t):
            raise ValueError("all factors must share the same level count")

    @classmethod
    def single(cls, symbol: SymbolSpec) -> "MatrixExpr":
        return cls([[symbol]])

    @property
    def levels(self) -> int:
        return self.terms[0][0].levels


def fourier_coefficients(sym: SymbolSpec, cutoff: int) -> SymbolSpec:
    """Fourier coefficients of a sampled symbol up to |j_i| <= cutoff.

    Uniform grid quadrature is exact for band-limited symbols as long
    as the grid resolves the requested cutoff (N >= 2*cutoff + 1).
    """
    if cutoff <= 0:
        raise ValueError("cutoff must be positive")
    if sym.samples is None:
        raise ValueError("symbol is already a coefficient map")
    n = sym.grid_size
    if n < 2 * cutoff + 1:
        raise ValueError("aliasing risk")
    spec = np.fft.fftn(sym.samples) / sym.samples.size
    coeffs: dict[tuple[int, ...], complex] = {}
    for idx in np.ndindex(*(2 * cutoff + 1,) * sym.levels):
        j = tuple(i - cutoff for i in idx)
        val = complex(spec[tuple(jj % n for jj in j)])
        if val != 0:
            coeffs[j] = val
    return SymbolSpec(sym.levels, coeffs, None, sym.real_valued)


def _build_level(coeffs: Mapping[tuple[int, ...], complex], sizes: tuple[int, ...]) -> np.ndarray:
    m = sizes[0]
    if len(sizes) == 1:
        table = np.zeros(2 * m - 1, dtype=complex)
        for (j,), val in coeffs.items():
            if abs(j) <= m - 1:
                table[j + m - 1] = val
        i = np.arange(m)
        return table[i[:, None] - i[None, :] + m - 1]
    inner = math.prod(sizes[1:])
    grouped: dict[int, dict[tuple[int, ...], complex]] = {}
    for idx, val in coeffs.items():
        if abs(idx[0]) <= m - 1:
            grouped.setdefault(idx[0], {})[idx[1:]] = val
    blocks = {diff: _build_level(sub, sizes[1:]) for diff, sub in grouped.items()}
    out = np.zeros((m * inner, m * inner), dtype=complex)
    for i in range(m):
        for j in range(m):
            block = blocks.get(i - j)
            if block is not None:
                out[i * inner : (i + 1) * inner, j * inner : (j + 1) * inner] = block
    return out


def _normalize_sizes(spec_levels: int, sizes: Sequence[int] | int) -> tuple[int, ...]:
    tup = (sizes,) if isinstance(sizes, int) else tuple(int(s) for s in sizes)
    if len(tup) != spec_levels:
        raise ValueError("size tuple arity does not match symbol levels")
    if any(s <= 0 for s in tup):
        raise ValueError("sizes must be positive")
    d = math.prod(tup)
    if d > max_matrix_dim():
        raise ValueError("matrix too large")
    return tup


def toeplitz_matrix(sym: SymbolSpec, sizes: Sequence[int] | int) -> np.ndarray:
    """Dense k-level Toeplitz matrix with entry a_{i-j} at multi-indexed
    position (i, j); dimension is the product of the per-level sizes."""
    tup = _normalize_sizes(sym.levels, sizes)
    spec = sym.to_coefficients() if sym.samples is not None else sym
    assert spec.coefficients is not None
    return _build_level(spec.coefficients, tup)


def evaluate_expr(expr: MatrixExpr, sizes: Sequence[int] | int) -> np.ndarray:
    """Sum over terms of the left-to-right product of factor matrices."""
    tup = _normalize_sizes(expr.levels, sizes)
    d = math.prod(tup)
    out = np.zeros((d, d), dtype=complex)
    for term in expr.terms:
        acc = toeplitz_matrix(term[0], tup)
        for factor in term[1:]:
            acc = acc @ toeplitz_matrix(factor, tup)
        out += acc
    return out


def symbol_values_on_grid(expr: MatrixExpr, grid: int) -> np.ndarray:
    """Pointwise |sum of products of factor symbols| on the uniform grid."""
    total = np.zeros((grid,) * expr.levels, dtype=complex)
    for term in expr.terms:
        acc = np.ones((grid,) * expr.levels, dtype=complex)
        for factor in term:
            acc = acc * factor.evaluate_on_grid(grid)
        total += acc
    return np.abs(total)


def symbol_modulus_quantile(expr: MatrixExpr, grid: int) -> QuantileFunction:
    """Step quantile of |sum of products of the factor symbols| sampled on
    the uniform grid^k partition of T^k.

    For Riemann-integrable symbols whose modulus has connected essential
    range this converges uniformly to the limit quantile as the grid is
    refined, which is exactly the comparison function the singular-value
    experiments need.
    """
    if grid < MIN_QUANTILE_GRID:
        raise ValueError(f"grid must be at least {MIN_QUANTILE_GRID} per dimension")
    values = symbol_values_on_grid(expr, grid)
    measure = empirical_from_samples(values.ravel().tolist())
    return step_quantile(measure)


# ---------------------------------------------------------------------------
# Built-in factor family for the sums-of-products experiment.
#
# Both factors are real, even, discontinuous at |theta| = pi/2, and their
# ranges have gaps:
#
#   a(theta) = sigma/2 + (1/2)*[cos(theta) >= 0],  sigma = (1+cos(theta))/2,
#       range [0, 1/4) union [3/4, 1]
#   b(theta) = (5/4)|cos(theta/2)| - sqrt(2)*[cos(theta) >= 0],
#       range [-sqrt(2)/2 + ...] union [0, 5/(4 sqrt 2)) with a gap at 0-
#
# The jumps of a^2 and b^2 at |theta| = pi/2 cancel exactly (both have
# magnitude 1/2), so X = a^2 + b^2 is continuous on the torus, vanishes at
# theta = pi, and its essential range is the full segment [0, max X].
# Because T_n(f)^2 <= T_n(f^2) in the positive-semidefinite order for real
# symbols, B_n = T_n(a)^2 + T_n(b)^2 satisfies ||B_n|| <= max X, so the
# segment-plus-norm hypothesis of the singular-value approximation theorem
# holds with room to spare.
# ---------------------------------------------------------------------------

_SQRT2 = math.sqrt(2.0)


def gap_pair_callables() -> tuple[Callable[[np.ndarray], np.ndarray], Callable[[np.ndarray], np.ndarray]]:
    """The two factor symbols as vectorized functions of the angle."""

    def sym_a(theta: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        sigma = (1.0 + np.cos(theta)) / 2.0
        return sigma / 2.0 + 0.5 * (np.cos(theta) >= 0.0)

    def sym_b(theta: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        return 1.25 * np.abs(np.cos(theta / 2.0)) - _SQRT2 * (np.cos(theta) >= 0.0)

    return sym_a, sym_b


def _gap_coeff_a(j: int) -> float:
    # a = 1/4 + cos(theta)/4 + (1/2) * indicator(|theta| <= pi/2)
    if j == 0:
        return 0.5
    val = 0.5 * math.sin(j * math.pi / 2.0) / (math.pi * j)
    if abs(j) == 1:
        val += 0.125
    return val


def _gap_coeff_b(j: int) -> float:
    # b = (5/4)|cos(theta/2)| - sqrt(2) * indicator(|theta| <= pi/2);
    # |cos(theta/2)| = 2/pi + (4/pi) sum_k (-1)^(k+1) cos(k theta)/(4k^2-1)
    if j == 0:
        return 1.25 * 2.0 / math.pi - _SQRT2 * 0.5
    w = (2.0 / math.pi) * (-1.0) ** (abs(j) + 1) / (4.0 * j * j - 1.0)
    chi = math.sin(j * math.pi / 2.0) / (math.pi * j)
    return 1.25 * w - _SQRT2 * chi


def gap_pair_coefficient_symbols(cutoff: int) -> tuple[SymbolSpec, SymbolSpec]:
    """Exact Fourier coefficient maps of the two factors, |j| <= cutoff.

    A Toeplitz matrix of size n only reads coefficients with |j| <= n-1,
    so cutoff >= n-1 makes the matrices exact despite the jumps.
    """
    if cutoff < 1:
        raise ValueError("cutoff must be positive")
    ca = {(j,): complex(_gap_coeff_a(j)) for j in range(-cutoff, cutoff + 1)}
    cb = {(j,): complex(_gap_coeff_b(j)) for j in range(-cutoff, cutoff + 1)}
    return (
        SymbolSpec.from_coefficients(ca, real_valued=True),
        SymbolSpec.from_coefficients(cb, real_valued=True),
    )


def gap_pair_expr(cutoff: int) -> MatrixExpr:
    """T_n(a)^2 + T_n(b)^2 with exact factor coefficients."""
    sym_a, sym_b = gap_pair_coefficient_symbols(cutoff)
    return MatrixExpr([[sym_a, sym_a], [sym_b, sym_b]])


def gap_pair_sampled_expr(grid: int) -> MatrixExpr:
    """Same expression with factors sampled pointwise from the analytic
    formulas; used for the limit quantile, where coefficient truncation
    would smear the jumps."""
    fa, fb = gap_pair_callables()
    theta = 2.0 * math.pi * np.arange(grid) / grid
    sa = SymbolSpec.from_samples(fa(theta))
    sb = SymbolSpec.from_samples(fb(theta))
    return MatrixExpr([[sa, sa], [sb, sb]])


# ---------------------------------------------------------------------------
# Symbol specification documents (JSON).
# ---------------------------------------------------------------------------

def _parse_symbol(name: str, node: object) -> SymbolSpec:
    if not isinstance(node, dict):
        raise SymbolFormatError(f"symbol {name!r} must be an object")
    levels = node.get("levels", 1)
    if not isinstance(levels, int) or levels < 1:
        raise SymbolFormatError(f"symbol {name!r}: bad levels")
    rep = node.get("representation")
    real_valued = bool(node.get("real_valued", False))
    if rep == "coefficients":
        raw = node.get("coefficients")
        if not isinstance(raw, list) or not raw:
            raise SymbolFormatError(f"symbol {name!r}: coefficients list required")
        coeffs: dict[tuple[int, ...], complex] = {}
        for entry in raw:
            try:
                idx = tuple(int(i) for i in entry["index"])
                val = complex(float(entry.get("re", 0.0)), float(entry.get("im", 0.0)))
            except (KeyError, TypeError, ValueError) as exc:
                raise SymbolFormatError(
                    f"symbol {name!r}: bad coefficient entry {entry!r}"
                ) from exc
            if len(idx) != levels:
                raise SymbolFormatError(f"symbol {name!r}: index arity mismatch")
            coeffs[idx] = val
        try:
            return SymbolSpec(levels, coeffs, None, real_valued)
        except ValueError as exc:
            raise SymbolFormatError(f"symbol {name!r}: {exc}") from exc
    if rep == "sampled":
        grid = node.get("grid")
        raw_vals = node.get("values")
        if not isinstance(grid, int) or grid < 1:
            raise SymbolFormatError(f"symbol {name!r}: bad grid size")
        if not isinstance(raw_vals, list) or len(raw_vals) != grid**levels:
            raise SymbolFormatError(
                f"symbol {name!r}: values list must hold grid^levels entries"
            )
        vals = np.empty(len(raw_vals), dtype=complex)
        for i, entry in enumerate(raw_vals):
            if isinstance(entry, (int, float)):
                vals[i] = float(entry)
            elif isinstance(entry, list) and len(entry) == 2:
                vals[i] = complex(float(entry[0]), float(entry[1]))
            else:
                raise SymbolFormatError(
                    f"symbol {name!r}: value entries must be numbers or [re, im]"
                )
        try:
            return SymbolSpec(levels, None, vals.reshape((grid,) * levels), real_valued)
        except ValueError as exc:
            raise SymbolFormatError(f"symbol {name!r}: {exc}") from exc
    raise SymbolFormatError(
        f"symbol {name!r}: representation must be 'coefficients' or 'sampled'"
    )


def parse_symbol_file(text: str) -> MatrixExpr:
    """Parse a symbol specification document into a matrix expression.

    Schema: a top-level object with ``symbols`` mapping names to symbol
    objects ({levels, representation, ...}), and an optional ``expr`` of
    the form {"sum": [{"product": [name, ...]}, ...]}.  Without ``expr``
    the document must define exactly one symbol, used as a single-factor
    expression.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SymbolFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SymbolFormatError("top level must be an object")
    raw_symbols = doc.get("symbols")
    if not isinstance(raw_symbols, dict) or not raw_symbols:
        raise SymbolFormatError("'symbols' object required")
    symbols = {name: _parse_symbol(name, node) for name, node in raw_symbols.items()}
    expr_node = doc.get("expr")
    if expr_node is None:
        if len(symbols) != 1:
            raise SymbolFormatError("'expr' required when several symbols are defined")
        return MatrixExpr.single(next(iter(symbols.values())))
    if not isinstance(expr_node, dict) or "sum" not in expr_node:
        raise SymbolFormatError("'expr' must be an object with a 'sum' list")
    terms: list[list[SymbolSpec]] = []
    for term_node in expr_node["sum"]:
        if not isinstance(term_node, dict) or "product" not in term_node:
            raise SymbolFormatError("each term must be an object with a 'product' list")
        names = term_node["product"]
        if not isinstance(names, list) or not names:
            raise SymbolFormatError("each product needs at least one factor")
        factors = []
        for name in names:
            if name not in symbols:
                raise SymbolFormatError(f"unknown symbol {name!r} in expr")
            factors.append(symbols[name])
        terms.append(factors)
    try:
        return MatrixExpr(terms)
    except ValueError as exc:
        raise SymbolFormatError(str(exc)) from exc
