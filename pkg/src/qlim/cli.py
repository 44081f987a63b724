"""Command-line front end.

    qlim <command> [--sizes a,b,c] [--symbol-file PATH] [--out DIR]
                   [--format csv|svg|both] [--grid N] [--tolerance T]
                   [--paper-format] [--seed S]

Commands: arcsine, weyl, riemann, toeplitz, quantile, check.  Experiment
commands write ``<out>/<command>.csv`` and, when the format includes svg,
one figure per size next to it.  Exit codes: 0 success, 1 failed
invariants under ``check``, 2 unusable inputs or outputs, 3 solver
non-convergence.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import experiments, measure, report, selfcheck, toeplitz
from .convergence import error_report
from .spectra import NoConvergenceError
from .toeplitz import SymbolFormatError

__all__ = ["RunConfig", "build_parser", "run", "main"]


@dataclass
class RunConfig:
    command: str
    sizes: list[int] = field(default_factory=list)
    symbol_file: str | None = None
    output_dir: str = "."
    format: str = "both"
    tolerance: float = 1e-3
    quantile_grid: int = 4096
    paper_format: bool = False
    seed: int = 0
    measure_literal: str | None = None
    measure_file: str | None = None
    q_ref: str = "pushforward"


def _parse_sizes(text: str) -> list[int]:
    try:
        sizes = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from exc
    if not sizes or any(s < 1 for s in sizes):
        raise argparse.ArgumentTypeError("sizes must be positive integers")
    return sizes


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qlim",
        description="quantile convergence experiments for spectral and number-theoretic ensembles",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, sizes_required: bool = False) -> None:
        p.add_argument("--sizes", type=_parse_sizes, required=sizes_required,
                       help="comma-separated size schedule")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--format", choices=("csv", "svg", "both"), default="both")
        p.add_argument("--grid", type=int, default=4096, help="quantile grid resolution")
        p.add_argument("--tolerance", type=float, default=1e-3)
        p.add_argument("--paper-format", action="store_true",
                       help="print tables at tabular precision")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("arcsine", help="sine law for random walks")
    common(p, sizes_required=True)

    p = sub.add_parser("weyl", help="equidistribution of frac(j*sqrt 2)")
    common(p, sizes_required=True)

    p = sub.add_parser("riemann", help="sorted midpoint samples against a quantile")
    common(p, sizes_required=True)
    p.add_argument("--q-ref", choices=("pushforward", "identity"), default="pushforward",
                   help="comparison quantile for the sorted samples")

    p = sub.add_parser("toeplitz", help="singular values of sums of Toeplitz products")
    common(p, sizes_required=True)
    p.add_argument("--symbol-file", required=True, help="symbol specification (JSON)")

    p = sub.add_parser("quantile", help="evaluate and dump a quantile function")
    common(p)
    p.add_argument("--measure", dest="measure_literal",
                   help="comma-separated sample values")
    p.add_argument("--measure-file", help="sample file, one value per line")
    p.add_argument("--symbol-file", help="symbol specification (JSON)")

    p = sub.add_parser("check", help="run the invariant suite")
    common(p)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        sizes=list(getattr(args, "sizes", None) or []),
        symbol_file=getattr(args, "symbol_file", None),
        output_dir=args.out,
        format=args.format,
        tolerance=args.tolerance,
        quantile_grid=args.grid,
        paper_format=args.paper_format,
        seed=args.seed,
        measure_literal=getattr(args, "measure_literal", None),
        measure_file=getattr(args, "measure_file", None),
        q_ref=getattr(args, "q_ref", "pushforward"),
    )


def _out_dir(config: RunConfig) -> Path:
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _wants(config: RunConfig, kind: str) -> bool:
    return config.format in (kind, "both")


def _emit_rows(config: RunConfig, rows: list[experiments.ExperimentRow], name: str) -> None:
    if _wants(config, "csv"):
        path = report.emit_csv(rows, _out_dir(config) / f"{name}.csv")
        print(f"wrote {path}")


def _run_arcsine(config: RunConfig) -> int:
    rows = [experiments.sine_law_error(n) for n in config.sizes]
    _emit_rows(config, rows, "arcsine")
    if _wants(config, "svg"):
        sine = measure.arcsine_law().quantile
        for n in config.sizes:
            table = experiments.arcsine_distribution(n)
            d = 1 << n
            points: list[tuple[float, float]] = []
            segments: list[tuple[float, float, float]] = []
            cum = 0
            for j_val, cnt in enumerate(table.counts):
                if cnt == 0:
                    continue
                lo, hi = cum + 1, cum + cnt
                cum += cnt
                value = j_val / n
                if d <= report.MERGE_THRESHOLD:
                    points.extend((j / d, value) for j in range(lo, hi + 1))
                else:
                    segments.append((lo / d, hi / d, value))
            path = report.emit_svg_scatter(
                points,
                _out_dir(config) / f"arcsine_n{n}.svg",
                curve=sine,
                segments=segments or None,
                title=f"sorted positive-time fractions, n={n}",
            )
            print(f"wrote {path}")
    if config.paper_format:
        print(report.format_paper_table(rows, style="decimals"))
    return 0


def _run_weyl(config: RunConfig) -> int:
    rows = [experiments.weyl_sequence_error(n) for n in config.sizes]
    _emit_rows(config, rows, "weyl")
    n_max = max(config.sizes)
    if n_max >= 2:
        ratio = experiments.weyl_bound_scan(n_max)
        print(f"bound scan: max over n=2..{n_max} of eps(n)*n/ln(n) = {ratio:.6g}")
    if _wants(config, "svg"):
        for n in config.sizes:
            ordered = np.sort(experiments.weyl_fractional_parts(n))
            points = [(j / n, float(ordered[j - 1])) for j in range(1, n + 1)]
            path = report.emit_svg_scatter(
                points,
                _out_dir(config) / f"weyl_n{n}.svg",
                curve=lambda p: p,
                title=f"sorted frac(j*sqrt 2), n={n}",
            )
            print(f"wrote {path}")
    if config.paper_format:
        print(report.format_paper_table(rows, style="scientific"))
    return 0


def _run_riemann(config: RunConfig) -> int:
    law = measure.arcsine_law()
    x_map = np.vectorize(law.cdf)
    q_ref = law.cdf if config.q_ref == "pushforward" else (lambda p: p)
    rows = []
    last_sorted: np.ndarray | None = None
    for d in config.sizes:
        start = time.perf_counter()
        xi = (np.arange(1, d + 1) - 0.5) / d
        ordered = np.sort(np.asarray(x_map(xi), dtype=float))
        rep = error_report(ordered, q_ref)
        elapsed = int(round((time.perf_counter() - start) * 1000))
        rows.append(experiments.ExperimentRow(d, rep.node_error, rep.interval_error, elapsed))
        last_sorted = ordered
    _emit_rows(config, rows, "riemann")
    if _wants(config, "svg") and last_sorted is not None:
        d = rows[-1].n
        points = [(j / d, float(last_sorted[j - 1])) for j in range(1, d + 1)]
        path = report.emit_svg_scatter(
            points,
            _out_dir(config) / f"riemann_d{d}.svg",
            curve=q_ref,
            title=f"sorted midpoint samples, d={d} ({config.q_ref} reference)",
        )
        print(f"wrote {path}")
    if config.paper_format:
        print(report.format_paper_table(rows, style="scientific"))
    return 0


def _run_toeplitz(config: RunConfig) -> int:
    assert config.symbol_file is not None
    try:
        text = Path(config.symbol_file).read_text(encoding="utf-8")
    except OSError as exc:
        raise SymbolFormatError(f"cannot read symbol file: {exc}") from exc
    expr = toeplitz.parse_symbol_file(text)
    q_lim, hypothesis, detailed = experiments.toeplitz_product_details(
        expr, config.sizes, config.quantile_grid
    )
    rows = [row for row, _ in detailed]
    verdict = "holds" if hypothesis.range_ok else "violated"
    print(
        f"segment hypothesis {verdict}: beta={hypothesis.beta:.6g} "
        f"min={hypothesis.min_value:.3g} max_gap={hypothesis.max_range_gap:.3g}"
    )
    for row in rows:
        flag = "ok" if row.hypothesis_ok else "WARNING: hypothesis check failed"
        print(f"n={row.n}: node={row.node_error:.6g} interval={row.interval_error:.6g} [{flag}]")
    _emit_rows(config, rows, "toeplitz")
    if _wants(config, "svg"):
        for row, values in detailed:
            n = row.n
            points = [(j / n, float(values[j - 1])) for j in range(1, n + 1)]
            path = report.emit_svg_scatter(
                points,
                _out_dir(config) / f"toeplitz_n{n}.svg",
                curve=q_lim,
                title=f"singular values vs limit quantile, n={n}",
            )
            print(f"wrote {path}")
    if config.paper_format:
        print(report.format_paper_table(rows, style="scientific"))
    return 0


def _load_quantile(config: RunConfig) -> measure.QuantileFunction:
    sources = [
        s for s in (config.measure_literal, config.measure_file, config.symbol_file)
        if s is not None
    ]
    if len(sources) != 1:
        raise SymbolFormatError(
            "quantile needs exactly one of --measure, --measure-file, --symbol-file"
        )
    if config.measure_literal is not None:
        try:
            samples = [float(part) for part in config.measure_literal.split(",") if part.strip()]
        except ValueError as exc:
            raise SymbolFormatError(f"bad measure literal: {exc}") from exc
        return measure.step_quantile(measure.empirical_from_samples(samples))
    if config.measure_file is not None:
        try:
            text = Path(config.measure_file).read_text(encoding="utf-8")
        except OSError as exc:
            raise SymbolFormatError(f"cannot read measure file: {exc}") from exc
        try:
            samples = [float(line) for line in text.split() if line.strip()]
        except ValueError as exc:
            raise SymbolFormatError(f"bad measure file: {exc}") from exc
        return measure.step_quantile(measure.empirical_from_samples(samples))
    assert config.symbol_file is not None
    try:
        text = Path(config.symbol_file).read_text(encoding="utf-8")
    except OSError as exc:
        raise SymbolFormatError(f"cannot read symbol file: {exc}") from exc
    expr = toeplitz.parse_symbol_file(text)
    return toeplitz.symbol_modulus_quantile(expr, config.quantile_grid)


def _run_quantile(config: RunConfig) -> int:
    q = _load_quantile(config)
    grid = config.quantile_grid
    out = _out_dir(config)
    values = [(j / grid, q(j / grid)) for j in range(1, grid + 1)]
    if _wants(config, "csv"):
        path = out / "quantile.csv"
        lines = ["p,quantile"]
        lines.extend(f"{p:.10g},{v:.10g}" for p, v in values)
        path.write_text("\n".join(lines) + "\n", encoding="ascii")
        print(f"wrote {path}")
    if _wants(config, "svg"):
        path = report.emit_svg_scatter(
            values, out / "quantile.svg", title="quantile function"
        )
        print(f"wrote {path}")
    return 0


def _run_check(config: RunConfig) -> int:
    results = selfcheck.run_all(config.seed, tolerance=config.tolerance)
    return 0 if all(r.passed for r in results) else 1


_HANDLERS = {
    "arcsine": _run_arcsine,
    "weyl": _run_weyl,
    "riemann": _run_riemann,
    "toeplitz": _run_toeplitz,
    "quantile": _run_quantile,
    "check": _run_check,
}


def run(config: RunConfig) -> int:
    for n in config.sizes:
        if config.command == "arcsine" and n > experiments.MAX_WALK_STEPS:
            raise ValueError("count overflow")
    return _HANDLERS[config.command](config)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = _config_from_args(args)
    try:
        return run(config)
    except NoConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        # SymbolFormatError and any other unusable input or output
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
