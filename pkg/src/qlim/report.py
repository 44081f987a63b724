"""Delimited output and vector figures for experiment runs.

CSV files carry the fixed schema ``n,node_error,interval_error,runtime_ms``
with six significant digits and are byte-deterministic for fixed rows.
Figures are rendered with matplotlib straight to SVG next to the CSV: a
scatter of (node, value) points, optionally a limit-quantile curve
sampled at 512 abscissae, x axis fixed to [0, 1], y range data-driven.
Above 4096 points, runs of consecutive points with equal ordinate are
glued into horizontal segments, which is what keeps the 2^30-point walk
pictures drawable.
"""

from __future__ import annotations

import os
from collections.abc import Callable, Sequence
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)
import numpy as np  # noqa: E402

from .experiments import ExperimentRow  # noqa: E402

__all__ = [
    "emit_csv",
    "emit_svg_scatter",
    "merge_equal_runs",
    "format_paper_table",
    "MERGE_THRESHOLD",
    "CURVE_SAMPLES",
]

MERGE_THRESHOLD = 4096
CURVE_SAMPLES = 512

plt.rcParams["svg.hashsalt"] = "qlim"


def _sig6(x: float) -> str:
    return f"{x:.6g}"


def emit_csv(rows: Sequence[ExperimentRow], path: str | os.PathLike) -> Path:
    """Write experiment rows; header plus one line per row, newline
    terminated.  Refuses an empty row list rather than writing a
    header-only file."""
    if not rows:
        raise ValueError("no rows to emit")
    path = Path(path)
    lines = ["n,node_error,interval_error,runtime_ms"]
    for row in rows:
        lines.append(
            f"{row.n},{_sig6(row.node_error)},{_sig6(row.interval_error)},{row.runtime_ms}"
        )
    path.write_text("\n".join(lines) + "\n", encoding="ascii")
    return path


def format_paper_table(rows: Sequence[ExperimentRow], style: str = "scientific") -> str:
    """Human-readable table at tabular precision: three decimals for the
    walk experiment, two significant digits in scientific notation for
    the small-error tables."""
    if style not in ("decimals", "scientific"):
        raise ValueError("style must be 'decimals' or 'scientific'")
    fmt = (lambda x: f"{x:.3f}") if style == "decimals" else (lambda x: f"{x:.1e}")
    header = "n       eps(n)"
    body = [f"{row.n:<8d}{fmt(row.node_error)}" for row in rows]
    return "\n".join([header, *body])


def merge_equal_runs(
    points: Sequence[tuple[float, float]],
) -> tuple[list[tuple[float, float]], list[tuple[float, float, float]]]:
    """Split a point list into isolated points and horizontal segments
    (x_start, x_end, y), one segment per maximal run of consecutive
    points sharing the same ordinate."""
    isolated: list[tuple[float, float]] = []
    segments: list[tuple[float, float, float]] = []
    i = 0
    n = len(points)
    while i < n:
        j = i
        y = points[i][1]
        while j + 1 < n and points[j + 1][1] == y:
            j += 1
        if j > i:
            segments.append((points[i][0], points[j][0], y))
        else:
            isolated.append(points[i])
        i = j + 1
    return isolated, segments


def emit_svg_scatter(
    points: Sequence[tuple[float, float]],
    path: str | os.PathLike,
    curve: Callable[[float], float] | None = None,
    segments: Sequence[tuple[float, float, float]] | None = None,
    title: str | None = None,
) -> Path:
    """Render a scatter-plus-curve figure to a standalone SVG document.

    ``segments`` lets callers pass pre-merged horizontal runs when the
    underlying point count is too large to materialize.
    """
    if not points and not segments:
        raise ValueError("nothing to plot")
    seg_list = list(segments) if segments else []
    pt_list = list(points)
    if len(pt_list) > MERGE_THRESHOLD:
        pt_list, merged = merge_equal_runs(pt_list)
        seg_list.extend(merged)
    fig, ax = plt.subplots(figsize=(4.8, 3.2))
    try:
        if curve is not None:
            grid = np.linspace(0.0, 1.0, CURVE_SAMPLES)
            ax.plot(grid, [curve(float(p)) for p in grid], color="0.55", lw=1.0, zorder=1)
        for x0, x1, y in seg_list:
            ax.plot([x0, x1], [y, y], color="tab:blue", lw=1.4, zorder=2)
        if pt_list:
            xs = [p[0] for p in pt_list]
            ys = [p[1] for p in pt_list]
            ax.plot(xs, ys, ".", color="tab:blue", ms=3.0, zorder=2)
        ax.set_xlim(0.0, 1.0)
        ax.set_xlabel("p")
        if title:
            ax.set_title(title, fontsize=10)
        fig.tight_layout()
        out = Path(path)
        fig.savefig(out, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    return out
