"""Deterministic rendering of CSV curves into multi-panel figures.

Determinism requirements: fixed style (no rcParams leakage), a fixed SVG
hash salt so element ids do not vary, and no embedded timestamps.  Given
identical inputs the emitted SVG is byte-identical across runs.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib
matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .spec import FigureSpec, FigureSpecError  # noqa: E402

_STYLE = {
    "figure.dpi": 100,
    "savefig.dpi": 100,
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "svg.hashsalt": "plotkit",
    "lines.linewidth": 1.2,
    "axes.prop_cycle": plt.cycler(color=[
        "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]),
}


def read_columns(path: Path) -> dict[str, np.ndarray]:
    """Parse one CSV artifact into named float columns."""
    if not path.exists():
        raise FigureSpecError(f"input CSV {path} does not exist")
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FigureSpecError(f"input CSV {path} is empty") from None
        rows = list(reader)
    if not rows:
        raise FigureSpecError(f"input CSV {path} has a header but no data rows")
    data = np.array([[float(v) for v in row] for row in rows])
    return {name: data[:, i] for i, name in enumerate(header)}


def _column(table: dict[str, np.ndarray], name: str, path: Path) -> np.ndarray:
    if name not in table:
        raise FigureSpecError(
            f"column {name!r} not present in {path} (has: {', '.join(table)})")
    return table[name]


def render(spec: FigureSpec) -> Path:
    """Render the figure described by `spec`; returns the written path.

    All inputs are read and validated before any drawing starts, so a
    malformed spec never leaves a partial image behind.
    """
    tables = [read_columns(c.path) for c in spec.curves]
    series = []
    for curve, table in zip(spec.curves, tables):
        x = _column(table, spec.x_column, curve.path)
        ys = [_column(table, panel.column, curve.path) for panel in spec.panels]
        series.append((x, ys))

    n = len(spec.panels)
    with plt.rc_context(_STYLE):
        fig, axes = plt.subplots(n, 1, figsize=(6.4, 2.2 * n), sharex=True,
                                 squeeze=False)
        axes = axes[:, 0]
        for ip, (panel, ax) in enumerate(zip(spec.panels, axes)):
            for ic, (curve, (x, ys)) in enumerate(zip(spec.curves, series)):
                y = ys[ip]
                finite = np.isfinite(y)
                ax.plot(x[finite], y[finite], label=curve.label)
                if (ip, ic) in spec.slope_fits:
                    slope = _fit_slope(x[finite], y[finite])
                    ax.plot(x[finite], slope * x[finite], linestyle="--",
                            color="0.4", linewidth=0.9)
                    ax.annotate(f"slope {slope:.3f}",
                                xy=(0.02, 0.9), xycoords="axes fraction",
                                fontsize=8, color="0.25")
            ax.set_ylabel(panel.label)
            if panel.logy:
                ax.set_yscale("log")
        axes[0].legend(loc="best", fontsize=8)
        if spec.title:
            axes[0].set_title(spec.title)
        axes[-1].set_xlabel(spec.x_label)
        fig.tight_layout()
        spec.output.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(spec.output, format=spec.fmt, metadata=_metadata(spec.fmt))
        plt.close(fig)
    return spec.output


def _fit_slope(x: np.ndarray, y: np.ndarray) -> float:
    """Least-squares slope of y = s * x through the origin."""
    denom = float(np.dot(x, x))
    if denom == 0.0:
        raise FigureSpecError("slope fit needs nonzero x values")
    return float(np.dot(x, y) / denom)


def _metadata(fmt: str) -> dict | None:
    if fmt == "svg":
        return {"Date": None}
    return None
