"""CSV and SVG writers."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

plt.rcParams["svg.hashsalt"] = "esnnoise"


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "nan" if math.isnan(value) else "%.17g" % value
    return str(value)


def emit_csv(table: Sequence[Mapping[str, object]], path, columns: Optional[Sequence[str]] = None):
    """Write rows of dicts with a header line; floats keep 17 significant digits."""
    if not table:
        raise ValueError("refusing to write an empty table")
    columns = list(columns or table[0].keys())
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in table:
            writer.writerow([format_cell(row.get(c)) for c in columns])
    return path


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


@dataclass
class Series:
    label: str
    x: Sequence[float]
    y: Sequence[float]
    style: str = "line"  # or "scatter"


def emit_svg(series: Sequence[Series], axes: Mapping[str, str], path):
    """Minimal chart: one line or scatter per series, axis labels and a legend.

    ``axes`` may carry ``title``, ``xlabel``, ``ylabel`` and ``yscale``.
    """
    if not series or all(len(s.x) == 0 for s in series):
        raise ValueError("refusing to plot an empty series set")
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    try:
        for s in series:
            if s.style == "scatter":
                ax.scatter(s.x, s.y, s=6, label=s.label)
            else:
                ax.plot(s.x, s.y, lw=1.2, label=s.label)
        ax.set_xlabel(axes.get("xlabel", ""))
        ax.set_ylabel(axes.get("ylabel", ""))
        if axes.get("title"):
            ax.set_title(axes["title"])
        if axes.get("yscale"):
            ax.set_yscale(axes["yscale"])
        ax.legend(fontsize="small")
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    return path
