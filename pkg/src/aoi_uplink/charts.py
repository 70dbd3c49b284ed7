"""Static line charts rendered from tidy figure CSVs.

Charts are a pure function of the CSV contents: re-rendering from the same
file yields byte-identical output.
"""
from __future__ import annotations

import csv

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

_AXIS_LABELS = {
    "lam": "arrival rate per slot",
    "p": "transmission success rate",
    "omega": "node weight",
    "n": "number of nodes",
}


def render_chart(csv_path, png_path):
    """Plot every series in a tidy figure CSV against its sweep values."""
    with open(csv_path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ValueError(f"{csv_path}: no data rows to plot")

    figure = rows[0]["figure"]
    parameter = rows[0]["sweep_parameter"]
    series = {}
    for row in rows:
        series.setdefault(row["series"], []).append(row)

    fig, ax = plt.subplots(figsize=(7.0, 4.6))
    for label, points in series.items():
        points.sort(key=lambda r: float(r["sweep_value"]))
        x = [float(r["sweep_value"]) for r in points]
        y = [float(r["value"]) for r in points]
        ci = [float(r["ci95"]) if r["ci95"] else 0.0 for r in points]
        simulated = any(r["ci95"] for r in points)
        if simulated:
            ax.errorbar(x, y, yerr=ci, marker="o", markersize=4, capsize=2, label=label)
        else:
            ax.plot(x, y, linestyle="--", marker="s", markersize=3, label=label)

    ax.set_xlabel(_AXIS_LABELS.get(parameter, parameter))
    ax.set_ylabel("time-average weighted AoI")
    ax.set_title(figure)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    # strip the writer's version stamp so output bytes depend only on the CSV
    fig.savefig(png_path, dpi=120, metadata={"Software": None})
    plt.close(fig)
