#!/usr/bin/env python3
"""
Plot mitigation-lab result tables

Renders:
- sweep: probe mean (with standard error bars) against sigma/q_bar, one curve per N
- collapse: rescaled curves from collapsed.csv
- scan: collapse quality surface over (sigma_c, mu) from collapse_scan.csv

Usage:
    python scripts/plot_results.py sweep results/sweep_all_to_all/sweep.csv
    python scripts/plot_results.py collapse results/collapse/collapsed.csv
    python scripts/plot_results.py scan results/collapse/collapse_scan.csv --output scan.png
"""

import argparse
import sys
from pathlib import Path
from typing import Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402


def plot_sweep(table: pd.DataFrame, output: Path) -> None:
    fig, ax = plt.subplots(figsize=(7, 5))
    probe = table["probe"].iloc[0] if "probe" in table else "probe"
    for n, group in table.groupby("n"):
        group = group.sort_values("sigma_ratio")
        ax.errorbar(
            group["sigma_ratio"],
            group["mean"],
            yerr=group["stderr"],
            marker="o",
            capsize=3,
            label=f"N = {n}",
        )
    ax.set_xlabel(r"$\sigma / \bar{q}$")
    ax.set_ylabel(probe)
    ax.legend()
    ax.grid(alpha=0.3)
    _save(fig, output)


def plot_collapse(table: pd.DataFrame, output: Path) -> None:
    fig, ax = plt.subplots(figsize=(7, 5))
    for n, group in table.groupby("n"):
        group = group.sort_values("x_scaled")
        ax.plot(group["x_scaled"], group["y_scaled"], marker="o", label=f"N = {n}")
    ax.set_xlabel(r"$(\sigma/\bar{q} - \sigma_c/\bar{q})\, N^{\mu}$")
    ax.set_ylabel("rescaled probe")
    ax.legend()
    ax.grid(alpha=0.3)
    _save(fig, output)


def plot_scan(table: pd.DataFrame, output: Path) -> None:
    surface = table.pivot(index="mu", columns="sigma_c", values="quality")
    quality = np.log10(surface.to_numpy(float))
    fig, ax = plt.subplots(figsize=(7, 5))
    mesh = ax.pcolormesh(surface.columns, surface.index, quality, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label=r"$\log_{10}$ quality")
    best = table.loc[table["quality"].idxmin()]
    ax.plot(best["sigma_c"], best["mu"], "r*", markersize=14)
    ax.set_xlabel(r"$\sigma_c / \bar{q}$")
    ax.set_ylabel(r"$\mu$")
    _save(fig, output)


def _save(fig, output: Path) -> None:
    fig.tight_layout(pad=1.5)
    fig.savefig(output, dpi=200)
    plt.close(fig)
    print(f"Saved {output}")


PLOTTERS = {"sweep": plot_sweep, "collapse": plot_collapse, "scan": plot_scan}


def main(argv: Optional[list] = None) -> int:
    parser = argparse.ArgumentParser(description="Plot mitigation-lab result tables")
    parser.add_argument("kind", choices=sorted(PLOTTERS), help="Which table is being plotted")
    parser.add_argument("table", type=Path, help="CSV written by mitigation-lab")
    parser.add_argument("--output", "-o", type=Path, default=None, help="Image path (default: <table>.png)")
    args = parser.parse_args(argv)

    if not args.table.exists():
        print(f"Error: {args.table} not found", file=sys.stderr)
        return 1
    output = args.output or args.table.with_suffix(".png")
    PLOTTERS[args.kind](pd.read_csv(args.table), output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
