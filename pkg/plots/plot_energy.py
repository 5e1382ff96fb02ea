#!/usr/bin/env python3
"""Render energy-compaction figures from a sweep energy CSV.

One line per transform, x = number of retained coefficients k,
y = cumulative energy fraction E(k).  Without a --block-size filter the
figure gets one panel per block size.

Usage:
    plot_energy.py --csv energy.csv [--image ID] [--block-size N] --out e.png

Exit codes: 0 success, 1 empty selection, 2 schema or invocation problems.
"""

from __future__ import annotations

import argparse
import sys

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from rdcsv import ENERGY_COLUMNS, SchemaError, load_rows, select, transforms_present

_STYLE = {
    "DCT": dict(color="tab:blue"),
    "Hadamard": dict(color="tab:orange"),
    "PCA": dict(color="tab:green"),
}


def _series(rows: list[dict[str, str]], transform: str) -> list[tuple[int, float]]:
    """(k, mean E(k)) for one transform, averaged across selected images."""
    by_k: dict[int, list[float]] = {}
    for row in rows:
        if row["transform"] != transform:
            continue
        by_k.setdefault(int(row["k"]), []).append(float(row["energy_fraction"]))
    return [(k, sum(values) / len(values)) for k, values in sorted(by_k.items())]


def build_energy_figure(
    rows: list[dict[str, str]],
    image: str | None = None,
    block_size: int | None = None,
):
    """Build the figure; raises ValueError when nothing matches the filter."""
    selected = select(rows, image=image, block_size=block_size)
    if not selected:
        raise ValueError("no rows match the requested image/block-size filter")

    panel_sizes = sorted({int(r["block_size"]) for r in selected})
    if len(panel_sizes) == 4:
        fig, axes = plt.subplots(2, 2, figsize=(11, 8), sharey=True)
        axes = axes.reshape(-1)
    else:
        fig, axes = plt.subplots(
            1, len(panel_sizes), figsize=(5.5 * len(panel_sizes), 4.2), squeeze=False
        )
        axes = axes.reshape(-1)

    for axis, n in zip(axes, panel_sizes):
        panel_rows = [r for r in selected if int(r["block_size"]) == n]
        for transform in transforms_present(panel_rows):
            points = _series(panel_rows, transform)
            axis.plot(
                [k for k, _ in points],
                [value for _, value in points],
                label=transform,
                **_STYLE.get(transform, {}),
            )
        axis.set_title(f"{n}x{n} blocks")
        axis.set_xlabel("retained coefficients k")
        axis.set_ylabel("cumulative energy fraction")
        axis.set_ylim(-0.02, 1.05)
        axis.grid(True, alpha=0.3)
        axis.legend()
    title = "Energy compaction"
    if image is not None:
        title += f" - {image}"
    fig.suptitle(title)
    fig.tight_layout()
    return fig


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--csv", required=True, help="sweep energy CSV")
    parser.add_argument("--image", help="restrict to one image id")
    parser.add_argument("--block-size", type=int, help="restrict to one block size")
    parser.add_argument("--out", required=True, help="output figure path")
    args = parser.parse_args(argv)

    try:
        rows = load_rows(args.csv, ENERGY_COLUMNS)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        fig = build_energy_figure(rows, image=args.image, block_size=args.block_size)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    fig.savefig(args.out, dpi=120)
    plt.close(fig)
    return 0


if __name__ == "__main__":
    sys.exit(main())
