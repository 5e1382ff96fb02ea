#!/usr/bin/env python3
"""Render rate-distortion figures from a sweep results CSV.

One line per transform, x = rate (k/d), y = PSNR in dB.  Rows at the
lossless cap ("inf") are drawn at a visual ceiling (max finite PSNR in the
file + 5 dB) with a distinct marker.  Without a --block-size filter the
figure gets one panel per block size.

Usage:
    plot_rd.py --csv results.csv [--image ID] [--block-size N] --out rd.png

Exit codes: 0 success, 1 empty selection, 2 schema or invocation problems.
"""

from __future__ import annotations

import argparse
import math
import sys

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from rdcsv import RESULTS_COLUMNS, SchemaError, load_rows, mean_or_cap, select, transforms_present

_STYLE = {
    "DCT": dict(color="tab:blue", marker="o"),
    "Hadamard": dict(color="tab:orange", marker="s"),
    "PCA": dict(color="tab:green", marker="d"),
}
_CAP_MARKER = "^"


def _series(rows: list[dict[str, str]], transform: str) -> list[tuple[float, float]]:
    """Aggregated (rate, psnr) points for one transform, ascending in rate."""
    by_rate: dict[float, list[float]] = {}
    for row in rows:
        if row["transform"] != transform:
            continue
        by_rate.setdefault(float(row["rate"]), []).append(float(row["psnr_db"]))
    return [(rate, mean_or_cap(values)) for rate, values in sorted(by_rate.items())]


def build_rd_figure(
    rows: list[dict[str, str]],
    image: str | None = None,
    block_size: int | None = None,
):
    """Build the figure; raises ValueError when nothing matches the filter."""
    ceiling_base = [
        float(r["psnr_db"]) for r in rows if not math.isinf(float(r["psnr_db"]))
    ]
    ceiling = (max(ceiling_base) if ceiling_base else 60.0) + 5.0

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
            style = _STYLE.get(transform, dict(marker="o"))
            points = _series(panel_rows, transform)
            rates = [rate for rate, _ in points]
            levels = [ceiling if math.isinf(p) else p for _, p in points]
            axis.plot(rates, levels, label=transform, **style)
            capped = [
                (rate, ceiling) for rate, p in points if math.isinf(p)
            ]
            if capped:
                axis.scatter(
                    [rate for rate, _ in capped],
                    [level for _, level in capped],
                    marker=_CAP_MARKER,
                    s=90,
                    facecolors="none",
                    edgecolors=style.get("color", "black"),
                    zorder=5,
                )
        axis.set_title(f"{n}x{n} blocks")
        axis.set_xlabel("rate (k/d)")
        axis.set_ylabel("PSNR (dB)")
        axis.grid(True, alpha=0.3)
        axis.legend()
    title = "Rate-distortion"
    if image is not None:
        title += f" - {image}"
    fig.suptitle(title)
    fig.tight_layout()
    return fig


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--csv", required=True, help="sweep results CSV")
    parser.add_argument("--image", help="restrict to one image id")
    parser.add_argument("--block-size", type=int, help="restrict to one block size")
    parser.add_argument("--out", required=True, help="output figure path")
    args = parser.parse_args(argv)

    try:
        rows = load_rows(args.csv, RESULTS_COLUMNS)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        fig = build_rd_figure(rows, image=args.image, block_size=args.block_size)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    fig.savefig(args.out, dpi=120)
    plt.close(fig)
    return 0


if __name__ == "__main__":
    sys.exit(main())
