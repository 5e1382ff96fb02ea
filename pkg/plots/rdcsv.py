"""CSV loading and filtering shared by the plot scripts.

These scripts are a pure view over the sweep CSVs: they never recompute
metrics, so any numeric discrepancy in a figure is an upstream bug.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

RESULTS_COLUMNS = (
    "image",
    "transform",
    "block_size",
    "fraction",
    "k",
    "rate",
    "mse",
    "psnr_db",
)
ENERGY_COLUMNS = ("image", "transform", "block_size", "k", "energy_fraction")

TRANSFORM_ORDER = ("DCT", "Hadamard", "PCA")


class SchemaError(Exception):
    """CSV header does not match the expected sweep schema."""


def load_rows(path: str | Path, columns: tuple[str, ...]) -> list[dict[str, str]]:
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, expected header {columns}") from None
        if tuple(header) != columns:
            raise SchemaError(f"{path}: header {header} != expected {list(columns)}")
        rows = []
        for values in reader:
            if not values:
                continue
            if len(values) != len(columns):
                raise SchemaError(f"{path}: row has {len(values)} fields: {values}")
            rows.append(dict(zip(columns, values)))
    return rows


def select(
    rows: list[dict[str, str]],
    image: str | None = None,
    block_size: int | None = None,
) -> list[dict[str, str]]:
    out = rows
    if image is not None:
        out = [r for r in out if r["image"] == image]
    if block_size is not None:
        out = [r for r in out if int(r["block_size"]) == block_size]
    return out


def mean_or_cap(values: list[float]) -> float:
    """Aggregate one grid point across images: mean of the finite values.

    A point where every image hit the lossless cap stays at the cap.
    """
    finite = [v for v in values if not math.isinf(v)]
    if not finite:
        return math.inf
    return sum(finite) / len(finite)


def transforms_present(rows: list[dict[str, str]]) -> list[str]:
    present = {r["transform"] for r in rows}
    ordered = [name for name in TRANSFORM_ORDER if name in present]
    return ordered + sorted(present - set(TRANSFORM_ORDER))
