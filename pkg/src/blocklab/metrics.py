"""Reconstruction quality and energy-compaction metrics.

PSNR uses the fixed 8-bit peak: 10 log10(255^2 / MSE), with lossless
reconstructions reported as the +infinity cap (rendered as ``inf`` in text
outputs).  Energy compaction E(k) is the fraction of a coefficient
vector's total squared magnitude captured by its k largest entries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import StructureError
from .imagecore import BlockSet, GrayImage, tile
from .transforms import (
    TransformBasis,
    TransformKind,
    forward_blocks,
)

PSNR_PEAK = 255.0

# Aggregated curves may dip by a few ulps when averaging many blocks.
_MONOTONE_SLACK = 1e-12


@dataclass(frozen=True)
class EnergyCurve:
    """Cumulative energy fractions E(1..d) for one coefficient budget sweep.

    Values are nondecreasing in [0, 1].  A curve for a nonzero signal ends
    at 1; the all-zero signal yields the all-zero curve by convention.
    """

    d: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64).reshape(-1).copy()
        if self.d < 1 or vals.size != self.d:
            raise StructureError(f"curve must have d={self.d} values, got {vals.size}")
        if np.any(vals < -_MONOTONE_SLACK) or np.any(vals > 1.0 + 1e-12):
            raise StructureError("curve values must lie in [0, 1]")
        if np.any(np.diff(vals) < -_MONOTONE_SLACK):
            raise StructureError("curve values must be nondecreasing")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)


def mse(a: GrayImage, b: GrayImage) -> float:
    """Mean squared pixel difference over the original extent."""
    if a.width != b.width or a.height != b.height:
        raise StructureError(
            f"image dimensions differ: {a.width}x{a.height} vs {b.width}x{b.height}"
        )
    diff = a.data - b.data
    return float(np.mean(diff * diff))


def psnr(mse_value: float) -> float:
    """Peak signal-to-noise ratio in dB; +inf for a zero MSE."""
    if mse_value < 0.0:
        raise ValueError(f"MSE must be nonnegative, got {mse_value}")
    if mse_value == 0.0:
        return math.inf
    return 10.0 * math.log10(PSNR_PEAK * PSNR_PEAK / mse_value)


def energy_curve(coefficients: np.ndarray) -> EnergyCurve:
    """Cumulative squared-magnitude fractions, largest coefficients first."""
    vec = np.asarray(coefficients, dtype=np.float64).reshape(-1)
    if vec.size < 1:
        raise ValueError("coefficient vector must be nonempty")
    energies = np.sort(vec * vec)[::-1]
    cumulative = np.cumsum(energies)
    total = cumulative[-1]
    if total == 0.0:
        return EnergyCurve(d=vec.size, values=np.zeros(vec.size))
    return EnergyCurve(d=vec.size, values=cumulative / total)


def blockset_energy_curve(basis: TransformBasis, blocks: BlockSet) -> EnergyCurve:
    """Mean per-block energy curve of a tiled image under one basis.

    Blocks are centered on the blockset mean before analysis for every
    transform kind, so the curves compare how structure (not the shared
    brightness) compacts; for PCA this is its native centering.  Blocks
    with zero centered energy contribute all-zero curves.
    """
    if basis.dim != blocks.dim:
        raise StructureError(f"basis dimension {basis.dim} != blocks {blocks.dim}")
    if basis.kind is TransformKind.PCA:
        coeffs = forward_blocks(basis, blocks.blocks)
    else:
        centered = blocks.blocks - blocks.blocks.mean(axis=0)
        coeffs = forward_blocks(basis, centered)
    energies = np.sort(coeffs * coeffs, axis=1)[:, ::-1]
    cumulative = np.cumsum(energies, axis=1)
    totals = cumulative[:, -1:]
    curves = np.divide(
        cumulative, totals, out=np.zeros_like(cumulative), where=totals > 0.0
    )
    return EnergyCurve(d=blocks.dim, values=curves.mean(axis=0))


def image_energy_curve(
    image: GrayImage, kind: TransformKind, block_size: int
) -> EnergyCurve:
    """Mean per-block energy curve of an image under the chosen transform."""
    from .coding import build_basis  # local import avoids a module cycle

    blocks = tile(image, block_size)
    basis = build_basis(kind, block_size, blocks)
    return blockset_energy_curve(basis, blocks)
