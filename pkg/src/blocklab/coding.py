"""Top-k coefficient retention and the compress/reconstruct pipeline.

A block is coded by keeping its k transform coefficients of largest
magnitude (ties broken toward the lower index) and zeroing the rest; the
rate is reported as k/d, ignoring any cost of signaling which indices
survived.  The whole-image pipeline tiles, transforms, retains, inverts,
reassembles and finally clamps pixels to [0, 255] without rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import StructureError
from .imagecore import BlockSet, GrayImage, tile, untile
from .transforms import (
    TransformBasis,
    TransformKind,
    build_dct_basis,
    build_hadamard_basis,
    forward_blocks,
    inverse_blocks,
    train_pca_basis,
)


@dataclass(frozen=True)
class CodedBlock:
    """The coefficients retained for one block at budget k.

    ``kept`` pairs are ordered by descending magnitude, ties by ascending
    index, exactly as retention produced them.
    """

    kept: tuple[tuple[int, float], ...]
    k: int
    d: int

    def __post_init__(self):
        if not 1 <= self.k <= self.d:
            raise StructureError(f"budget k={self.k} out of range [1, {self.d}]")
        if len(self.kept) != min(self.k, self.d):
            raise StructureError(
                f"kept {len(self.kept)} coefficients, expected {min(self.k, self.d)}"
            )
        indices = [index for index, _ in self.kept]
        if len(set(indices)) != len(indices):
            raise StructureError("kept indices must be distinct")
        for index in indices:
            if not 0 <= index < self.d:
                raise StructureError(f"coefficient index {index} out of range")
        for (i0, v0), (i1, v1) in zip(self.kept, self.kept[1:]):
            if abs(v1) > abs(v0) or (abs(v1) == abs(v0) and i1 < i0):
                raise StructureError("kept pairs must be magnitude-ordered")


@dataclass(frozen=True)
class RatePoint:
    """Retained-coefficient budget expressed as a fraction of the block."""

    k: int
    d: int
    rate: float

    def __post_init__(self):
        if not 1 <= self.k <= self.d:
            raise StructureError(f"k={self.k} out of range [1, {self.d}]")
        if self.rate != self.k / self.d:
            raise StructureError(f"rate {self.rate!r} != k/d {self.k / self.d!r}")


def k_from_fraction(fraction: float, block_size: int) -> int:
    """Map a coefficient fraction f in (0, 1] to a budget k = f * N^2.

    Rounds half-up, with a floor of one coefficient and a cap of N^2.
    """
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    n = int(block_size)
    if n < 1:
        raise ValueError(f"block size must be >= 1, got {block_size}")
    d = n * n
    return max(1, min(d, int(math.floor(fraction * d + 0.5))))


def retain_top_k(coefficients: np.ndarray, k: int) -> CodedBlock:
    """Keep the k largest-magnitude coefficients of one block."""
    vec = np.asarray(coefficients, dtype=np.float64).reshape(-1)
    d = vec.size
    if not 1 <= k <= d:
        raise ValueError(f"k={k} out of range [1, {d}]")
    # Stable sort on descending magnitude keeps ties in ascending index order.
    order = np.argsort(-np.abs(vec), kind="stable")[:k]
    kept = tuple((int(index), float(vec[index])) for index in order)
    return CodedBlock(kept=kept, k=int(k), d=d)


def reconstruct_block(basis: TransformBasis, coded: CodedBlock) -> np.ndarray:
    """Scatter the kept coefficients and apply the inverse transform."""
    if coded.d != basis.dim:
        raise StructureError(f"coded block dimension {coded.d} != basis {basis.dim}")
    coeffs = np.zeros(coded.d)
    for index, value in coded.kept:
        coeffs[index] = value
    return inverse_blocks(basis, coeffs)


def retain_top_k_blocks(coefficients: np.ndarray, k: int) -> np.ndarray:
    """Zero all but the top-k magnitudes in each row of an (M, d) matrix.

    Row-wise equivalent of ``retain_top_k`` with the same tie rule.
    """
    mat = np.asarray(coefficients, dtype=np.float64)
    d = mat.shape[1]
    if not 1 <= k <= d:
        raise ValueError(f"k={k} out of range [1, {d}]")
    order = np.argsort(-np.abs(mat), axis=1, kind="stable")[:, :k]
    mask = np.zeros(mat.shape, dtype=bool)
    np.put_along_axis(mask, order, True, axis=1)
    return np.where(mask, mat, 0.0)


def code_blocks(basis: TransformBasis, blocks: BlockSet, k: int) -> np.ndarray:
    """Transform, retain top-k and reconstruct every block of a BlockSet.

    The full budget k = d keeps every coefficient, so the round trip is
    skipped and the original blocks are returned exactly.
    """
    d = blocks.dim
    if basis.dim != d:
        raise StructureError(f"basis dimension {basis.dim} != blocks {d}")
    if not 1 <= k <= d:
        raise ValueError(f"k={k} out of range [1, {d}]")
    if k == d:
        return blocks.blocks
    coeffs = forward_blocks(basis, blocks.blocks)
    return inverse_blocks(basis, retain_top_k_blocks(coeffs, k))


def build_basis(
    kind: TransformKind, block_size: int, blocks: BlockSet | None = None
) -> TransformBasis:
    """Construct a fixed basis, or train the PCA basis on ``blocks``."""
    if kind is TransformKind.DCT:
        return build_dct_basis(block_size)
    if kind is TransformKind.HADAMARD:
        return build_hadamard_basis(block_size)
    if blocks is None:
        raise ValueError("PCA basis requires training blocks")
    return train_pca_basis(blocks)


def compress_image(
    image: GrayImage, kind: TransformKind, block_size: int, fraction: float
) -> tuple[GrayImage, RatePoint]:
    """Run the whole pipeline on one image at coefficient fraction f.

    The PCA basis is trained on all blocks of this image.  The returned
    reconstruction is clamped to [0, 255] (no integer rounding).
    """
    k = k_from_fraction(fraction, block_size)
    blocks = tile(image, block_size)
    basis = build_basis(kind, block_size, blocks)
    reconstructed = code_blocks(basis, blocks, k)
    coded_set = BlockSet(
        block_size=blocks.block_size,
        blocks=reconstructed,
        grid_cols=blocks.grid_cols,
        grid_rows=blocks.grid_rows,
        orig_width=blocks.orig_width,
        orig_height=blocks.orig_height,
    )
    raw = untile(coded_set)
    clamped = GrayImage(raw.width, raw.height, np.clip(raw.data, 0.0, 255.0))
    d = block_size * block_size
    return clamped, RatePoint(k=k, d=d, rate=k / d)


__all__ = [
    "CodedBlock",
    "RatePoint",
    "k_from_fraction",
    "retain_top_k",
    "reconstruct_block",
    "retain_top_k_blocks",
    "code_blocks",
    "build_basis",
    "compress_image",
]
