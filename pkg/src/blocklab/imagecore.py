"""Grayscale image ingestion and lossless block tiling.

Images are 8-bit grayscale, read from PGM (binary ``P5`` or ASCII ``P2``,
maxval 255).  For block processing an image is padded on the right/bottom
by edge replication to the next multiple of the block size, then cut into
non-overlapping N x N tiles which are flattened row-major into vectors of
dimension d = N^2.  ``untile`` is the exact inverse up to the padding crop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    PgmFormatError,
    StructureError,
    TruncatedDataError,
    UnsupportedDepthError,
)


@dataclass(frozen=True)
class GrayImage:
    """A 2D grayscale image with real-valued intensities.

    ``data`` is a flat row-major float64 array of length width * height.
    Images produced by ``load_pgm`` and the bundled corpus have every
    intensity in [0, 255]; intermediate reconstructions may temporarily
    carry out-of-range values until the coding stage clamps them.
    """

    width: int
    height: int
    data: np.ndarray

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise StructureError("image dimensions must be positive")
        arr = np.ascontiguousarray(np.asarray(self.data, dtype=np.float64).reshape(-1))
        if arr.size != self.width * self.height:
            raise StructureError(
                f"data length {arr.size} != width*height {self.width * self.height}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    def as_array(self) -> np.ndarray:
        """Return the pixels as a read-only (height, width) array."""
        return self.data.reshape(self.height, self.width)


@dataclass(frozen=True)
class BlockSet:
    """An image tiled into flattened N x N blocks plus padding metadata.

    ``blocks`` has shape (M, N^2) with M = grid_cols * grid_rows; blocks are
    ordered left-to-right, top-to-bottom and each block is row-major.
    """

    block_size: int
    blocks: np.ndarray
    grid_cols: int
    grid_rows: int
    orig_width: int
    orig_height: int

    def __post_init__(self):
        n = self.block_size
        if n < 1:
            raise StructureError("block_size must be positive")
        if self.grid_cols < 1 or self.grid_rows < 1:
            raise StructureError("grid dimensions must be positive")
        arr = np.ascontiguousarray(np.asarray(self.blocks, dtype=np.float64))
        if arr.ndim != 2 or arr.shape[1] != n * n:
            raise StructureError(f"blocks must be (M, {n * n}), got {arr.shape}")
        if arr.shape[0] != self.grid_cols * self.grid_rows:
            raise StructureError(
                f"block count {arr.shape[0]} != grid {self.grid_cols}x{self.grid_rows}"
            )
        for grid, extent, axis in (
            (self.grid_cols, self.orig_width, "width"),
            (self.grid_rows, self.orig_height, "height"),
        ):
            if extent < 1:
                raise StructureError(f"original {axis} must be positive")
            if grid * n < extent or grid * n - extent >= n:
                raise StructureError(
                    f"grid does not cover original {axis} {extent} with padding < {n}"
                )
        arr.setflags(write=False)
        object.__setattr__(self, "blocks", arr)

    @property
    def count(self) -> int:
        return self.blocks.shape[0]

    @property
    def dim(self) -> int:
        return self.block_size * self.block_size


def _next_token(data: bytes, pos: int) -> tuple[bytes, int]:
    """Return the next whitespace-delimited token, skipping '#' comments."""
    n = len(data)
    while pos < n:
        c = data[pos]
        if c in b"#":
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
        elif c in b" \t\r\n\x0b\x0c":
            pos += 1
        else:
            break
    start = pos
    while pos < n and data[pos] not in b" \t\r\n\x0b\x0c#":
        pos += 1
    if start == pos:
        raise PgmFormatError("unexpected end of header")
    return data[start:pos], pos


def _header_int(token: bytes, what: str) -> int:
    if not token.isdigit():
        raise PgmFormatError(f"invalid {what} field {token!r}")
    return int(token)


def load_pgm(data: bytes) -> GrayImage:
    """Parse a PGM byte string (binary P5 or ASCII P2, maxval 255).

    Header comments introduced by ``#`` are skipped.  Raises
    ``PgmFormatError`` for anything that is not an 8-bit grayscale PGM,
    ``UnsupportedDepthError`` when maxval differs from 255, and
    ``TruncatedDataError`` when the pixel payload is short.
    """
    magic, pos = _next_token(bytes(data), 0)
    if magic not in (b"P5", b"P2"):
        raise PgmFormatError(f"unsupported magic {magic!r}, expected P5 or P2")
    token, pos = _next_token(data, pos)
    width = _header_int(token, "width")
    token, pos = _next_token(data, pos)
    height = _header_int(token, "height")
    token, pos = _next_token(data, pos)
    maxval = _header_int(token, "maxval")
    if width < 1 or height < 1:
        raise PgmFormatError(f"invalid dimensions {width}x{height}")
    if maxval != 255:
        raise UnsupportedDepthError(f"maxval {maxval} not supported, need 255")

    npix = width * height
    if magic == b"P5":
        if pos >= len(data) or data[pos] not in b" \t\r\n\x0b\x0c":
            raise PgmFormatError("missing whitespace after maxval")
        pos += 1
        payload = data[pos : pos + npix]
        if len(payload) < npix:
            raise TruncatedDataError(
                f"expected {npix} pixel bytes, found {len(payload)}"
            )
        pixels = np.frombuffer(payload, dtype=np.uint8).astype(np.float64)
    else:
        samples = np.empty(npix, dtype=np.float64)
        for i in range(npix):
            try:
                token, pos = _next_token(data, pos)
            except PgmFormatError:
                raise TruncatedDataError(
                    f"expected {npix} ASCII samples, found {i}"
                ) from None
            value = _header_int(token, "sample")
            if value > maxval:
                raise PgmFormatError(f"sample {value} exceeds maxval {maxval}")
            samples[i] = value
        pixels = samples
    return GrayImage(width, height, pixels)


def encode_pgm(image: GrayImage) -> bytes:
    """Serialize an image as binary P5 PGM.

    Intensities are rounded half-up to integers at this point only, then
    clipped to [0, 255].
    """
    rounded = np.floor(image.as_array() + 0.5)
    samples = np.clip(rounded, 0, 255).astype(np.uint8)
    header = f"P5\n{image.width} {image.height}\n255\n".encode("ascii")
    return header + samples.tobytes()


def tile(image: GrayImage, block_size: int) -> BlockSet:
    """Cut an image into flattened N x N blocks, edge-padding as needed."""
    n = int(block_size)
    if n < 1:
        raise ValueError(f"block size must be >= 1, got {block_size}")
    rows = math.ceil(image.height / n)
    cols = math.ceil(image.width / n)
    padded = np.pad(
        image.as_array(),
        ((0, rows * n - image.height), (0, cols * n - image.width)),
        mode="edge",
    )
    blocks = (
        padded.reshape(rows, n, cols, n).swapaxes(1, 2).reshape(rows * cols, n * n)
    )
    return BlockSet(
        block_size=n,
        blocks=blocks,
        grid_cols=cols,
        grid_rows=rows,
        orig_width=image.width,
        orig_height=image.height,
    )


def untile(blocks: BlockSet) -> GrayImage:
    """Reassemble an image from its blocks, discarding the padding.

    Values are passed through unchanged; any clamping is a coding-stage
    decision.
    """
    n = blocks.block_size
    rows, cols = blocks.grid_rows, blocks.grid_cols
    grid = (
        blocks.blocks.reshape(rows, cols, n, n)
        .swapaxes(1, 2)
        .reshape(rows * n, cols * n)
    )
    cropped = grid[: blocks.orig_height, : blocks.orig_width]
    return GrayImage(blocks.orig_width, blocks.orig_height, cropped.reshape(-1).copy())
