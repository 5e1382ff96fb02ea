"""Shared helpers and independent oracles used across the test suite."""

import math

import numpy as np

from blocklab import GrayImage


def make_image(array) -> GrayImage:
    arr = np.asarray(array, dtype=np.float64)
    return GrayImage(arr.shape[1], arr.shape[0], arr.reshape(-1))


def dct_bruteforce_2d(block2d: np.ndarray) -> np.ndarray:
    """Four-nested-loop orthonormal 2D DCT-II, independent of the library.

    Direct evaluation of the (u, v) coefficient as the alpha-weighted
    cosine sum over every pixel (x, y).
    """
    n = block2d.shape[0]
    out = np.zeros((n, n))
    for u in range(n):
        au = math.sqrt(1.0 / n) if u == 0 else math.sqrt(2.0 / n)
        for v in range(n):
            av = math.sqrt(1.0 / n) if v == 0 else math.sqrt(2.0 / n)
            acc = 0.0
            for x in range(n):
                for y in range(n):
                    acc += (
                        block2d[x, y]
                        * math.cos((2 * x + 1) * u * math.pi / (2 * n))
                        * math.cos((2 * y + 1) * v * math.pi / (2 * n))
                    )
            out[u, v] = au * av * acc
    return out


def gradient_image(size: int = 64) -> GrayImage:
    """Smooth radial gradient used by the compaction-ordering tests."""
    coords = np.arange(size, dtype=np.float64)
    yy, xx = np.meshgrid(coords, coords, indexing="ij")
    center = (size - 1) / 2.0
    radius = np.hypot(xx - center, yy - center) / (center * np.sqrt(2.0))
    return make_image(np.clip(50.0 + 150.0 * (1.0 - radius), 0.0, 255.0))
