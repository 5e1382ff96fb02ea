"""Bundled synthetic evaluation images.

Two deterministic 512 x 512 grayscale images ship with the package so the
sweep and its checks run without external data:

* ``radial-edges``: a smooth radial gradient overlaid with oriented
  straight bands and a bright disc, plus mild white noise.
* ``band-texture``: band-limited pseudo-random texture with a power-law
  spectrum, plus the same mild noise.

The noise floor keeps the fixed transforms honest at small block sizes
(white noise is equally incompressible in every orthonormal basis) while
leaving plenty of structure for the adaptive basis to exploit.  Real
photographs can be used instead by passing PGM paths to the sweep.
"""

from __future__ import annotations

import numpy as np

from .imagecore import GrayImage

SIZE = 512
_NOISE_SIGMA = 5.0
_CLIP_LO, _CLIP_HI = 2.0, 253.0


def _finish(base: np.ndarray, noise_seed: int) -> GrayImage:
    rng = np.random.default_rng(noise_seed)
    img = base + _NOISE_SIGMA * rng.standard_normal(base.shape)
    img = np.clip(img, _CLIP_LO, _CLIP_HI)
    return GrayImage(base.shape[1], base.shape[0], img.reshape(-1))


def radial_edges_image(size: int = SIZE) -> GrayImage:
    """Smooth radial gradient with oriented edge bands and a disc."""
    coords = np.arange(size, dtype=np.float64)
    yy, xx = np.meshgrid(coords, coords, indexing="ij")
    center = (size - 1) / 2.0
    radius = np.hypot(xx - center, yy - center) / (center * np.sqrt(2.0))
    img = 70.0 + 130.0 * (1.0 - radius)
    bands = (
        (np.pi / 6.0, -60.0, 22.0, 55.0),
        (np.pi / 6.0, 90.0, 14.0, -45.0),
        (2.0 * np.pi / 3.0, 10.0, 30.0, 40.0),
        (5.0 * np.pi / 12.0, -150.0, 10.0, -50.0),
    )
    for angle, offset, halfwidth, delta in bands:
        along = np.cos(angle) * (xx - center) + np.sin(angle) * (yy - center)
        img = np.where(np.abs(along - offset) < halfwidth, img + delta, img)
    disc = np.hypot(xx - 0.72 * size, yy - 0.3 * size) < 0.09 * size
    img = np.where(disc, img + 45.0, img)
    return _finish(img, noise_seed=7701)


def band_texture_image(
    size: int = SIZE, alpha: float = 1.4, cutoff: float = 0.42
) -> GrayImage:
    """Band-limited pseudo-random texture with a 1/f^alpha spectrum."""
    rng = np.random.default_rng(20240801)
    noise = rng.standard_normal((size, size))
    fy = np.fft.fftfreq(size)[:, None]
    fx = np.fft.rfftfreq(size)[None, :]
    radius = np.hypot(fy, fx)
    shaping = np.zeros_like(radius)
    nonzero = radius > 0.0
    shaping[nonzero] = radius[nonzero] ** (-alpha)
    shaping[radius > cutoff] = 0.0
    texture = np.fft.irfft2(np.fft.rfft2(noise) * shaping, s=(size, size))
    texture = (texture - texture.mean()) / texture.std()
    return _finish(128.0 + 38.0 * texture, noise_seed=7702)


BUNDLED_IMAGES = {
    "radial-edges": radial_edges_image,
    "band-texture": band_texture_image,
}


def bundled_names() -> tuple[str, ...]:
    return tuple(BUNDLED_IMAGES)


def bundled_image(name: str) -> GrayImage:
    try:
        return BUNDLED_IMAGES[name]()
    except KeyError:
        raise KeyError(f"unknown bundled image {name!r}") from None
