import numpy as np
import pytest

from blocklab import GrayImage, band_texture_image, radial_edges_image


@pytest.fixture(scope="session")
def corpus_images() -> dict[str, GrayImage]:
    return {
        "radial-edges": radial_edges_image(),
        "band-texture": band_texture_image(),
    }


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)
