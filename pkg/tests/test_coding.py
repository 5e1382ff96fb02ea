import numpy as np
import pytest

from blocklab import (
    StructureError,
    TransformKind,
    UnsupportedSizeError,
    build_dct_basis,
    build_hadamard_basis,
    code_blocks,
    compress_image,
    forward_blocks,
    inverse_blocks,
    k_from_fraction,
    mse,
    psnr,
    reconstruct_block,
    retain_top_k,
    retain_top_k_blocks,
    tile,
    train_pca_basis,
)
from blocklab.coding import CodedBlock, RatePoint
from helpers import make_image


class TestKFromFraction:
    def test_full_budget(self):
        assert k_from_fraction(1.0, 8) == 64

    def test_floor_of_one(self):
        assert k_from_fraction(0.05, 4) == 1

    def test_rounding(self):
        assert k_from_fraction(0.05, 32) == 51
        assert k_from_fraction(0.1, 4) == 2  # 1.6 rounds up
        assert k_from_fraction(0.3, 8) == 19  # 19.2 rounds down

    @pytest.mark.parametrize("bad", [0.0, -0.1, 1.0 + 1e-9, 2.0])
    def test_fraction_range(self, bad):
        with pytest.raises(ValueError):
            k_from_fraction(bad, 8)

    def test_block_size_range(self):
        with pytest.raises(ValueError):
            k_from_fraction(0.5, 0)


class TestRetainTopK:
    def test_magnitude_order(self):
        coded = retain_top_k(np.array([5.0, -7.0, 2.0, 0.0]), 2)
        assert coded.kept == ((1, -7.0), (0, 5.0))

    def test_tie_broken_by_lower_index(self):
        coded = retain_top_k(np.array([3.0, -3.0, 1.0]), 1)
        assert coded.kept == ((0, 3.0),)

    def test_keep_all(self):
        coded = retain_top_k(np.array([1.0, 2.0]), 2)
        assert {index for index, _ in coded.kept} == {0, 1}

    @pytest.mark.parametrize("k", [0, 5, -1])
    def test_budget_range(self, k):
        with pytest.raises(ValueError):
            retain_top_k(np.zeros(4), k)

    def test_batch_matches_scalar_path(self, rng):
        coeffs = rng.standard_normal((30, 16))
        coeffs[3, 2] = coeffs[3, 5]  # force a magnitude tie
        for k in (1, 4, 16):
            batch = retain_top_k_blocks(coeffs, k)
            for row, kept_row in zip(coeffs, batch):
                expected = np.zeros(16)
                for index, value in retain_top_k(row, k).kept:
                    expected[index] = value
                assert np.array_equal(kept_row, expected)


class TestReconstructBlock:
    def test_full_budget_round_trip(self, rng):
        basis = build_dct_basis(4)
        block = rng.uniform(0, 255, size=16)
        coded = retain_top_k(forward_blocks(basis, block[None, :])[0], 16)
        assert np.max(np.abs(reconstruct_block(basis, coded) - block)) <= 1e-9

    def test_single_coefficient_on_constant_block(self):
        basis = build_dct_basis(4)
        block = np.full(16, 77.0)
        coded = retain_top_k(forward_blocks(basis, block[None, :])[0], 1)
        assert np.max(np.abs(reconstruct_block(basis, coded) - block)) <= 1e-9

    def test_index_out_of_range(self):
        basis = build_dct_basis(2)
        coded = CodedBlock(kept=((5, 1.0),), k=1, d=9)
        with pytest.raises(StructureError):
            reconstruct_block(basis, coded)


class TestCodedBlockInvariants:
    def test_rejects_duplicate_indices(self):
        with pytest.raises(StructureError):
            CodedBlock(kept=((0, 1.0), (0, 2.0)), k=2, d=4)

    def test_rejects_misordered_pairs(self):
        with pytest.raises(StructureError):
            CodedBlock(kept=((0, 1.0), (1, 2.0)), k=2, d=4)

    def test_rate_point_validation(self):
        with pytest.raises(StructureError):
            RatePoint(k=0, d=4, rate=0.0)
        with pytest.raises(StructureError):
            RatePoint(k=2, d=4, rate=0.4999)


def _basis_for(kind, image, n):
    if kind is TransformKind.PCA:
        return train_pca_basis(tile(image, n))
    if kind is TransformKind.DCT:
        return build_dct_basis(n)
    return build_hadamard_basis(n)


@pytest.mark.parametrize("kind", list(TransformKind))
def test_error_equals_discarded_energy(kind, rng):
    image = make_image(rng.uniform(0, 255, size=(40, 40)))
    basis = _basis_for(kind, image, 8)
    blocks = tile(image, 8)
    coeffs = forward_blocks(basis, blocks.blocks)
    for k in (1, 7, 30, 63):
        kept = retain_top_k_blocks(coeffs, k)
        recon = inverse_blocks(basis, kept)
        err = np.sum((recon - blocks.blocks) ** 2, axis=1)
        discarded = np.sum((coeffs - kept) ** 2, axis=1)
        assert np.allclose(err, discarded, rtol=1e-9, atol=1e-9)


def test_preclamp_mse_monotone_in_k(rng):
    image = make_image(rng.uniform(0, 255, size=(24, 24)))
    blocks = tile(image, 4)
    basis = build_dct_basis(4)
    coeffs = forward_blocks(basis, blocks.blocks)
    previous = np.inf
    for k in range(1, 17):
        recon = inverse_blocks(basis, retain_top_k_blocks(coeffs, k))
        current = float(np.mean((recon - blocks.blocks) ** 2))
        assert current <= previous + 1e-12
        previous = current


class TestCompressImage:
    @pytest.mark.parametrize("kind", list(TransformKind))
    def test_full_rate_is_exact(self, kind, rng):
        image = make_image(rng.integers(0, 256, size=(20, 28)).astype(float))
        recon, rate_point = compress_image(image, kind, 4, 1.0)
        assert np.array_equal(recon.data, image.data)
        assert (rate_point.k, rate_point.d, rate_point.rate) == (16, 16, 1.0)
        assert psnr(mse(image, recon)) == np.inf

    def test_constant_image_dc_only(self):
        image = make_image(np.full((16, 16), 128.0))
        recon, rate_point = compress_image(image, TransformKind.DCT, 8, 0.05)
        assert rate_point.k == 3
        assert mse(image, recon) == 0.0

    def test_deterministic(self, rng):
        image = make_image(rng.uniform(0, 255, size=(32, 32)))
        a, _ = compress_image(image, TransformKind.PCA, 8, 0.3)
        b, _ = compress_image(image, TransformKind.PCA, 8, 0.3)
        assert np.array_equal(a.data, b.data)

    def test_output_is_clamped(self, rng):
        # hard black/white edges overshoot before the clamp
        pixels = np.zeros((16, 16))
        pixels[:, 8:] = 255.0
        recon, _ = compress_image(make_image(pixels), TransformKind.DCT, 8, 0.1)
        assert recon.data.min() >= 0.0
        assert recon.data.max() <= 255.0

    def test_hadamard_block_size_rejected(self, rng):
        image = make_image(rng.uniform(0, 255, size=(24, 24)))
        with pytest.raises(UnsupportedSizeError):
            compress_image(image, TransformKind.HADAMARD, 12, 0.5)

    def test_code_blocks_dimension_mismatch(self, rng):
        image = make_image(rng.uniform(0, 255, size=(16, 16)))
        with pytest.raises(StructureError):
            code_blocks(build_dct_basis(4), tile(image, 8), 3)
