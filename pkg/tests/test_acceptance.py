"""Acceptance suite: one test per exit criterion, at its stated tolerance.

Run ``pytest tests/test_acceptance.py -v -s`` to get one printed line per
criterion in addition to the pytest verdicts.  The full default sweep runs
once and is shared by the criteria that consume it; the determinism check
performs its own second run.
"""

import math
import time

import numpy as np
import pytest

from blocklab import (
    CovarianceAccumulator,
    SweepConfig,
    TransformKind,
    blockset_energy_curve,
    build_dct_basis,
    build_hadamard_basis,
    compress_image,
    format_records_csv,
    forward_blocks,
    inverse_blocks,
    jacobi_eigh,
    mse,
    psnr,
    retain_top_k_blocks,
    run_sweep,
    tile,
    train_pca_basis,
    untile,
)
from blocklab.imagecore import BlockSet
from helpers import dct_bruteforce_2d

BLOCK_SIZES = (4, 8, 16, 32)
FIXED_BUILDERS = {
    TransformKind.DCT: build_dct_basis,
    TransformKind.HADAMARD: build_hadamard_basis,
}


def _report(name: str, detail: str = "") -> None:
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE PASS: {name}{suffix}")


@pytest.fixture(scope="module")
def pca_cache(corpus_images):
    cache = {}

    def get(name, block_size):
        key = (name, block_size)
        if key not in cache:
            cache[key] = train_pca_basis(tile(corpus_images[name], block_size))
        return cache[key]

    return get


@pytest.fixture(scope="module")
def default_sweep():
    config = SweepConfig()
    start = time.perf_counter()
    result = run_sweep(config)
    elapsed = time.perf_counter() - start
    assert result.ok, f"default sweep reported failures: {result.failures}"
    return result, elapsed, format_records_csv(result.records)


def _random_blockset(block_size: int, count: int, seed: int) -> BlockSet:
    rng = np.random.default_rng(seed)
    blocks = rng.uniform(0.0, 255.0, size=(count, block_size * block_size))
    return BlockSet(
        block_size=block_size,
        blocks=blocks,
        grid_cols=count,
        grid_rows=1,
        orig_width=count * block_size,
        orig_height=block_size,
    )


def test_orthonormality_suite():
    """max |B B^T - I| <= 1e-9 for all three transforms, N in {4,8,16,32}."""
    jacobi_eigh(np.eye(4))  # warm the compiled kernel before timing
    start = time.perf_counter()
    checked = 0
    # modest training-set sizes keep the large eigenproblems low rank
    training_counts = {4: 256, 8: 128, 16: 48, 32: 16}
    for n in BLOCK_SIZES:
        d = n * n
        bases = [build_dct_basis(n), build_hadamard_basis(n)]
        bases.append(train_pca_basis(_random_blockset(n, training_counts[n], seed=n)))
        for basis in bases:
            gram = basis.matrix @ basis.matrix.T
            deviation = float(np.max(np.abs(gram - np.eye(d))))
            assert deviation <= 1e-9, (basis.kind, n, deviation)
            checked += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, f"orthonormality suite took {elapsed:.1f}s"
    assert checked == 12
    _report("orthonormality suite", f"{elapsed:.1f}s for 12 bases")


def test_dct_bruteforce_oracle():
    """Separable 2D DCT equals the four-nested-loop sum on 100 random blocks."""
    rng = np.random.default_rng(8080)
    basis = build_dct_basis(8)
    worst = 0.0
    for _ in range(100):
        block = rng.uniform(0.0, 255.0, size=(8, 8))
        expected = dct_bruteforce_2d(block)
        got = forward_blocks(basis, block.reshape(1, 64)).reshape(8, 8)
        worst = max(worst, float(np.max(np.abs(got - expected))))
    assert worst <= 1e-9, worst
    _report("brute-force DCT oracle", f"max abs err {worst:.2e}")


def test_lossless_full_rate(corpus_images, pca_cache):
    """Full budget is lossless within 1e-9 pre-clamp; PSNR reports the cap."""
    worst = 0.0
    for name, image in corpus_images.items():
        for n in BLOCK_SIZES:
            blocks = tile(image, n)
            for kind in TransformKind:
                if kind is TransformKind.PCA:
                    basis = pca_cache(name, n)
                else:
                    basis = FIXED_BUILDERS[kind](n)
                coeffs = forward_blocks(basis, blocks.blocks)
                kept = retain_top_k_blocks(coeffs, blocks.dim)
                recon = inverse_blocks(basis, kept)
                pre_clamp = untile(
                    BlockSet(
                        block_size=n,
                        blocks=recon,
                        grid_cols=blocks.grid_cols,
                        grid_rows=blocks.grid_rows,
                        orig_width=blocks.orig_width,
                        orig_height=blocks.orig_height,
                    )
                )
                err = float(np.max(np.abs(pre_clamp.data - image.data)))
                worst = max(worst, err)
                assert err <= 1e-9, (name, kind, n, err)
                reconstruction, _ = compress_image(image, kind, n, 1.0)
                assert psnr(mse(image, reconstruction)) == math.inf, (name, kind, n)
    _report("lossless full rate", f"max pre-clamp err {worst:.2e}")


def test_monotonicity(default_sweep):
    """PSNR is nondecreasing in the fraction for every (image, transform, N)."""
    result, _, _ = default_sweep
    series: dict[tuple, list[float]] = {}
    for record in result.records:
        key = (record.image, record.transform, record.block_size)
        series.setdefault(key, []).append(record.psnr_db)
    violations = []
    for key, values in series.items():
        for previous, current in zip(values, values[1:]):
            if not (current >= previous or math.isinf(current)):
                violations.append((key, previous, current))
    assert len(series) == 24
    assert not violations, violations
    _report("PSNR monotonicity", f"{len(series)} series, zero violations")


def test_error_energy_identity(corpus_images, pca_cache):
    """Per-block squared error equals discarded coefficient energy (rel 1e-9)."""
    image = corpus_images["radial-edges"]
    blocks = tile(image, 8)
    assert blocks.count >= 1000
    checked = 0
    for kind in TransformKind:
        if kind is TransformKind.PCA:
            basis = pca_cache("radial-edges", 8)
        else:
            basis = FIXED_BUILDERS[kind](8)
        coeffs = forward_blocks(basis, blocks.blocks)
        total = np.sum(coeffs * coeffs, axis=1)
        for k in (1, 13, 32, 63):
            kept = retain_top_k_blocks(coeffs, k)
            recon = inverse_blocks(basis, kept)
            err = np.sum((recon - blocks.blocks) ** 2, axis=1)
            discarded = np.sum((coeffs - kept) ** 2, axis=1)
            # Conditioning floor: once the discarded tail drops below ~1e-9
            # of the block energy, the comparison is dominated by the
            # round-trip noise floor of double precision itself.
            scale = np.maximum(discarded, 1e-9 * total)
            assert float(np.max(np.abs(err - discarded) / scale)) <= 1e-9
            checked += blocks.count
    assert checked >= 1000
    _report("error-energy identity", f"{checked} block checks")


def test_klt_optimality_on_training_set(corpus_images, pca_cache):
    """Leading-k PCA energy >= best fixed k DCT indices (rel 1e-6), N in {4,8}."""
    for name, image in corpus_images.items():
        for n in (4, 8):
            blocks = tile(image, n)
            pca = pca_cache(name, n)
            centered = blocks.blocks - pca.mean
            pca_cumulative = np.cumsum(np.sum((centered @ pca.matrix.T) ** 2, axis=0))
            dct = build_dct_basis(n)
            per_index = np.sum((centered @ dct.matrix.T) ** 2, axis=0)
            dct_cumulative = np.cumsum(np.sort(per_index)[::-1])
            shortfall = pca_cumulative - dct_cumulative * (1.0 - 1e-6)
            assert float(np.min(shortfall)) >= 0.0, (name, n)
    _report("KLT training-set optimality", "N in {4, 8}, both images")


def test_eigensolver_residual(corpus_images):
    """|A v - lambda v|_inf <= 1e-8 (1 + |A|_F) on 50 randoms + corpus covariance."""
    rng = np.random.default_rng(4242)
    worst = 0.0
    for _ in range(50):
        d = int(rng.integers(2, 65))
        m = rng.standard_normal((d, d))
        a = (m + m.T) / 2.0
        values, vectors = jacobi_eigh(a)
        bound = 1e-8 * (1.0 + float(np.linalg.norm(a)))
        residual = float(np.max(np.abs(a @ vectors - vectors * values[None, :])))
        worst = max(worst, residual / bound)
        assert residual <= bound
        assert float(np.max(np.abs(vectors @ vectors.T - np.eye(d)))) <= 1e-9
    for name, image in corpus_images.items():
        blocks = tile(image, 16)
        _, cov = CovarianceAccumulator(256).add_blocks(blocks.blocks).finalize()
        values, vectors = jacobi_eigh(cov)
        bound = 1e-8 * (1.0 + float(np.linalg.norm(cov)))
        residual = float(np.max(np.abs(cov @ vectors - vectors * values[None, :])))
        worst = max(worst, residual / bound)
        assert residual <= bound, (name, residual, bound)
        assert float(np.max(np.abs(vectors @ vectors.T - np.eye(256)))) <= 1e-9
    _report("eigensolver residual", f"worst residual at {worst:.1%} of bound")


def test_trend_reproduction(default_sweep):
    """Transform ranking trends hold on the bundled corpus; sweep < 5 min."""
    result, elapsed, _ = default_sweep
    assert elapsed < 300.0, f"default sweep took {elapsed:.0f}s"
    table = {
        (r.image, r.transform, r.block_size, r.fraction): r.psnr_db
        for r in result.records
    }
    images = sorted({r.image for r in result.records})
    fractions = sorted({r.fraction for r in result.records})

    # (a) the adaptive basis wins clearly at the largest block size
    for image in images:
        for fraction in (0.2, 0.3, 0.5):
            pca = table[(image, TransformKind.PCA, 32, fraction)]
            dct = table[(image, TransformKind.DCT, 32, fraction)]
            assert pca > dct, (image, fraction, pca, dct)

    # (b) Hadamard never beats DCT by more than 0.1 dB at f <= 0.5
    for image in images:
        for n in (8, 16, 32):
            for fraction in fractions:
                if fraction > 0.5:
                    continue
                had = table[(image, TransformKind.HADAMARD, n, fraction)]
                dct = table[(image, TransformKind.DCT, n, fraction)]
                assert had <= dct + 0.1, (image, n, fraction, had, dct)

    # (c) at N=4 the three transforms stay within 3 dB of each other
    for image in images:
        for fraction in fractions:
            values = [table[(image, kind, 4, fraction)] for kind in TransformKind]
            if all(math.isinf(v) for v in values):
                continue
            spread = max(values) - min(values)
            assert spread <= 3.0, (image, fraction, spread)
    _report("trend reproduction", f"sweep {elapsed:.0f}s")


def test_energy_compaction_ordering(corpus_images, pca_cache):
    """Averaged E(k): PCA >= Hadamard at every k for N=16 on both images."""
    for name, image in corpus_images.items():
        blocks = tile(image, 16)
        curves = {
            TransformKind.PCA: blockset_energy_curve(pca_cache(name, 16), blocks),
            TransformKind.DCT: blockset_energy_curve(build_dct_basis(16), blocks),
            TransformKind.HADAMARD: blockset_energy_curve(
                build_hadamard_basis(16), blocks
            ),
        }
        pca_values = curves[TransformKind.PCA].values
        had_values = curves[TransformKind.HADAMARD].values
        assert np.all(pca_values >= had_values - 1e-12), name
        for kind, curve in curves.items():
            assert np.all(np.diff(curve.values) >= -1e-12), (name, kind)
            assert abs(curve.values[-1] - 1.0) <= 1e-9, (name, kind)
    _report("energy compaction ordering", "PCA >= Hadamard at every k, N=16")


def test_sweep_determinism(default_sweep):
    """Two identical default sweeps produce byte-identical CSVs."""
    _, _, first_csv = default_sweep
    second = run_sweep(SweepConfig())
    assert second.ok
    assert format_records_csv(second.records).encode() == first_csv.encode()
    _report("sweep determinism", "byte-identical CSVs")
