"""Orthonormal block-transform bases and their application.

Three families are supported, all orthonormal so that retained-coefficient
energy arguments are comparable across them:

* 2D DCT-II with the alpha(0) = sqrt(1/N), alpha(u>0) = sqrt(2/N) scaling;
  the row for frequency pair (u, v) evaluates
  alpha(u) alpha(v) cos((2x+1) u pi / 2N) cos((2y+1) v pi / 2N)
  at spatial position (x, y), rows ordered by (u, v) row-major.
* Walsh-Hadamard: (1/N) (H_N kron H_N) with the Sylvester construction
  H_1 = [1], H_2m = [[H_m, H_m], [H_m, -H_m]], natural row ordering.
* PCA: the eigenbasis of the per-image block covariance
  C = (1/M) sum_i (x_i - mu)(x_i - mu)^T, eigenpairs sorted by eigenvalue
  descending, with a deterministic sign convention.

DCT and Hadamard are separable and are always applied as two 1D passes
(one per axis); the result equals the direct d x d product within 1e-9.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import EmptyTrainingSetError, StructureError, UnsupportedSizeError
from .imagecore import BlockSet
from .jacobi import jacobi_eigh

SIGN_EPS = 1e-12


class TransformKind(Enum):
    DCT = "DCT"
    HADAMARD = "Hadamard"
    PCA = "PCA"

    @classmethod
    def parse(cls, name: str) -> "TransformKind":
        for kind in cls:
            if name.lower() == kind.value.lower():
                return kind
        raise ValueError(f"unknown transform {name!r}")


@dataclass(frozen=True)
class TransformBasis:
    """A d x d orthonormal transform whose rows are the basis vectors.

    ``mean`` is the vector subtracted before analysis (zero for DCT and
    Hadamard).  ``eigenvalues`` is populated for PCA only, sorted
    nonincreasing.  ``factor`` holds the N x N 1D factor for the separable
    kinds; the full matrix is its Kronecker square.
    """

    kind: TransformKind
    block_size: int
    matrix: np.ndarray
    mean: np.ndarray
    eigenvalues: np.ndarray | None = None
    factor: np.ndarray | None = None

    def __post_init__(self):
        d = self.block_size * self.block_size
        mat = np.ascontiguousarray(np.asarray(self.matrix, dtype=np.float64))
        if mat.shape != (d, d):
            raise StructureError(f"basis matrix must be {d}x{d}, got {mat.shape}")
        mu = np.ascontiguousarray(np.asarray(self.mean, dtype=np.float64).reshape(-1))
        if mu.size != d:
            raise StructureError(f"mean must have {d} entries, got {mu.size}")
        mat.setflags(write=False)
        mu.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "mean", mu)
        if self.eigenvalues is not None:
            ev = np.asarray(self.eigenvalues, dtype=np.float64).reshape(-1).copy()
            if ev.size != d:
                raise StructureError(f"eigenvalues must have {d} entries")
            ev.setflags(write=False)
            object.__setattr__(self, "eigenvalues", ev)
        if self.factor is not None:
            fac = np.ascontiguousarray(np.asarray(self.factor, dtype=np.float64))
            n = self.block_size
            if fac.shape != (n, n):
                raise StructureError(f"factor must be {n}x{n}")
            fac.setflags(write=False)
            object.__setattr__(self, "factor", fac)

    @property
    def dim(self) -> int:
        return self.block_size * self.block_size


def dct_factor(block_size: int) -> np.ndarray:
    """The orthonormal 1D DCT-II matrix of order N."""
    n = int(block_size)
    if n < 1:
        raise ValueError(f"block size must be >= 1, got {block_size}")
    u = np.arange(n, dtype=np.float64)[:, None]
    x = np.arange(n, dtype=np.float64)[None, :]
    t = np.cos((2.0 * x + 1.0) * u * np.pi / (2.0 * n))
    alpha = np.full(n, np.sqrt(2.0 / n))
    alpha[0] = np.sqrt(1.0 / n)
    return alpha[:, None] * t


def build_dct_basis(block_size: int) -> TransformBasis:
    """Construct the orthonormal 2D DCT-II basis for N x N blocks."""
    t = dct_factor(block_size)
    d = block_size * block_size
    return TransformBasis(
        kind=TransformKind.DCT,
        block_size=block_size,
        matrix=np.kron(t, t),
        mean=np.zeros(d),
        factor=t,
    )


def _sylvester(block_size: int) -> np.ndarray:
    n = int(block_size)
    if n < 1 or n & (n - 1) != 0:
        raise UnsupportedSizeError(
            f"Hadamard transform requires a power-of-two block size, got {block_size}"
        )
    h = np.array([[1.0]])
    while h.shape[0] < n:
        h = np.block([[h, h], [h, -h]])
    return h


def hadamard_factor(block_size: int) -> np.ndarray:
    """The orthonormal 1D Walsh-Hadamard matrix H_N / sqrt(N), Sylvester order."""
    n = int(block_size)
    return _sylvester(n) / np.sqrt(n)


def build_hadamard_basis(block_size: int) -> TransformBasis:
    """Construct the orthonormal 2D Walsh-Hadamard basis for N x N blocks."""
    n = int(block_size)
    h = _sylvester(n)
    d = n * n
    # (1/N) (H kron H) keeps the entries exactly +-1/N; the 1D factor
    # H / sqrt(N) is only used for the separable passes.
    return TransformBasis(
        kind=TransformKind.HADAMARD,
        block_size=n,
        matrix=np.kron(h, h) / n,
        mean=np.zeros(d),
        factor=h / np.sqrt(n),
    )


class CovarianceAccumulator:
    """Streaming accumulator for the block covariance C = E[xx^T] - mu mu^T.

    Partial accumulators over disjoint block ranges can be combined with
    ``merge`` (sums are additive), which makes parallel accumulation safe.
    """

    def __init__(self, dim: int):
        if dim < 1:
            raise StructureError("dimension must be positive")
        self.dim = int(dim)
        self.count = 0
        self.sum = np.zeros(self.dim)
        self.outer_sum = np.zeros((self.dim, self.dim))

    def add(self, block: np.ndarray) -> "CovarianceAccumulator":
        """Accumulate a single d-vector sample."""
        vec = np.asarray(block, dtype=np.float64).reshape(-1)
        if vec.size != self.dim:
            raise StructureError(f"block has {vec.size} entries, expected {self.dim}")
        self.count += 1
        self.sum += vec
        self.outer_sum += np.outer(vec, vec)
        return self

    def add_blocks(self, blocks: np.ndarray) -> "CovarianceAccumulator":
        """Accumulate the rows of an (M, d) matrix in one shot."""
        mat = np.asarray(blocks, dtype=np.float64)
        if mat.ndim != 2 or mat.shape[1] != self.dim:
            raise StructureError(f"blocks must be (M, {self.dim}), got {mat.shape}")
        self.count += mat.shape[0]
        self.sum += mat.sum(axis=0)
        gram = mat.T @ mat
        # BLAS output is only symmetric to rounding; keep the invariant exact.
        self.outer_sum += (gram + gram.T) / 2.0
        return self

    def merge(self, other: "CovarianceAccumulator") -> "CovarianceAccumulator":
        if other.dim != self.dim:
            raise StructureError("cannot merge accumulators of different dimension")
        self.count += other.count
        self.sum += other.sum
        self.outer_sum += other.outer_sum
        return self

    def finalize(self) -> tuple[np.ndarray, np.ndarray]:
        """Return (mean, covariance) over the samples seen so far."""
        if self.count == 0:
            raise EmptyTrainingSetError("covariance of zero samples is undefined")
        mu = self.sum / self.count
        cov = self.outer_sum / self.count - np.outer(mu, mu)
        return mu, (cov + cov.T) / 2.0


def accumulate(acc: CovarianceAccumulator, block: np.ndarray) -> CovarianceAccumulator:
    """Functional alias for ``acc.add(block)``."""
    return acc.add(block)


def _fix_signs(vectors_t: np.ndarray) -> np.ndarray:
    """Make the first entry with magnitude > SIGN_EPS positive in each row."""
    out = vectors_t.copy()
    for row in out:
        significant = np.abs(row) > SIGN_EPS
        if significant.any():
            if row[int(np.argmax(significant))] < 0.0:
                row *= -1.0
    return out


def train_pca_basis(blocks: BlockSet) -> TransformBasis:
    """Fit the PCA (eigen) basis to every block of one image.

    The covariance uses the 1/M population normalizer.  An exactly zero
    covariance (for instance a constant image) short-circuits to the
    identity basis with zero eigenvalues so the pipeline stays total.
    """
    if blocks.count == 0:
        raise EmptyTrainingSetError("cannot train a PCA basis on zero blocks")
    d = blocks.dim
    acc = CovarianceAccumulator(d).add_blocks(blocks.blocks)
    mu, cov = acc.finalize()
    if not cov.any():
        return TransformBasis(
            kind=TransformKind.PCA,
            block_size=blocks.block_size,
            matrix=np.eye(d),
            mean=mu,
            eigenvalues=np.zeros(d),
        )
    values, vectors = jacobi_eigh(cov)
    return TransformBasis(
        kind=TransformKind.PCA,
        block_size=blocks.block_size,
        matrix=_fix_signs(vectors.T),
        mean=mu,
        eigenvalues=values,
    )


def _separable_forward(t: np.ndarray, n: int, mat: np.ndarray) -> np.ndarray:
    """Two 1D passes per block, with the DC term carried exactly.

    The first basis row of both separable transforms is the constant
    1/sqrt(N), so a block's mean contributes N * mean to the (0, 0)
    coefficient and nothing elsewhere.  Transforming only the zero-mean
    residual and adding that term back keeps constant blocks exact instead
    of leaving rounding residue in the discarded coefficients.
    """
    grids = mat.reshape(-1, n, n)
    means = grids.mean(axis=(1, 2))
    coeffs = t @ (grids - means[:, None, None]) @ t.T
    coeffs[:, 0, 0] += n * means
    return coeffs.reshape(-1, n * n)


def _separable_inverse(t: np.ndarray, n: int, mat: np.ndarray) -> np.ndarray:
    grids = mat.reshape(-1, n, n).copy()
    dc = grids[:, 0, 0].copy()
    grids[:, 0, 0] = 0.0
    blocks = t.T @ grids @ t
    blocks += (dc / n)[:, None, None]
    return blocks.reshape(-1, n * n)


def forward_blocks(basis: TransformBasis, blocks: np.ndarray) -> np.ndarray:
    """Forward-transform the rows of an (M, d) block matrix."""
    mat = np.asarray(blocks, dtype=np.float64)
    squeeze = mat.ndim == 1
    if squeeze:
        mat = mat[None, :]
    if mat.ndim != 2 or mat.shape[1] != basis.dim:
        raise StructureError(f"blocks must be (M, {basis.dim}), got {mat.shape}")
    if basis.factor is not None:
        coeffs = _separable_forward(basis.factor, basis.block_size, mat)
    else:
        coeffs = (mat - basis.mean) @ basis.matrix.T
    return coeffs[0] if squeeze else coeffs


def inverse_blocks(basis: TransformBasis, coefficients: np.ndarray) -> np.ndarray:
    """Invert ``forward_blocks`` for the rows of an (M, d) coefficient matrix."""
    mat = np.asarray(coefficients, dtype=np.float64)
    squeeze = mat.ndim == 1
    if squeeze:
        mat = mat[None, :]
    if mat.ndim != 2 or mat.shape[1] != basis.dim:
        raise StructureError(
            f"coefficients must be (M, {basis.dim}), got {mat.shape}"
        )
    if basis.factor is not None:
        blocks = _separable_inverse(basis.factor, basis.block_size, mat)
    else:
        blocks = mat @ basis.matrix + basis.mean
    return blocks[0] if squeeze else blocks


def forward(basis: TransformBasis, block: np.ndarray) -> np.ndarray:
    """Transform one block vector: B (x - mu)."""
    vec = np.asarray(block, dtype=np.float64).reshape(-1)
    if vec.size != basis.dim:
        raise StructureError(f"block has {vec.size} entries, expected {basis.dim}")
    return forward_blocks(basis, vec)


def inverse(basis: TransformBasis, coefficients: np.ndarray) -> np.ndarray:
    """Invert ``forward``: B^T c + mu."""
    vec = np.asarray(coefficients, dtype=np.float64).reshape(-1)
    if vec.size != basis.dim:
        raise StructureError(
            f"coefficient vector has {vec.size} entries, expected {basis.dim}"
        )
    return inverse_blocks(basis, vec)


def format_basis(basis: TransformBasis) -> str:
    """Render a basis in the debug dump format.

    First line is ``kind N d``; each following line is one basis row with
    entries printed to 17 significant digits.
    """
    lines = [f"{basis.kind.value} {basis.block_size} {basis.dim}"]
    for row in basis.matrix:
        lines.append(" ".join(f"{value:.17g}" for value in row))
    return "\n".join(lines) + "\n"
