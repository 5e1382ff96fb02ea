"""blocklab: block-transform image compression lab.

DCT, Walsh-Hadamard and per-image PCA bases with top-k coefficient
retention, plus metrics and a rate-distortion sweep harness.
"""

from .coding import (
    CodedBlock,
    RatePoint,
    build_basis,
    code_blocks,
    compress_image,
    k_from_fraction,
    reconstruct_block,
    retain_top_k,
    retain_top_k_blocks,
)
from .corpus import band_texture_image, bundled_image, bundled_names, radial_edges_image
from .errors import (
    BlocklabError,
    ConvergenceError,
    EmptyTrainingSetError,
    PgmFormatError,
    StructureError,
    SymmetryError,
    TruncatedDataError,
    UnsupportedDepthError,
    UnsupportedSizeError,
)
from .imagecore import BlockSet, GrayImage, encode_pgm, load_pgm, tile, untile
from .jacobi import jacobi_eigh
from .metrics import (
    EnergyCurve,
    blockset_energy_curve,
    energy_curve,
    image_energy_curve,
    mse,
    psnr,
)
from .sweep import (
    SweepConfig,
    SweepRecord,
    SweepResult,
    format_records_csv,
    parse_records_csv,
    run_sweep,
    write_csv,
)
from .transforms import (
    CovarianceAccumulator,
    TransformBasis,
    TransformKind,
    accumulate,
    build_dct_basis,
    build_hadamard_basis,
    dct_factor,
    format_basis,
    forward,
    forward_blocks,
    hadamard_factor,
    inverse,
    inverse_blocks,
    train_pca_basis,
)

__version__ = "0.1.0"

__all__ = [
    "BlockSet",
    "BlocklabError",
    "CodedBlock",
    "ConvergenceError",
    "CovarianceAccumulator",
    "EmptyTrainingSetError",
    "EnergyCurve",
    "GrayImage",
    "PgmFormatError",
    "RatePoint",
    "StructureError",
    "SweepConfig",
    "SweepRecord",
    "SweepResult",
    "SymmetryError",
    "TransformBasis",
    "TransformKind",
    "TruncatedDataError",
    "UnsupportedDepthError",
    "UnsupportedSizeError",
    "accumulate",
    "band_texture_image",
    "blockset_energy_curve",
    "build_basis",
    "build_dct_basis",
    "build_hadamard_basis",
    "bundled_image",
    "bundled_names",
    "code_blocks",
    "compress_image",
    "dct_factor",
    "encode_pgm",
    "energy_curve",
    "format_basis",
    "format_records_csv",
    "forward",
    "forward_blocks",
    "hadamard_factor",
    "image_energy_curve",
    "inverse",
    "inverse_blocks",
    "jacobi_eigh",
    "k_from_fraction",
    "load_pgm",
    "mse",
    "parse_records_csv",
    "psnr",
    "radial_edges_image",
    "reconstruct_block",
    "retain_top_k",
    "retain_top_k_blocks",
    "run_sweep",
    "tile",
    "train_pca_basis",
    "untile",
    "write_csv",
]
