"""Exception types shared across the package."""


class BlocklabError(Exception):
    """Base class for all blocklab-specific errors."""


class PgmFormatError(BlocklabError):
    """Malformed PGM magic, header or sample data."""


class UnsupportedDepthError(PgmFormatError):
    """PGM maxval other than 255 (only 8-bit samples are supported)."""


class TruncatedDataError(PgmFormatError):
    """PGM pixel payload shorter than the header promises."""


class StructureError(BlocklabError):
    """Dimension or metadata mismatch between related objects."""


class UnsupportedSizeError(BlocklabError):
    """Block size not supported by the requested transform."""


class EmptyTrainingSetError(BlocklabError):
    """PCA training requested with zero sample blocks."""


class SymmetryError(BlocklabError):
    """Matrix handed to the eigensolver is not symmetric within tolerance."""


class ConvergenceError(BlocklabError):
    """Eigensolver hit its sweep cap before reaching the target accuracy."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual
