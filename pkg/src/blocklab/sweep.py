"""Rate-distortion sweep over images x transforms x block sizes x fractions.

The default grid is block sizes {4, 8, 16, 32}, coefficient fractions
{0.05, 0.1, 0.2, 0.3, 0.5, 0.75, 1.0} and all three transforms; with no
image paths the bundled synthetic corpus is used.  The PCA basis is
retrained per (image, block size) pair on all blocks of that image and is
never shared across images or sizes.

Results are emitted in deterministic (image, transform, block size,
fraction) order, so two runs on identical inputs produce byte-identical
CSVs regardless of the concurrency degree.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .coding import build_basis, code_blocks, k_from_fraction
from .corpus import BUNDLED_IMAGES
from .imagecore import BlockSet, GrayImage, load_pgm, tile, untile
from .metrics import EnergyCurve, blockset_energy_curve, mse, psnr
from .transforms import TransformKind

DEFAULT_BLOCK_SIZES = (4, 8, 16, 32)
DEFAULT_FRACTIONS = (0.05, 0.1, 0.2, 0.3, 0.5, 0.75, 1.0)
DEFAULT_TRANSFORMS = (TransformKind.DCT, TransformKind.HADAMARD, TransformKind.PCA)

RESULTS_HEADER = "image,transform,block_size,fraction,k,rate,mse,psnr_db"
ENERGY_HEADER = "image,transform,block_size,k,energy_fraction"


@dataclass
class SweepConfig:
    """Grid definition for one sweep run.

    An empty ``image_paths`` selects the bundled corpus.  ``jobs`` is the
    concurrency degree across (image, block size) groups; ``None`` means
    the available parallelism.
    """

    image_paths: tuple[str, ...] = ()
    block_sizes: tuple[int, ...] = DEFAULT_BLOCK_SIZES
    fractions: tuple[float, ...] = DEFAULT_FRACTIONS
    transforms: tuple[TransformKind, ...] = DEFAULT_TRANSFORMS
    output_path: str | Path | None = None
    emit_energy: bool = False
    jobs: int | None = None

    def validate(self) -> None:
        if not self.block_sizes:
            raise ValueError("at least one block size is required")
        for n in self.block_sizes:
            if int(n) != n or n < 2:
                raise ValueError(f"block sizes must be integers >= 2, got {n}")
        if not self.fractions:
            raise ValueError("at least one fraction is required")
        for f in self.fractions:
            if not 0.0 < f <= 1.0:
                raise ValueError(f"fractions must lie in (0, 1], got {f}")
        if not self.transforms:
            raise ValueError("at least one transform is required")
        for kind in self.transforms:
            if not isinstance(kind, TransformKind):
                raise ValueError(f"not a transform kind: {kind!r}")
        if TransformKind.HADAMARD in self.transforms:
            for n in self.block_sizes:
                if n & (n - 1) != 0:
                    raise ValueError(
                        f"Hadamard requires power-of-two block sizes, got {n}"
                    )
        if self.jobs is not None and self.jobs < 1:
            raise ValueError(f"jobs must be >= 1, got {self.jobs}")


@dataclass(frozen=True)
class SweepRecord:
    """One grid point: identifiers plus the measured rate and distortion."""

    image: str
    transform: TransformKind
    block_size: int
    fraction: float
    k: int
    rate: float
    mse: float
    psnr_db: float

    def __post_init__(self):
        d = self.block_size * self.block_size
        if self.rate != self.k / d:
            raise ValueError(f"rate {self.rate!r} != k/N^2 {self.k / d!r}")
        if self.mse == 0.0:
            if not math.isinf(self.psnr_db):
                raise ValueError("zero MSE must report the PSNR cap")
        elif abs(self.psnr_db - psnr(self.mse)) > 1e-9:
            raise ValueError(
                f"psnr_db {self.psnr_db!r} inconsistent with mse {self.mse!r}"
            )


@dataclass(frozen=True)
class ImageFailure:
    image: str
    error: str


@dataclass
class SweepResult:
    records: list[SweepRecord] = field(default_factory=list)
    energy: list[tuple[str, TransformKind, int, EnergyCurve]] = field(
        default_factory=list
    )
    failures: list[ImageFailure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _image_sources(config: SweepConfig) -> list[tuple[str, Callable[[], GrayImage]]]:
    if not config.image_paths:
        return [(name, loader) for name, loader in BUNDLED_IMAGES.items()]

    def _file_loader(path: str) -> Callable[[], GrayImage]:
        return lambda: load_pgm(Path(path).read_bytes())

    return [(Path(p).stem, _file_loader(str(p))) for p in config.image_paths]


def _clamped_reconstruction(template: BlockSet, blocks: np.ndarray) -> GrayImage:
    coded = BlockSet(
        block_size=template.block_size,
        blocks=blocks,
        grid_cols=template.grid_cols,
        grid_rows=template.grid_rows,
        orig_width=template.orig_width,
        orig_height=template.orig_height,
    )
    raw = untile(coded)
    return GrayImage(raw.width, raw.height, np.clip(raw.data, 0.0, 255.0))


def _run_group(
    image_id: str,
    image: GrayImage,
    block_size: int,
    config: SweepConfig,
    progress: Callable[[SweepRecord], None] | None,
):
    """All cells for one (image, block size): every transform and fraction."""
    blocks = tile(image, block_size)
    d = blocks.dim
    records: dict[tuple[int, int], SweepRecord] = {}
    energy: list[tuple[str, TransformKind, int, EnergyCurve]] = []
    for kind_index, kind in enumerate(config.transforms):
        basis = build_basis(kind, block_size, blocks)
        for fraction_index, fraction in enumerate(config.fractions):
            k = k_from_fraction(fraction, block_size)
            reconstruction = _clamped_reconstruction(
                blocks, code_blocks(basis, blocks, k)
            )
            err = mse(image, reconstruction)
            record = SweepRecord(
                image=image_id,
                transform=kind,
                block_size=block_size,
                fraction=fraction,
                k=k,
                rate=k / d,
                mse=err,
                psnr_db=psnr(err),
            )
            records[(kind_index, fraction_index)] = record
            if progress is not None:
                progress(record)
        if config.emit_energy:
            energy.append(
                (image_id, kind, block_size, blockset_energy_curve(basis, blocks))
            )
    return records, energy


def run_sweep(
    config: SweepConfig,
    progress: Callable[[SweepRecord], None] | None = None,
) -> SweepResult:
    """Execute the grid, isolating failures per image.

    A failing image (unreadable file, malformed PGM, ...) is recorded in
    ``failures`` and the rest of the grid still runs.
    """
    config.validate()
    result = SweepResult()

    images: list[tuple[int, str, GrayImage]] = []
    for index, (image_id, loader) in enumerate(_image_sources(config)):
        try:
            images.append((index, image_id, loader()))
        except Exception as exc:  # noqa: BLE001 - isolation boundary
            result.failures.append(ImageFailure(image_id, f"{exc}"))

    groups = [
        (image_index, image_id, image, n_index, n)
        for image_index, image_id, image in images
        for n_index, n in enumerate(config.block_sizes)
    ]

    def _task(group):
        image_index, image_id, image, n_index, n = group
        try:
            records, energy = _run_group(image_id, image, n, config, progress)
            return image_index, image_id, n_index, records, energy, None
        except Exception as exc:  # noqa: BLE001 - isolation boundary
            return image_index, image_id, n_index, None, None, f"N={n}: {exc}"

    jobs = config.jobs
    if jobs is None:
        import os

        jobs = os.cpu_count() or 1
    if jobs > 1 and len(groups) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_task, groups))
    else:
        outcomes = [_task(group) for group in groups]

    by_group: dict[tuple[int, int], dict] = {}
    energy_by_group: dict[tuple[int, int], list] = {}
    for image_index, image_id, n_index, records, energy, error in outcomes:
        if error is not None:
            result.failures.append(ImageFailure(image_id, error))
            continue
        by_group[(image_index, n_index)] = records
        energy_by_group[(image_index, n_index)] = energy

    for image_index, _, _ in images:
        for kind_index in range(len(config.transforms)):
            for n_index in range(len(config.block_sizes)):
                records = by_group.get((image_index, n_index))
                if records is None:
                    continue
                for fraction_index in range(len(config.fractions)):
                    result.records.append(records[(kind_index, fraction_index)])
    if config.emit_energy:
        for image_index, _, _ in images:
            for kind_index in range(len(config.transforms)):
                for n_index in range(len(config.block_sizes)):
                    energy = energy_by_group.get((image_index, n_index))
                    if energy is None:
                        continue
                    result.energy.append(energy[kind_index])
    return result


def _format_float(value: float) -> str:
    if math.isinf(value):
        return "inf"
    return f"{value:.17g}"


def format_records_csv(records: Sequence[SweepRecord]) -> str:
    lines = [RESULTS_HEADER]
    for r in records:
        lines.append(
            ",".join(
                (
                    r.image,
                    r.transform.value,
                    str(r.block_size),
                    _format_float(r.fraction),
                    str(r.k),
                    _format_float(r.rate),
                    _format_float(r.mse),
                    _format_float(r.psnr_db),
                )
            )
        )
    return "\n".join(lines) + "\n"


def parse_records_csv(text: str) -> list[SweepRecord]:
    lines = [line for line in text.splitlines() if line]
    if not lines or lines[0] != RESULTS_HEADER:
        raise ValueError(f"unexpected results header: {lines[:1]!r}")
    records = []
    for line in lines[1:]:
        image, transform, n, fraction, k, rate, err, db = line.split(",")
        records.append(
            SweepRecord(
                image=image,
                transform=TransformKind.parse(transform),
                block_size=int(n),
                fraction=float(fraction),
                k=int(k),
                rate=float(rate),
                mse=float(err),
                psnr_db=float(db),
            )
        )
    return records


def format_energy_csv(
    curves: Sequence[tuple[str, TransformKind, int, EnergyCurve]],
) -> str:
    lines = [ENERGY_HEADER]
    for image_id, kind, block_size, curve in curves:
        for k, value in enumerate(curve.values, start=1):
            lines.append(
                ",".join(
                    (
                        image_id,
                        kind.value,
                        str(block_size),
                        str(k),
                        _format_float(float(value)),
                    )
                )
            )
    return "\n".join(lines) + "\n"


def energy_output_path(output_path: str | Path) -> Path:
    path = Path(output_path)
    return path.with_name(path.stem + "_energy" + (path.suffix or ".csv"))


def write_csv(records: Sequence[SweepRecord], destination: str | Path) -> None:
    Path(destination).write_text(format_records_csv(records), encoding="ascii")


def write_energy_csv(
    curves: Sequence[tuple[str, TransformKind, int, EnergyCurve]],
    destination: str | Path,
) -> None:
    Path(destination).write_text(format_energy_csv(curves), encoding="ascii")
