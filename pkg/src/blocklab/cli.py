"""Command-line interface: compress one image, run a sweep, or dump data.

Exit codes: 0 on success, 1 for pipeline or I/O failures (including a
partially failed sweep grid, whose completed rows are still written), and
2 for flag or configuration errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .coding import build_basis, compress_image
from .errors import BlocklabError
from .imagecore import encode_pgm, load_pgm, tile
from .metrics import image_energy_curve, mse, psnr
from .sweep import (
    DEFAULT_BLOCK_SIZES,
    DEFAULT_FRACTIONS,
    DEFAULT_TRANSFORMS,
    SweepConfig,
    energy_output_path,
    format_energy_csv,
    run_sweep,
    write_csv,
    write_energy_csv,
)
from .transforms import TransformKind, format_basis

_TRANSFORM_CHOICES = ("dct", "hadamard", "pca")


def _fmt(value: float) -> str:
    import math

    return "inf" if math.isinf(value) else f"{value:.17g}"


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _check_hadamard(kind: TransformKind, block_size: int) -> str | None:
    if kind is TransformKind.HADAMARD and (
        block_size < 1 or block_size & (block_size - 1) != 0
    ):
        return f"unsupported block size {block_size} for hadamard (need a power of two)"
    return None


def _load_image(path: str):
    return load_pgm(Path(path).read_bytes())


def cmd_compress(args: argparse.Namespace) -> int:
    kind = TransformKind.parse(args.transform)
    if not 0.0 < args.fraction <= 1.0:
        return _fail(f"fraction must be in (0, 1], got {args.fraction}", 2)
    if args.block_size < 1:
        return _fail(f"block size must be >= 1, got {args.block_size}", 2)
    message = _check_hadamard(kind, args.block_size)
    if message:
        return _fail(message, 2)
    try:
        image = _load_image(args.input)
        reconstruction, rate_point = compress_image(
            image, kind, args.block_size, args.fraction
        )
        err = mse(image, reconstruction)
        Path(args.output).write_bytes(encode_pgm(reconstruction))
    except (BlocklabError, OSError) as exc:
        return _fail(str(exc), 1)
    print(
        f"k={rate_point.k} rate={_fmt(rate_point.rate)} "
        f"mse={_fmt(err)} psnr_db={_fmt(psnr(err))}"
    )
    return 0


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


_CONFIG_KEYS = ("images", "block_sizes", "fractions", "transforms", "emit_energy", "threads")


def _build_sweep_config(args: argparse.Namespace) -> SweepConfig:
    settings: dict[str, str] = {}
    if args.config:
        settings = _parse_config_file(args.config)
        unknown = set(settings) - set(_CONFIG_KEYS)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
    if args.images is not None:
        settings["images"] = args.images
    if args.block_sizes is not None:
        settings["block_sizes"] = args.block_sizes
    if args.fractions is not None:
        settings["fractions"] = args.fractions
    if args.transforms is not None:
        settings["transforms"] = args.transforms
    if args.emit_energy:
        settings["emit_energy"] = "true"
    if args.threads is not None:
        settings["threads"] = str(args.threads)

    def _split(text: str) -> list[str]:
        return [item.strip() for item in text.split(",") if item.strip()]

    config = SweepConfig(
        image_paths=tuple(_split(settings["images"])) if "images" in settings else (),
        block_sizes=(
            tuple(int(v) for v in _split(settings["block_sizes"]))
            if "block_sizes" in settings
            else DEFAULT_BLOCK_SIZES
        ),
        fractions=(
            tuple(float(v) for v in _split(settings["fractions"]))
            if "fractions" in settings
            else DEFAULT_FRACTIONS
        ),
        transforms=(
            tuple(TransformKind.parse(v) for v in _split(settings["transforms"]))
            if "transforms" in settings
            else DEFAULT_TRANSFORMS
        ),
        emit_energy=_parse_bool(settings.get("emit_energy", "false")),
        jobs=int(settings["threads"]) if "threads" in settings else None,
    )
    config.validate()
    return config


def cmd_sweep(args: argparse.Namespace) -> int:
    try:
        config = _build_sweep_config(args)
    except (ValueError, OSError) as exc:
        return _fail(f"bad sweep configuration: {exc}", 2)

    def _progress(record):
        print(
            f"cell image={record.image} transform={record.transform.value} "
            f"N={record.block_size} f={record.fraction:g} psnr_db={_fmt(record.psnr_db)}",
            file=sys.stderr,
        )

    result = run_sweep(config, progress=_progress)
    try:
        write_csv(result.records, args.out)
        if config.emit_energy:
            write_energy_csv(result.energy, energy_output_path(args.out))
    except OSError as exc:
        return _fail(str(exc), 1)
    for failure in result.failures:
        print(f"error: image {failure.image}: {failure.error}", file=sys.stderr)
    return 0 if result.ok else 1


def cmd_basis_dump(args: argparse.Namespace) -> int:
    kind = TransformKind.parse(args.transform)
    if args.block_size < 1:
        return _fail(f"block size must be >= 1, got {args.block_size}", 2)
    message = _check_hadamard(kind, args.block_size)
    if message:
        return _fail(message, 2)
    if kind is TransformKind.PCA and not args.input:
        return _fail("pca basis dump requires --input to train on", 2)
    try:
        blocks = None
        if kind is TransformKind.PCA:
            blocks = tile(_load_image(args.input), args.block_size)
        basis = build_basis(kind, args.block_size, blocks)
    except (BlocklabError, OSError) as exc:
        return _fail(str(exc), 1)
    sys.stdout.write(format_basis(basis))
    return 0


def cmd_energy(args: argparse.Namespace) -> int:
    kind = TransformKind.parse(args.transform)
    if args.block_size < 1:
        return _fail(f"block size must be >= 1, got {args.block_size}", 2)
    message = _check_hadamard(kind, args.block_size)
    if message:
        return _fail(message, 2)
    try:
        image = _load_image(args.input)
        curve = image_energy_curve(image, kind, args.block_size)
        text = format_energy_csv(
            [(Path(args.input).stem, kind, args.block_size, curve)]
        )
        if args.out:
            Path(args.out).write_text(text, encoding="ascii")
        else:
            sys.stdout.write(text)
    except (BlocklabError, OSError) as exc:
        return _fail(str(exc), 1)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blocklab",
        description="Block-transform image compression lab",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_compress = sub.add_parser("compress", help="compress and reconstruct one PGM")
    p_compress.add_argument("--input", required=True, help="input PGM path")
    p_compress.add_argument(
        "--transform", required=True, choices=_TRANSFORM_CHOICES
    )
    p_compress.add_argument("--block-size", type=int, required=True, metavar="N")
    p_compress.add_argument("--fraction", type=float, required=True, metavar="F")
    p_compress.add_argument("--output", required=True, help="reconstructed PGM path")
    p_compress.set_defaults(func=cmd_compress)

    p_sweep = sub.add_parser("sweep", help="run the rate-distortion grid")
    p_sweep.add_argument("--config", help="key=value config file")
    p_sweep.add_argument("--images", help="comma-separated PGM paths")
    p_sweep.add_argument("--block-sizes", dest="block_sizes", help="comma-separated")
    p_sweep.add_argument("--fractions", help="comma-separated")
    p_sweep.add_argument("--transforms", help="comma-separated subset of dct,hadamard,pca")
    p_sweep.add_argument("--emit-energy", action="store_true")
    p_sweep.add_argument("--threads", type=int, help="concurrency degree")
    p_sweep.add_argument("--out", required=True, help="results CSV path")
    p_sweep.set_defaults(func=cmd_sweep)

    p_dump = sub.add_parser("basis-dump", help="print a basis as text")
    p_dump.add_argument("--transform", required=True, choices=_TRANSFORM_CHOICES)
    p_dump.add_argument("--block-size", type=int, required=True, metavar="N")
    p_dump.add_argument("--input", help="training PGM (required for pca)")
    p_dump.set_defaults(func=cmd_basis_dump)

    p_energy = sub.add_parser("energy", help="emit the energy-compaction curve")
    p_energy.add_argument("--input", required=True, help="input PGM path")
    p_energy.add_argument("--transform", required=True, choices=_TRANSFORM_CHOICES)
    p_energy.add_argument("--block-size", type=int, required=True, metavar="N")
    p_energy.add_argument("--out", help="energy CSV path (default: stdout)")
    p_energy.set_defaults(func=cmd_energy)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
