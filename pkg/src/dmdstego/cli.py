"""Command-line front end.

Subcommands cover the full workflow: hologram synthesis from an intensity
image, binary pattern encoding, keyed data embedding and extraction,
pattern decoding, capacity reports, numerical reconstruction, the 4f
filter simulation, and SSIM scoring.  Reports go to stdout as JSON with
sorted keys; artifacts go to files.  Exit codes: 0 success, 1 I/O or
format errors, 2 capacity or usage errors.

--pitch is always the micromirror pitch; commands operating on fields
sampled at one value per 4x4 block scale it internally.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

import numpy as np

from .codebook import STRATEGIES, build_codebook
from .formats import (
    FormatError,
    read_field,
    read_image,
    read_pattern,
    write_field,
    write_image,
    write_pattern,
    write_report,
)
from .modulator import (
    NormalizationParams,
    decode_field,
    encode_field,
    normalize_field,
    quantize_field,
)
from .optics import (
    AliasingGuardWarning,
    ApertureSpec,
    PropagationParams,
    field_correlation,
    generate_hologram,
    reconstruct,
    simulate_4f,
    ssim,
)
from .stego import (
    FILL_STRATEGIES,
    BadHeaderError,
    InvalidEmbeddedPatternError,
    PayloadTooLargeError,
    StegoKey,
    bits_to_bytes,
    bytes_to_bits,
    capacity_of_plan,
    embed,
    extract,
)
from .superpixel import BLOCK, PhaseAssignment


class UsageError(ValueError):
    pass


def _key_type(text: str) -> StegoKey:
    try:
        return StegoKey.from_hex(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _assignment_type(text: str) -> PhaseAssignment:
    try:
        return PhaseAssignment.from_string(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _superpixels_type(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    if len(parts) != 2 or not all(p.isdigit() and int(p) > 0 for p in parts):
        raise argparse.ArgumentTypeError(f"expected WIDTHxHEIGHT, got {text!r}")
    return int(parts[0]), int(parts[1])


def _center_type(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected FX,FY, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected FX,FY, got {text!r}")


def _emit(report: dict) -> None:
    print(write_report(report))


def _propagation(args, block_field: bool) -> PropagationParams:
    pitch = args.pitch * BLOCK if block_field else args.pitch
    return PropagationParams(wavelength=args.wavelength, distance=args.distance, pitch=pitch)


def _collect_warnings(caught) -> list[str]:
    return [str(w.message) for w in caught if issubclass(w.category, AliasingGuardWarning)]


def cmd_hologram(args) -> int:
    obj = read_image(args.input)
    width, height = args.superpixels
    params = _propagation(args, block_field=True)
    seed = None if args.no_diffuser else args.diffuser_seed
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", AliasingGuardWarning)
        field = generate_hologram(obj, params, (height, width), diffuser_seed=seed)
    write_field(args.output, field)
    _emit({
        "alias_free_distance": min(params.alias_free_distance(height), params.alias_free_distance(width)),
        "height": height,
        "warnings": _collect_warnings(caught),
        "width": width,
    })
    return 0


def cmd_encode(args) -> int:
    if args.strategy == "random" and args.key is None:
        raise UsageError("--key is required with --strategy random")
    field = read_field(args.input)
    codebook = build_codebook(args.assignment)
    result = encode_field(field, codebook, strategy=args.strategy, key=args.key,
                          params=NormalizationParams(peak_fraction=args.alpha))
    write_pattern(args.output, result.mirrors)
    _emit({
        "height": result.mirrors.shape[0],
        "scale": result.scale,
        "width": result.mirrors.shape[1],
    })
    return 0


def cmd_embed(args) -> int:
    field = read_field(args.input)
    payload = Path(args.payload).read_bytes()
    codebook = build_codebook(args.assignment)
    scaled, scale = normalize_field(field, NormalizationParams(peak_fraction=args.alpha))
    plan = quantize_field(scaled, codebook)
    mirrors = embed(plan, bytes_to_bits(payload), args.key, codebook, fill=args.fill)
    write_pattern(args.output, mirrors)
    _emit({
        "capacity_bits": capacity_of_plan(plan, codebook),
        "payload_bits": 8 * len(payload),
        "scale": scale,
    })
    return 0


def cmd_extract(args) -> int:
    mirrors = read_pattern(args.input)
    codebook = build_codebook(args.assignment)
    bits = extract(mirrors, args.key, codebook)
    Path(args.output).write_bytes(bits_to_bytes(bits))
    _emit({"payload_bits": int(bits.size)})
    return 0


def cmd_decode(args) -> int:
    mirrors = read_pattern(args.input)
    codebook = build_codebook(args.assignment)
    _, values = decode_field(mirrors, codebook)
    write_field(args.output, values)
    _emit({"height": values.shape[0], "width": values.shape[1]})
    return 0


def cmd_capacity(args) -> int:
    field = read_field(args.input)
    codebook = build_codebook(args.assignment)
    scaled, _ = normalize_field(field, NormalizationParams(peak_fraction=args.alpha))
    plan = quantize_field(scaled, codebook)
    _emit({"capacity_bits": capacity_of_plan(plan, codebook)})
    return 0


def cmd_reconstruct(args) -> int:
    field = read_field(args.input)
    params = _propagation(args, block_field=True)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", AliasingGuardWarning)
        image = reconstruct(field, params)
    write_image(args.output, image)
    _emit({
        "height": image.shape[0],
        "warnings": _collect_warnings(caught),
        "width": image.shape[1],
    })
    return 0


def cmd_sim4f(args) -> int:
    mirrors = read_pattern(args.input)
    aperture = ApertureSpec(center=args.aperture_center, radius=args.aperture_radius)
    out = simulate_4f(mirrors, aperture=aperture, assignment=args.assignment)
    write_field(args.output, out)
    report = {"height": out.shape[0], "width": out.shape[1]}
    if args.compare is not None:
        report["correlation"] = field_correlation(out, read_field(args.compare))
    _emit(report)
    return 0


def cmd_ssim(args) -> int:
    score = ssim(read_image(args.input), read_image(args.reference))
    print(f"{score:.4f}")
    return 0


def _add_geometry(sub) -> None:
    sub.add_argument("--wavelength", type=float, required=True, help="illumination wavelength in meters")
    sub.add_argument("--distance", type=float, required=True, help="propagation distance in meters")
    sub.add_argument("--pitch", type=float, required=True, help="micromirror pitch in meters")


def _add_assignment(sub) -> None:
    sub.add_argument("--assignment", type=_assignment_type, default=None,
                     help="phase assignment override: 16 comma-separated indices")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dmdstego",
                                     description="Superpixel DMD modulation with keyed data hiding.")
    subs = parser.add_subparsers(dest="command", required=True)
    default_aperture = ApertureSpec()

    p = subs.add_parser("hologram", help="compute a hologram field from an intensity image")
    p.add_argument("--input", required=True, help="object image (PGM)")
    p.add_argument("--output", required=True, help="output field (CFLD)")
    _add_geometry(p)
    p.add_argument("--superpixels", type=_superpixels_type, required=True,
                   help="target grid as WIDTHxHEIGHT, e.g. 480x270")
    p.add_argument("--diffuser-seed", type=int, default=0, help="random phase seed (default 0)")
    p.add_argument("--no-diffuser", action="store_true", help="disable the random phase diffuser")
    p.set_defaults(func=cmd_hologram)

    p = subs.add_parser("encode", help="turn a complex field into a binary mirror pattern")
    p.add_argument("--input", required=True, help="input field (CFLD)")
    p.add_argument("--output", required=True, help="output pattern (PBM)")
    p.add_argument("--alpha", type=float, default=0.8, help="peak modulus fraction (default 0.8)")
    p.add_argument("--strategy", choices=STRATEGIES, default="min", help="pattern choice within each group")
    p.add_argument("--key", type=_key_type, default=None, help="16 hex digits; required for --strategy random")
    _add_assignment(p)
    p.set_defaults(func=cmd_encode)

    p = subs.add_parser("embed", help="encode a field while hiding a payload in the pattern choices")
    p.add_argument("--input", required=True, help="input field (CFLD)")
    p.add_argument("--payload", required=True, help="payload file to hide")
    p.add_argument("--output", required=True, help="output pattern (PBM)")
    p.add_argument("--key", type=_key_type, required=True, help="16 hex digits")
    p.add_argument("--alpha", type=float, default=0.8, help="peak modulus fraction (default 0.8)")
    p.add_argument("--fill", choices=FILL_STRATEGIES, default="min", help="pattern choice after the payload ends")
    _add_assignment(p)
    p.set_defaults(func=cmd_embed)

    p = subs.add_parser("extract", help="recover a hidden payload from a mirror pattern")
    p.add_argument("--input", required=True, help="input pattern (PBM)")
    p.add_argument("--output", required=True, help="recovered payload file")
    p.add_argument("--key", type=_key_type, required=True, help="16 hex digits")
    _add_assignment(p)
    p.set_defaults(func=cmd_extract)

    p = subs.add_parser("decode", help="recover the complex field a pattern modulates")
    p.add_argument("--input", required=True, help="input pattern (PBM)")
    p.add_argument("--output", required=True, help="output field (CFLD)")
    _add_assignment(p)
    p.set_defaults(func=cmd_decode)

    p = subs.add_parser("capacity", help="report the hiding capacity of a field")
    p.add_argument("--input", required=True, help="input field (CFLD)")
    p.add_argument("--alpha", type=float, default=0.8, help="peak modulus fraction (default 0.8)")
    _add_assignment(p)
    p.set_defaults(func=cmd_capacity)

    p = subs.add_parser("reconstruct", help="back-propagate a field to an 8-bit image")
    p.add_argument("--input", required=True, help="input field (CFLD)")
    p.add_argument("--output", required=True, help="output image (PGM)")
    _add_geometry(p)
    p.set_defaults(func=cmd_reconstruct)

    p = subs.add_parser("sim4f", help="simulate the 4f spatial filter on a mirror pattern")
    p.add_argument("--input", required=True, help="input pattern (PBM)")
    p.add_argument("--output", required=True, help="output field (CFLD)")
    p.add_argument("--aperture-center", type=_center_type, default=default_aperture.center,
                   help="aperture center as FX,FY in cycles per mirror")
    p.add_argument("--aperture-radius", type=float, default=default_aperture.radius,
                   help="aperture radius in cycles per mirror")
    p.add_argument("--compare", default=None, help="field (CFLD) to correlate the output against")
    _add_assignment(p)
    p.set_defaults(func=cmd_sim4f)

    p = subs.add_parser("ssim", help="print the SSIM score of two images")
    p.add_argument("--input", required=True, help="image (PGM)")
    p.add_argument("--reference", required=True, help="reference image (PGM)")
    p.set_defaults(func=cmd_ssim)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PayloadTooLargeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (FormatError, BadHeaderError, InvalidEmbeddedPatternError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
