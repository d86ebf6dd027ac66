"""``negsym`` command line: detect, evaluate, generate."""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .detector import DetectorConfig, detect
from .errors import InputError, NegsymError
from .harness import evaluate, read_manifest, worker_count
from .image import load_image
from .synthetic import REFLECTION, TYPES, SymmetrySpec, generate_dataset, write_images


def _add_knobs(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kmax", type=int, default=9, help="largest order tested (default 9)")
    p.add_argument("--delta", type=float, default=0.05, help="relative tolerance (default 0.05)")
    p.add_argument("--angle-step", type=float, default=1.0, help="reflection axis spacing in degrees")
    p.add_argument("--size", type=int, default=256, help="working resolution in pixels")


def _config(args, workers: int = 1) -> DetectorConfig:
    try:
        return DetectorConfig(k_max=args.kmax, delta=args.delta, angle_step=args.angle_step,
                              working_size=args.size, workers=workers)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def write_curves(result, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["curve", "index_or_angle", "j"])
        for k, v in enumerate(result.rotational.values, start=1):
            w.writerow(["rotational", k, repr(float(v))])
        for a, v in zip(result.reflectional.angles, result.reflectional.values):
            w.writerow(["reflectional", repr(float(a)), repr(float(v))])


def cmd_detect(args) -> int:
    cfg = _config(args, workers=worker_count())
    result = detect(load_image(args.image), cfg)
    if args.curves:
        write_curves(result, args.curves)
    print(json.dumps(result.to_dict(), indent=2))
    return 0


def cmd_evaluate(args) -> int:
    cfg = _config(args)
    report = evaluate(args.images, read_manifest(args.truth), cfg, workers=worker_count())
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.report:
        Path(args.report).write_text(text + "\n")
    print(text)
    return 0


def cmd_generate(args) -> int:
    if args.single:
        if args.type is None:
            raise InputError("--single needs --type")
        spec = SymmetrySpec(args.type, args.order, args.tilt if args.type == REFLECTION else 0.0,
                            args.seed, size=args.size)
        prefix = {"reflection": "refl", "rotation": "rot", "none": "none"}[args.type]
        rows = write_images([(f"{prefix}_o{args.order}_single.pgm", spec)], args.out)
    else:
        rows = generate_dataset(args.per_class, args.seed, args.out, size=args.size)
    print(f"wrote {len(rows)} images and manifest.csv to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="negsym", description="Negentropy-based planar symmetry detection.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="detect symmetry in one image, JSON on stdout")
    p.add_argument("image")
    _add_knobs(p)
    p.add_argument("--curves", metavar="FILE", help="also write both negentropy curves as CSV")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("evaluate", help="score the detector against a ground-truth manifest")
    p.add_argument("--images", required=True, metavar="DIR")
    p.add_argument("--truth", required=True, metavar="CSV")
    p.add_argument("--report", metavar="FILE")
    _add_knobs(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("generate", help="write a synthetic dataset with known symmetries")
    p.add_argument("--out", required=True, metavar="DIR")
    p.add_argument("--per-class", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size", type=int, default=256)
    p.add_argument("--single", action="store_true", help="write one image described by --type/--order/--tilt")
    p.add_argument("--type", choices=TYPES)
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--tilt", type=float, default=0.0)
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NegsymError as exc:
        print(f"negsym: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"negsym: {exc}", file=sys.stderr)
        return InputError.exit_code


if __name__ == "__main__":
    sys.exit(main())
