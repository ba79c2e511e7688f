"""Command-line entry point.

Subcommands: distort, preprocess, sweep, aggregate, similarity. Exit codes:
0 full success, 1 partial per-item failures, 2 configuration/usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import metrics
from .harness import (
    EndpointConfig,
    aggregate,
    load_manifest,
    run_sweep,
    write_aggregate_csv,
)
from .harness.client import AuthError
from .illusions import DistortionSpec, IllusionVariant, apply
from .images import distorted_name, iter_image_files, load_image, save_png
from .preprocess import PreprocessSpec, box_blur, down_up

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_CONFIG = 2


class _OrderedStep(argparse.Action):
    """Collects repeated --down-up/--box-blur flags in command-line order."""

    def __call__(self, parser, namespace, values, option_string=None):
        steps = getattr(namespace, "steps", None) or []
        kind = "down_up" if option_string == "--down-up" else "box_blur"
        steps.append((kind, values))
        namespace.steps = steps


def _add_distort(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("distort", help="render a colour-mixing distortion")
    p.add_argument("inputs", nargs="+", help="image files or directories")
    p.add_argument(
        "--variant",
        required=True,
        choices=[v.value for v in IllusionVariant],
    )
    p.add_argument("--degree", required=True, type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")


def _add_preprocess(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser(
        "preprocess", help="apply low-pass recovery steps, in flag order"
    )
    p.add_argument("inputs", nargs="+", help="image files or directories")
    p.add_argument(
        "--down-up", type=int, action=_OrderedStep, dest="steps",
        metavar="FACTOR", help="area downscale by FACTOR then bilinear upscale",
    )
    p.add_argument(
        "--box-blur", type=int, action=_OrderedStep, dest="steps",
        metavar="KERNEL", help="box blur with an odd KERNEL size",
    )
    p.add_argument("--out", required=True, help="output directory")


def _add_sweep(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("sweep", help="run a distortion sweep against an endpoint")
    p.add_argument("--config", required=True, help="JSON run configuration")
    p.add_argument("--manifest", help="override the config manifest path")
    p.add_argument("--dataset-name", help="override the dataset name")
    p.add_argument("--variants", help="comma-separated variant list override")
    p.add_argument("--degrees", help="comma-separated degree list override")
    p.add_argument(
        "--preprocess",
        help="comma-separated preprocess tags override (none, duF, blurK)",
    )
    p.add_argument("--seed", type=int, help="override the distortion seed")
    p.add_argument("--out", help="override the results path")


def _add_aggregate(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("aggregate", help="accuracy table from a results file")
    p.add_argument("results", help="line-delimited results file")
    p.add_argument("--out", required=True, help="output CSV path")


def _add_similarity(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser(
        "similarity",
        help="SSIM/histogram (and cosine with embeddings) report",
    )
    p.add_argument("--manifest", required=True)
    p.add_argument("--distorted-root", required=True)
    p.add_argument("--variants", required=True, help="comma-separated variants")
    p.add_argument("--degrees", required=True, help="comma-separated degrees")
    p.add_argument("--embeddings", help="embeddings exchange file (JSON lines)")
    p.add_argument("--workers", type=int, default=None,
                   help="parallel per-image workers (default: auto)")
    p.add_argument("--out-dir", required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scmix",
        description="Spatial colour mixing distortions and evaluation tools",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    _add_distort(sub)
    _add_preprocess(sub)
    _add_sweep(sub)
    _add_aggregate(sub)
    _add_similarity(sub)
    return parser


def _collect_inputs(paths: list[str]) -> list[Path]:
    files: list[Path] = []
    for raw in paths:
        files.extend(iter_image_files(raw))
    return files


def cmd_distort(args: argparse.Namespace) -> int:
    if args.degree < 1:
        print("error: --degree must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    spec = DistortionSpec(
        IllusionVariant(args.variant), args.degree, args.seed
    )
    out_dir = Path(args.out)
    failures = []
    for path in _collect_inputs(args.inputs):
        try:
            img = load_image(path)
            result = apply(spec, img)
            name = distorted_name(path.stem, args.variant, args.degree)
            save_png(result, out_dir / f"{name}.png")
        except (OSError, ValueError) as exc:
            failures.append(f"{path}: {exc}")
    for failure in failures:
        print(f"error: {failure}", file=sys.stderr)
    return EXIT_PARTIAL if failures else EXIT_OK


def cmd_preprocess(args: argparse.Namespace) -> int:
    steps = getattr(args, "steps", None) or []
    if not steps:
        print("error: give at least one --down-up or --box-blur step",
              file=sys.stderr)
        return EXIT_CONFIG
    for kind, value in steps:
        try:
            PreprocessSpec(kind, value)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    out_dir = Path(args.out)
    failures = []
    for path in _collect_inputs(args.inputs):
        try:
            img = load_image(path)
            for kind, value in steps:
                img = down_up(img, value) if kind == "down_up" else box_blur(img, value)
            save_png(img, out_dir / f"{path.stem}.png")
        except (OSError, ValueError) as exc:
            failures.append(f"{path}: {exc}")
    for failure in failures:
        print(f"error: {failure}", file=sys.stderr)
    return EXIT_PARTIAL if failures else EXIT_OK


def _parse_list(raw: str) -> list[str]:
    return [item.strip() for item in raw.split(",") if item.strip()]


def cmd_sweep(args: argparse.Namespace) -> int:
    try:
        with open(args.config, encoding="utf-8") as fh:
            config = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        manifest_path = args.manifest or config["dataset"]["manifest"]
        dataset_name = args.dataset_name or config["dataset"].get("name")
        endpoint = EndpointConfig.from_dict(config["endpoint"])
        variants_raw = (
            _parse_list(args.variants) if args.variants else config["variants"]
        )
        degrees_raw = (
            _parse_list(args.degrees) if args.degrees else config["degrees"]
        )
        pre_raw = (
            _parse_list(args.preprocess)
            if args.preprocess
            else config.get("preprocess", ["none"])
        )
        seed = args.seed if args.seed is not None else config.get("seed", 0)
        out_path = args.out or config["output"]
        variants = [IllusionVariant.parse(v) for v in variants_raw]
        degrees = [int(d) for d in degrees_raw]
        pspecs = [PreprocessSpec.parse(t) for t in pre_raw]
        manifest = load_manifest(manifest_path, dataset_name)
    except (KeyError, ValueError, FileNotFoundError) as exc:
        print(f"error: bad configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        stats = run_sweep(
            manifest, endpoint, variants, degrees, pspecs, seed, out_path
        )
    except AuthError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(
        f"sweep done: {stats.completed} completed, {stats.skipped} resumed, "
        f"{stats.failed} failed"
    )
    return EXIT_PARTIAL if stats.failed else EXIT_OK


def cmd_aggregate(args: argparse.Namespace) -> int:
    if not Path(args.results).exists():
        print(f"error: results file not found: {args.results}", file=sys.stderr)
        return EXIT_CONFIG
    warnings: list[str] = []
    table = aggregate(args.results, warnings=warnings)
    for warning in warnings:
        print(f"warning: {warning}", file=sys.stderr)
    if not table:
        print("warning: no rows aggregated", file=sys.stderr)
    write_aggregate_csv(table, args.out)
    return EXIT_OK


def cmd_similarity(args: argparse.Namespace) -> int:
    try:
        manifest = load_manifest(args.manifest)
        variants = [IllusionVariant.parse(v).value
                    for v in _parse_list(args.variants)]
        degrees = [int(d) for d in _parse_list(args.degrees)]
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        report = metrics.similarity_report(
            manifest.entries,
            args.distorted_root,
            variants,
            degrees,
            embeddings_path=args.embeddings,
            workers=args.workers,
        )
    except metrics.EmbeddingFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    metrics.write_report_csv(report, out_dir / "similarity.csv")
    metrics.write_aggregate_csv(report, out_dir / "similarity_agg.csv")
    for error in report.errors:
        print(f"error: {error}", file=sys.stderr)
    return EXIT_PARTIAL if report.errors else EXIT_OK


_COMMANDS = {
    "distort": cmd_distort,
    "preprocess": cmd_preprocess,
    "sweep": cmd_sweep,
    "aggregate": cmd_aggregate,
    "similarity": cmd_similarity,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        # per-item I/O problems are handled inside the commands; anything
        # that escapes to here is a configuration/environment error
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
