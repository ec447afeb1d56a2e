"""Command-line front end: extract, eval-loo, eval-split, bench-time, bench-noise.

Identical invocations with identical inputs and seeds produce byte-identical
output files (timing columns excepted in bench commands). Exit codes: 0 on
success, 1 on dataset or pipeline errors, 2 on bad flags.
"""

from __future__ import annotations

import argparse
import os
import sys

from .bench import bench_descriptor, noise_sweep, write_noise_csv, write_timing_csv
from .features import DESCRIPTORS, FeatureConfig, extract_dataset_features, save_features
from .image import LabeledDataset, load_dataset, synth_dataset
from .recognition import evaluate_loo, evaluate_split_kfold, write_eval_csv


def _pair(text: str, sep: str, what: str) -> tuple[int, int]:
    try:
        a, b = text.lower().split(sep)
        return int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{what} must look like AxB, got {text!r}") from None


def _grid(text):
    return _pair(text, "x", "grid")


def _tile(text):
    return _pair(text, "x", "tile")


def _size(text):
    return _pair(text, "x", "size")


def _synthetic(text):
    return _pair(text, "x", "synthetic layout")


def _variances(text):
    try:
        return [float(v) for v in text.split(",") if v != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"variances must be comma-separated numbers, got {text!r}") from None


def _descriptors(text):
    names = [d.strip() for d in text.split(",") if d.strip()]
    for d in names:
        if d not in DESCRIPTORS:
            raise argparse.ArgumentTypeError(f"unknown descriptor {d!r}, expected from {DESCRIPTORS}")
    return names


def _default_seed() -> int:
    return int(os.environ.get("LDGP_SEED", "0"))


def _add_dataset_args(parser):
    parser.add_argument("--dataset", metavar="DIR", help="dataset root laid out as DIR/<class>/<images>")
    parser.add_argument("--manifest", metavar="CSV", help="CSV manifest of relative_path,label lines (wins over --dataset)")
    parser.add_argument("--synthetic", type=_synthetic, metavar="CxP",
                        help="generate C classes with P images each instead of loading files")
    parser.add_argument("--size", type=_size, default=(64, 64), metavar="WxH",
                        help="synthetic image size (default 64x64)")
    parser.add_argument("--seed", type=int, default=None,
                        help="RNG seed; defaults to env LDGP_SEED, else 0")


def _add_feature_args(parser):
    parser.add_argument("--descriptor", choices=DESCRIPTORS, default="ldgp",
                        help="code image descriptor (default ldgp)")
    parser.add_argument("--order", type=int, default=2,
                        help="pattern order, >= 2 for ldgp/ldp, ignored for lbp (default 2)")
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--grid", type=_grid, default=None, metavar="RxC",
                       help="region grid as row and column counts (default 4x4)")
    group.add_argument("--tile", type=_tile, default=None, metavar="WxH",
                       help="alternative to --grid: target region size in pixels, converted "
                            "to a grid from the first image's dimensions")
    parser.add_argument("--bins", type=int, default=8,
                        help="histogram bins per region per code image (default 8)")
    parser.add_argument("--threads", type=int, default=1,
                        help="extraction worker threads; output is independent of the count (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ldgp",
        description="Local pattern descriptors with recognition evaluation and timing benchmarks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="extract features for every dataset image to JSON")
    _add_dataset_args(p)
    _add_feature_args(p)
    p.add_argument("--out", required=True, help="output feature JSON path")

    p = sub.add_parser("eval-loo", help="leave-one-out recognition evaluation")
    _add_dataset_args(p)
    _add_feature_args(p)
    p.add_argument("--out", required=True, help="output per-probe CSV path")

    p = sub.add_parser("eval-split", help="k-fold probe/gallery split evaluation")
    _add_dataset_args(p)
    _add_feature_args(p)
    p.add_argument("--probe-fraction", type=float, required=True,
                   help="fraction of images drawn as probes each fold, in (0, 1)")
    p.add_argument("--folds", type=int, default=10, help="number of random splits (default 10)")
    p.add_argument("--out", required=True, help="output per-probe CSV path")

    p = sub.add_parser("bench-time", help="extraction/matching timing report")
    _add_dataset_args(p)
    _add_feature_args(p)
    p.add_argument("--descriptors", type=_descriptors, default=["ldgp", "ldp"],
                   help="comma-separated descriptors to benchmark (default ldgp,ldp)")
    p.add_argument("--reps", type=int, default=3, help="repetitions per timing median (default 3)")
    p.add_argument("--out", required=True, help="output timing CSV path")

    p = sub.add_parser("bench-noise", help="recognition rate vs Gaussian noise variance")
    _add_dataset_args(p)
    _add_feature_args(p)
    p.add_argument("--variances", type=_variances, required=True,
                   help="comma-separated noise variances, e.g. 0,25,100")
    p.add_argument("--out", required=True, help="output variance,gamma CSV path")

    return parser


def _build_dataset(args) -> LabeledDataset:
    seed = args.seed if args.seed is not None else _default_seed()
    if args.synthetic is not None:
        classes, per_class = args.synthetic
        width, height = args.size
        return synth_dataset(classes, per_class, width, height, seed)
    if args.dataset is None and args.manifest is None:
        raise ValueError("one of --dataset, --manifest or --synthetic is required")
    return load_dataset(root=args.dataset, manifest=args.manifest)


def _build_config(args, dataset: LabeledDataset, descriptor=None) -> FeatureConfig:
    if args.tile is not None:
        first = dataset.entries[0].image
        tile_w, tile_h = args.tile
        grid_rows = max(1, first.height // tile_h)
        grid_cols = max(1, first.width // tile_w)
    else:
        grid_rows, grid_cols = args.grid if args.grid is not None else (4, 4)
    return FeatureConfig(
        descriptor=descriptor or args.descriptor,
        order=args.order,
        grid_rows=grid_rows,
        grid_cols=grid_cols,
        bins=args.bins,
    )


def _cmd_extract(args) -> None:
    dataset = _build_dataset(args)
    config = _build_config(args, dataset)
    matrix = extract_dataset_features(dataset, config, threads=args.threads)
    save_features(args.out, dataset, matrix, config)
    print(f"extracted {dataset.image_count} vectors of length {config.feature_length} -> {args.out}")


def _cmd_eval_loo(args) -> None:
    dataset = _build_dataset(args)
    config = _build_config(args, dataset)
    report = evaluate_loo(dataset, config, threads=args.threads)
    write_eval_csv(report, args.out)
    print(f"gamma={report.recognition_rate:.4f} Nm={report.matches} Nt={report.total} -> {args.out}")


def _cmd_eval_split(args) -> None:
    dataset = _build_dataset(args)
    config = _build_config(args, dataset)
    seed = args.seed if args.seed is not None else _default_seed()
    report = evaluate_split_kfold(
        dataset, config, args.probe_fraction, args.folds, seed, threads=args.threads
    )
    write_eval_csv(report, args.out)
    print(
        f"gamma={report.recognition_rate:.4f} folds={len(report.fold_rates)} "
        f"Nm={report.matches} Nt={report.total} -> {args.out}"
    )


def _cmd_bench_time(args) -> None:
    dataset = _build_dataset(args)
    rows = []
    for name in args.descriptors:
        config = _build_config(args, dataset, descriptor=name)
        rows.append(bench_descriptor(dataset, config, repetitions=args.reps, threads=1))
        if args.threads > 1:
            # Threaded rows are reported separately, never mixed with serial ones.
            rows.append(bench_descriptor(dataset, config, repetitions=args.reps, threads=args.threads))
    write_timing_csv(rows, args.out)
    summary = "; ".join(
        f"{r.descriptor}[t{r.threads}] t_e={r.t_e_sec:.4f}s t_m={r.t_m_sec:.4f}s" for r in rows
    )
    print(f"{summary} -> {args.out}")


def _cmd_bench_noise(args) -> None:
    dataset = _build_dataset(args)
    config = _build_config(args, dataset)
    seed = args.seed if args.seed is not None else _default_seed()
    rows = noise_sweep(dataset, config, args.variances, seed, threads=args.threads)
    write_noise_csv(rows, args.out)
    summary = "; ".join(f"var={v:g} gamma={g:.2f}" for v, g in rows)
    print(f"{summary} -> {args.out}")


_COMMANDS = {
    "extract": _cmd_extract,
    "eval-loo": _cmd_eval_loo,
    "eval-split": _cmd_eval_split,
    "bench-time": _cmd_bench_time,
    "bench-noise": _cmd_bench_noise,
}


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
