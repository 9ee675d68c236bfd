"""Batch command-line interface.

Subcommands: ``predict``, ``evaluate``, ``benchmark``, ``csf export``,
``video``. Shared flags (after the subcommand): ``--config``, ``--jobs``,
``--seed``, ``--ppd``, ``--gain``, ``--smoothing``, ``--no-approx-band``.

Exit codes: 0 success, 1 partial or data failure, 2 usage error. Every
output directory receives the fully resolved configuration as
``config.toml``, so any run is reproducible from its outputs.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .config import RunConfig, load_config_file, resolve_config, write_effective_config
from .csf import CHROMATIC_KINDS, build_acsf, build_chromatic_csf
from .datasets import (
    DatasetError,
    DatasetLayout,
    DatasetSample,
    list_video_frames,
    load_dataset,
    load_video,
)
from .evaluation import (
    METRIC_COLUMNS,
    EvalItem,
    evaluate_items,
    mean_pr_curve,
    mean_roc_curve,
)
from .imagecore import (
    ImageDecodeError,
    load_gray,
    load_image,
    normalize_minmax,
    read_plane,
    save_gray_png,
    write_plane,
)
from .pipeline import predict_saliency, predict_saliency_stages, predict_video
from .svgplot import polyline_plot

__all__ = ["build_parser", "main", "entry"]

BENCHMARK_COLUMNS = ("AUC_Judd", "AUC_Borji", "sAUC", "CC", "NSS", "KL", "SIM", "IG")
_BENCHMARK_KEYS = ("auc_judd", "auc_borji", "sauc", "cc", "nss", "kl", "sim", "ig")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="TOML config file")
    common.add_argument("--jobs", type=int, help="worker threads (default: logical cores)")
    common.add_argument("--seed", type=int, help="seed for sampled AUC variants")
    common.add_argument("--ppd", type=float, help="pixels per degree of visual angle")
    common.add_argument("--gain", type=float, help="uniform von Kries gain for all channels")
    common.add_argument("--smoothing", type=float, help="final blur sigma as fraction of width")
    common.add_argument(
        "--no-approx-band",
        action="store_true",
        default=None,
        help="exclude the approximation band from the wavelet energy sum",
    )

    parser = argparse.ArgumentParser(prog="wecsf", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("predict", parents=[common], help="predict saliency maps for image files")
    p.add_argument("inputs", nargs="+", type=Path, help="PNG/JPEG stimuli")
    p.add_argument("-o", "--output", type=Path, default=Path("wecsf-out"))
    p.add_argument("--float-dump", action="store_true", help="also write WECSF1 float planes")
    p.add_argument("--save-intermediates", action="store_true", help="dump per-stage planes")

    e = sub.add_parser("evaluate", parents=[common], help="score maps against a dataset")
    e.add_argument("--dataset", required=True, type=Path, help="dataset root directory")
    e.add_argument("--maps", type=Path, help="directory of precomputed maps (<id>.png/.wecsf1)")
    e.add_argument("--metrics", default=",".join(METRIC_COLUMNS), help="comma-separated subset")
    e.add_argument("-o", "--output", type=Path, default=Path("wecsf-eval"))
    e.add_argument("--plots", action="store_true", help="emit mean PR and ROC curves as SVG")

    b = sub.add_parser("benchmark", parents=[common], help="predict + evaluate, one table row")
    b.add_argument("--dataset", required=True, type=Path)
    b.add_argument("-o", "--output", type=Path, default=Path("wecsf-benchmark"))

    c = sub.add_parser("csf", help="contrast sensitivity utilities")
    csub = c.add_subparsers(dest="csf_command", required=True)
    x = csub.add_parser("export", parents=[common], help="write a sensitivity grid to disk")
    x.add_argument(
        "--kind",
        choices=["achromatic", *CHROMATIC_KINDS],
        default="achromatic",
    )
    x.add_argument("--width", type=int, default=256)
    x.add_argument("--height", type=int, default=256)
    x.add_argument("-o", "--output", type=Path, default=Path("wecsf-csf"))

    v = sub.add_parser("video", parents=[common], help="per-frame saliency for a frame directory")
    v.add_argument("frames", type=Path, help="directory of numerically named frames")
    v.add_argument("-o", "--output", type=Path, default=Path("wecsf-video"))
    v.add_argument("--alpha", type=float, help="temporal smoothing factor in [0, 1]")

    return parser


def _resolve(args: argparse.Namespace) -> RunConfig:
    cfg = load_config_file(args.config) if args.config else None
    return resolve_config(
        cfg,
        ppd=args.ppd,
        gain=args.gain,
        smoothing=args.smoothing,
        include_approximation=False if args.no_approx_band else None,
        seed=args.seed,
        jobs=args.jobs,
        temporal_alpha=getattr(args, "alpha", None),
    )


def _n_workers(config: RunConfig) -> int:
    return config.jobs if config.jobs and config.jobs > 0 else (os.cpu_count() or 1)


def _save_stages(outdir: Path, stem: str, stages: dict) -> None:
    stage_dir = outdir / f"{stem}_stages"
    stage_dir.mkdir(parents=True, exist_ok=True)
    for name, plane in stages.items():
        write_plane(stage_dir / f"{name}.wecsf1", plane)
        save_gray_png(stage_dir / f"{name}.png", normalize_minmax(plane))


def cmd_predict(args: argparse.Namespace, config: RunConfig) -> int:
    outdir = args.output
    outdir.mkdir(parents=True, exist_ok=True)
    write_effective_config(outdir, config)

    def process(path: Path) -> tuple[Path, Exception | None]:
        try:
            image = load_image(path)
            if args.save_intermediates:
                result, stages = predict_saliency_stages(image, config.pipeline)
                _save_stages(outdir, path.stem, stages)
            else:
                result = predict_saliency(image, config.pipeline)
            save_gray_png(outdir / f"{path.stem}.png", result.plane)
            if args.float_dump:
                write_plane(outdir / f"{path.stem}.wecsf1", result.plane)
            return path, None
        except (ImageDecodeError, OSError, ValueError) as exc:
            return path, exc

    with ThreadPoolExecutor(max_workers=_n_workers(config)) as pool:
        results = list(pool.map(process, args.inputs))

    failures = [(path, exc) for path, exc in results if exc is not None]
    print(f"wrote {len(results) - len(failures)} saliency map(s) to {outdir}")
    for path, exc in failures:
        print(f"FAILED {path}: {exc}", file=sys.stderr)
    return 1 if failures else 0


def _load_precomputed_map(maps_dir: Path, sample_id: str) -> np.ndarray:
    dump = maps_dir / f"{sample_id}.wecsf1"
    if dump.is_file():
        return read_plane(dump)
    png = maps_dir / f"{sample_id}.png"
    if png.is_file():
        return load_gray(png)
    raise FileNotFoundError(f"no map for id {sample_id!r} under {maps_dir}")


def _build_items(
    samples: list[DatasetSample],
    config: RunConfig,
    maps_dir: Path | None,
) -> tuple[list[EvalItem], list[tuple[str, Exception]], float]:
    """Predict (or load) a map per sample; returns items, failures, seconds/image."""

    def process(sample: DatasetSample) -> tuple[EvalItem | None, tuple[str, Exception] | None, float]:
        try:
            start = time.perf_counter()
            if maps_dir is not None:
                sal = _load_precomputed_map(maps_dir, sample.id)
            else:
                sal = predict_saliency(sample.stimulus, config.pipeline).plane
            elapsed = time.perf_counter() - start
            item = EvalItem(
                id=sample.id,
                saliency=sal,
                points=None if sample.fixations is None else sample.fixations.points,
                density=None if sample.fixations is None else sample.fixations.density,
                category=sample.category,
            )
            return item, None, elapsed
        except (OSError, ValueError) as exc:
            return None, (sample.id, exc), 0.0

    with ThreadPoolExecutor(max_workers=_n_workers(config)) as pool:
        results = list(pool.map(process, samples))

    items = [item for item, _, _ in results if item is not None]
    failures = [fail for _, fail, _ in results if fail is not None]
    times = [t for item, _, t in results if item is not None]
    return items, failures, float(np.mean(times)) if times else 0.0


def _check_ground_truth(samples: list[DatasetSample], metrics: tuple[str, ...]) -> None:
    has_any = any(s.fixations is not None for s in samples)
    if metrics and not has_any:
        raise DatasetError(
            "requested fixation metrics on a stimuli-only dataset "
            "(no fixation files found); nothing to evaluate"
        )


def cmd_evaluate(args: argparse.Namespace, config: RunConfig) -> int:
    metrics = tuple(m.strip() for m in args.metrics.split(",") if m.strip())
    unknown = [m for m in metrics if m not in METRIC_COLUMNS]
    if unknown:
        print(f"unknown metrics: {', '.join(unknown)}", file=sys.stderr)
        return 2

    samples = list(load_dataset(DatasetLayout.at(args.dataset)))
    _check_ground_truth(samples, metrics)
    items, failures, _ = _build_items(samples, config, args.maps)

    report = evaluate_items(items, metrics=metrics, settings=config.metric_settings)
    outdir = args.output
    report.write(outdir)
    write_effective_config(outdir, config)

    if args.plots:
        fixated = [it for it in items if it.points is not None and len(it.points) > 0]
        if fixated:
            recall, precision = mean_pr_curve(fixated)
            polyline_plot(
                outdir / "pr_curve.svg",
                [(recall, precision, "mean PR")],
                title="Precision-recall",
                xlabel="recall",
                ylabel="precision",
            )
            fp, tp = mean_roc_curve(fixated)
            polyline_plot(
                outdir / "roc.svg",
                [(fp, tp, "mean ROC")],
                title="ROC",
                xlabel="false positive rate",
                ylabel="true positive rate",
            )

    summary = ", ".join(
        f"{m}={report.aggregate[m]:.4f}" if report.aggregate[m] is not None else f"{m}=n/a"
        for m in metrics
    )
    print(f"evaluated {len(items)} image(s): {summary}")
    for sample_id, exc in failures:
        print(f"FAILED {sample_id}: {exc}", file=sys.stderr)
    return 1 if failures else 0


def cmd_benchmark(args: argparse.Namespace, config: RunConfig) -> int:
    samples = list(load_dataset(DatasetLayout.at(args.dataset)))
    _check_ground_truth(samples, METRIC_COLUMNS)
    items, failures, per_image = _build_items(samples, config, None)
    report = evaluate_items(items, metrics=METRIC_COLUMNS, settings=config.metric_settings)

    outdir = args.output
    report.write(outdir)
    write_effective_config(outdir, config)

    cells = []
    for key in _BENCHMARK_KEYS:
        value = report.aggregate.get(key)
        cells.append("" if value is None else f"{value:.4f}")
    header = ",".join([*BENCHMARK_COLUMNS, "seconds_per_image"])
    row = ",".join([*cells, f"{per_image:.4f}"])
    (outdir / "benchmark.csv").write_text(header + "\n" + row + "\n")
    print(header)
    print(row)
    for sample_id, exc in failures:
        print(f"FAILED {sample_id}: {exc}", file=sys.stderr)
    return 1 if failures else 0


def cmd_csf_export(args: argparse.Namespace, config: RunConfig) -> int:
    p = config.pipeline
    if args.kind == "achromatic":
        grid = build_acsf(args.width, args.height, p.ppd, p.acsf)
    else:
        params = p.rgcsf if args.kind == "red-green" else p.ybcsf
        grid = build_chromatic_csf(args.kind, args.width, args.height, p.ppd, params)

    outdir = args.output
    outdir.mkdir(parents=True, exist_ok=True)
    write_effective_config(outdir, config)
    stem = f"{args.kind.replace('-', '_')}_{args.width}x{args.height}"
    write_plane(outdir / f"{stem}.wecsf1", grid.gains)
    save_gray_png(outdir / f"{stem}.png", normalize_minmax(grid.gains))
    print(f"wrote {stem}.wecsf1 and {stem}.png to {outdir}")
    return 0


def cmd_video(args: argparse.Namespace, config: RunConfig) -> int:
    paths = list_video_frames(args.frames)
    frames = load_video(args.frames)
    maps = predict_video(frames, config.pipeline)
    outdir = args.output
    outdir.mkdir(parents=True, exist_ok=True)
    write_effective_config(outdir, config)
    for path, sal in zip(paths, maps):
        save_gray_png(outdir / f"{path.stem}.png", sal.plane)
    print(f"wrote {len(maps)} frame map(s) to {outdir}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _resolve(args)
    except (OSError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2

    try:
        if args.command == "predict":
            return cmd_predict(args, config)
        if args.command == "evaluate":
            return cmd_evaluate(args, config)
        if args.command == "benchmark":
            return cmd_benchmark(args, config)
        if args.command == "csf":
            return cmd_csf_export(args, config)
        if args.command == "video":
            return cmd_video(args, config)
    except DatasetError as exc:
        print(f"dataset error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError(f"unhandled command {args.command!r}")


def entry() -> None:
    sys.exit(main())
