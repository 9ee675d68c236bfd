"""Dataset-level evaluation: per-image scores, skips, and aggregate reports.

Scores are computed per image and aggregated as the unweighted mean over
images where the metric was defined; undefined values (constant maps,
missing ground truth) are counted and reported as skips, never crashes.

Dataset-wide context built before scoring:

* the shuffled-AUC negative pool for an image is the union of all other
  images' fixations, coordinates rescaled by integer arithmetic onto the
  image's own dimensions;
* the information-gain baseline is the leave-one-out center prior: the
  mean of the other images' fixation densities, accumulated at a fixed
  reference resolution and resized per image.

Each image's sampled-AUC generator is seeded from the run seed plus a
CRC32 of the image id, so reports are bitwise reproducible and independent
of evaluation order.
"""

from __future__ import annotations

import csv
import io
import json
import zlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .imagecore import resize_bilinear
from .metrics import (
    EPSILON,
    MetricUndefined,
    auc_borji,
    auc_judd,
    cc,
    density_from_points,
    ig,
    kl,
    nss,
    pr_curve,
    sauc,
    sim,
)

__all__ = [
    "METRIC_COLUMNS",
    "LOCATION_METRICS",
    "DISTRIBUTION_METRICS",
    "MetricSettings",
    "EvalItem",
    "EvalReport",
    "evaluate_items",
    "mean_pr_curve",
    "mean_roc_curve",
]

METRIC_COLUMNS = ("auc_judd", "auc_borji", "sauc", "nss", "cc", "sim", "kl", "ig")
LOCATION_METRICS = frozenset({"auc_judd", "auc_borji", "sauc", "nss", "ig"})
DISTRIBUTION_METRICS = frozenset({"sim", "cc", "kl"})

_PRIOR_SHAPE = (128, 128)  # reference resolution for the center-prior pool


@dataclass(frozen=True)
class MetricSettings:
    epsilon: float = EPSILON
    n_splits: int = 100
    seed: int = 0
    density_sigma_deg: float = 1.0  # degrees of visual angle
    ppd: float = 32.0

    @property
    def density_sigma_px(self) -> float:
        return self.density_sigma_deg * self.ppd


@dataclass
class EvalItem:
    """One stimulus ready for scoring."""

    id: str
    saliency: np.ndarray
    points: np.ndarray | None = None
    density: np.ndarray | None = None
    category: str | None = None


@dataclass
class EvalReport:
    metrics: tuple[str, ...]
    rows: list[dict] = field(default_factory=list)
    aggregate: dict = field(default_factory=dict)
    skip_counts: dict = field(default_factory=dict)
    conventions: dict = field(default_factory=dict)

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["id", "category", *self.metrics])
        for row in self.rows:
            cells = [row["id"], row["category"] or ""]
            for m in self.metrics:
                value = row["scores"].get(m)
                cells.append("" if value is None else repr(value))
            writer.writerow(cells)
        writer.writerow(
            ["mean", ""]
            + ["" if self.aggregate.get(m) is None else repr(self.aggregate[m]) for m in self.metrics]
        )
        return buf.getvalue()

    def to_json_obj(self) -> dict:
        return {
            "conventions": self.conventions,
            "metrics": list(self.metrics),
            "images": self.rows,
            "aggregate": self.aggregate,
            "skip_counts": self.skip_counts,
        }

    def category_rows(self) -> list[dict]:
        by_cat: dict[str, list[dict]] = {}
        for row in self.rows:
            if row["category"]:
                by_cat.setdefault(row["category"], []).append(row)
        out = []
        for cat in sorted(by_cat):
            rows = by_cat[cat]
            means = {}
            for m in self.metrics:
                values = [r["scores"][m] for r in rows if r["scores"].get(m) is not None]
                means[m] = float(np.mean(values)) if values else None
            out.append({"category": cat, "n": len(rows), "means": means})
        return out

    def write(self, outdir: str | Path, basename: str = "report") -> None:
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / f"{basename}.csv").write_text(self.to_csv_text())
        (outdir / f"{basename}.json").write_text(json.dumps(self.to_json_obj(), indent=2))
        categories = self.category_rows()
        if categories:
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(["category", "n", *self.metrics])
            for entry in categories:
                writer.writerow(
                    [entry["category"], entry["n"]]
                    + [
                        "" if entry["means"][m] is None else repr(entry["means"][m])
                        for m in self.metrics
                    ]
                )
            (outdir / f"{basename}_by_category.csv").write_text(buf.getvalue())


def _scale_points(points: np.ndarray, src_dims: tuple[int, int], dst_dims: tuple[int, int]) -> np.ndarray:
    """Map integer fixation coords between resolutions; exact identity when equal."""
    sw, sh = src_dims
    dw, dh = dst_dims
    if (sw, sh) == (dw, dh):
        return points
    pts = np.asarray(points, dtype=np.int64)
    x = np.minimum(pts[:, 0] * dw // sw, dw - 1)
    y = np.minimum(pts[:, 1] * dh // sh, dh - 1)
    return np.stack([x, y], axis=1)


def _shuffle_pool(items: list[EvalItem], index: int) -> np.ndarray | None:
    target = items[index]
    th, tw = target.saliency.shape
    parts = []
    for j, other in enumerate(items):
        if j == index or other.points is None or len(other.points) == 0:
            continue
        oh, ow = other.saliency.shape
        parts.append(_scale_points(other.points, (ow, oh), (tw, th)))
    if not parts:
        return None
    return np.concatenate(parts, axis=0)


def _reference_density(item: EvalItem, sigma_px: float) -> np.ndarray | None:
    if item.density is not None:
        dens = item.density
    elif item.points is not None and len(item.points) > 0:
        dens = density_from_points(item.points, item.saliency.shape, sigma_px)
    else:
        return None
    ref = resize_bilinear(dens, _PRIOR_SHAPE[1], _PRIOR_SHAPE[0])
    total = ref.sum()
    return ref / total if total > 0 else None


def _item_seed(settings: MetricSettings, item_id: str) -> tuple[int, int]:
    return (settings.seed, zlib.crc32(item_id.encode("utf-8")))


def evaluate_items(
    items: list[EvalItem],
    metrics: tuple[str, ...] = METRIC_COLUMNS,
    settings: MetricSettings = MetricSettings(),
) -> EvalReport:
    unknown = [m for m in metrics if m not in METRIC_COLUMNS]
    if unknown:
        raise ValueError(f"unknown metrics: {unknown}")

    need_prior = "ig" in metrics
    prior_refs = [_reference_density(it, settings.density_sigma_px) for it in items] if need_prior else []
    prior_total = None
    prior_count = 0
    if need_prior:
        contributing = [d for d in prior_refs if d is not None]
        prior_count = len(contributing)
        if prior_count:
            prior_total = np.sum(contributing, axis=0)

    report = EvalReport(
        metrics=tuple(metrics),
        conventions={
            "location_metrics": "fixation points",
            "distribution_metrics": (
                "fixation density; synthesized from points by Gaussian blur "
                f"(sigma = {settings.density_sigma_deg} deg = {settings.density_sigma_px} px) when absent"
            ),
            "ig_baseline": "leave-one-out center prior (mean of other images' densities)",
            "sauc_pool": "fixations of all other images, rescaled to the target resolution",
            "seed": settings.seed,
            "n_splits": settings.n_splits,
            "epsilon": settings.epsilon,
        },
    )
    skip_counts: dict[str, int] = {m: 0 for m in metrics}

    for index, item in enumerate(items):
        sal = np.asarray(item.saliency, dtype=np.float64)
        scores: dict[str, float | None] = {}
        skipped: dict[str, str] = {}
        flags: list[str] = []
        if float(sal.max()) == float(sal.min()):
            flags.append("constant_map_ties")

        has_points = item.points is not None and len(item.points) > 0
        density = item.density
        if density is None and has_points:
            try:
                density = density_from_points(item.points, sal.shape, settings.density_sigma_px)
            except MetricUndefined:
                density = None

        pool = _shuffle_pool(items, index) if "sauc" in metrics and has_points else None
        baseline = None
        if need_prior and prior_total is not None:
            own = prior_refs[index]
            if own is not None and prior_count > 1:
                loo = (prior_total - own) / (prior_count - 1)
            elif own is None and prior_count >= 1:
                loo = prior_total / prior_count
            else:
                loo = None
            if loo is not None:
                baseline = resize_bilinear(loo, sal.shape[1], sal.shape[0])

        seed = _item_seed(settings, item.id)
        for m in metrics:
            try:
                if m in LOCATION_METRICS and not has_points:
                    raise MetricUndefined("no fixation points for this image")
                if m in DISTRIBUTION_METRICS and density is None:
                    raise MetricUndefined("no fixation density for this image")
                if m == "auc_judd":
                    value = auc_judd(sal, item.points)
                elif m == "auc_borji":
                    value = auc_borji(sal, item.points, n_splits=settings.n_splits, seed=seed)
                elif m == "sauc":
                    if pool is None:
                        raise MetricUndefined("empty shuffle pool (no other fixated images)")
                    value = sauc(sal, item.points, pool, n_splits=settings.n_splits, seed=seed)
                elif m == "nss":
                    value = nss(sal, item.points)
                elif m == "cc":
                    value = cc(sal, density)
                elif m == "sim":
                    value = sim(sal, density)
                elif m == "kl":
                    value = kl(sal, density, epsilon=settings.epsilon)
                elif m == "ig":
                    if baseline is None:
                        raise MetricUndefined("no baseline (needs densities from other images)")
                    value = ig(sal, baseline, item.points, epsilon=settings.epsilon)
                scores[m] = value
            except MetricUndefined as exc:
                scores[m] = None
                skipped[m] = str(exc)
                skip_counts[m] += 1

        report.rows.append(
            {"id": item.id, "category": item.category, "scores": scores, "skipped": skipped, "flags": flags}
        )

    for m in metrics:
        values = [row["scores"][m] for row in report.rows if row["scores"].get(m) is not None]
        report.aggregate[m] = float(np.mean(values)) if values else None
    report.skip_counts = skip_counts
    return report


def _point_mask(item: EvalItem) -> np.ndarray:
    mask = np.zeros(item.saliency.shape, dtype=bool)
    mask[item.points[:, 1], item.points[:, 0]] = True
    return mask


def mean_pr_curve(items: list[EvalItem]) -> tuple[np.ndarray, np.ndarray]:
    """Dataset-mean precision/recall over the 256 shared thresholds."""
    precisions, recalls = [], []
    for item in items:
        if item.points is None or len(item.points) == 0:
            continue
        curve = pr_curve(item.saliency, _point_mask(item))
        precisions.append(curve.precision)
        recalls.append(curve.recall)
    if not precisions:
        raise MetricUndefined("no fixated images for a PR curve")
    return np.mean(recalls, axis=0), np.mean(precisions, axis=0)


def mean_roc_curve(items: list[EvalItem], n_grid: int = 101) -> tuple[np.ndarray, np.ndarray]:
    """Dataset-mean ROC: true-positive rate averaged on a common FP grid."""
    grid = np.linspace(0.0, 1.0, n_grid)
    tprs = []
    for item in items:
        if item.points is None or len(item.points) == 0:
            continue
        sal = item.saliency
        values = sal[item.points[:, 1], item.points[:, 0]]
        mask = _point_mask(item)
        background = np.sort(sal[~mask])
        if background.size == 0:
            continue
        thresholds = np.unique(values)[::-1]
        values_sorted = np.sort(values)
        tp = (values.size - np.searchsorted(values_sorted, thresholds, side="left")) / values.size
        fp = (background.size - np.searchsorted(background, thresholds, side="left")) / background.size
        fps = np.concatenate([[0.0], fp, [1.0]])
        tps = np.concatenate([[0.0], tp, [1.0]])
        tprs.append(np.interp(grid, fps, tps))
    if not tprs:
        raise MetricUndefined("no fixated images for a ROC curve")
    return grid, np.mean(tprs, axis=0)
