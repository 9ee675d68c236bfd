"""Saliency evaluation metrics.

Location-based metrics (AUC variants, NSS, IG) consume discrete fixation
points as (x, y) pixel coordinates; distribution-based metrics (SIM, CC,
KL) consume a continuous fixation density. When a dataset ships only
points, :func:`density_from_points` synthesizes a density by Gaussian
blur with sigma = one degree of visual angle (ppd pixels).

Normalization rules, applied identically to both arguments of every
distribution metric so that self-comparisons are exact: min-max rescale to
[0, 1], then divide by the sum. A constant map cannot be normalized and
raises :class:`MetricUndefined`, which batch evaluation reports as a
per-image skip rather than a failure. The regularized KL estimator can dip
slightly below zero; the bias is bounded by roughly epsilon * pixel count
(about 1.5e-11 for a 256x256 map at the default epsilon).

Sampled AUC variants draw negatives with an explicitly seeded generator
and are bitwise reproducible for a fixed seed. Ties contribute 1/2, so a
constant map scores exactly 0.5.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import gaussian_filter
from scipy.stats import rankdata

from .imagecore import normalize_minmax

__all__ = [
    "EPSILON",
    "MetricUndefined",
    "FixationData",
    "density_from_points",
    "nss",
    "sim",
    "cc",
    "kl",
    "ig",
    "auc_judd",
    "auc_borji",
    "sauc",
    "PrCurve",
    "pr_curve",
    "f_measure",
]

EPSILON = float(np.finfo(np.float64).eps)  # 2.220446049250313e-16
DEFAULT_SEED = 0


class MetricUndefined(ValueError):
    """A metric has no defined value for this input (e.g. constant map)."""


@dataclass(frozen=True)
class FixationData:
    """Ground truth for one stimulus: fixation points and/or a density map.

    ``points`` is an (N, 2) integer array of (x, y) pixel coordinates;
    ``density`` is a nonnegative plane. Either may be absent.
    """

    points: np.ndarray | None = None
    density: np.ndarray | None = None

    @property
    def n_points(self) -> int:
        return 0 if self.points is None else len(self.points)


def density_from_points(points: np.ndarray, shape: tuple[int, int], sigma: float) -> np.ndarray:
    """Blur a fixation point map into a density that sums to one."""
    points = np.asarray(points)
    if len(points) == 0:
        raise MetricUndefined("cannot build a density from zero fixations")
    counts = np.zeros(shape, dtype=np.float64)
    np.add.at(counts, (points[:, 1], points[:, 0]), 1.0)
    blurred = gaussian_filter(counts, sigma=sigma, mode="constant")
    total = blurred.sum()
    if total <= 0:
        raise MetricUndefined("degenerate fixation density")
    return blurred / total


def _point_values(saliency: np.ndarray, points: np.ndarray) -> np.ndarray:
    points = np.asarray(points)
    if points.ndim != 2 or points.shape[1] != 2 or len(points) == 0:
        raise ValueError("fixations must be a nonempty (N, 2) array of (x, y)")
    h, w = saliency.shape
    x, y = points[:, 0], points[:, 1]
    if (x < 0).any() or (x >= w).any() or (y < 0).any() or (y >= h).any():
        raise ValueError("fixation coordinates outside the saliency map")
    return saliency[y, x]


def _as_distribution(plane: np.ndarray) -> np.ndarray:
    plane = np.asarray(plane, dtype=np.float64)
    scaled = normalize_minmax(plane)
    total = scaled.sum()
    if total <= 0:
        raise MetricUndefined("constant map cannot be normalized to a distribution")
    return scaled / total


def nss(saliency: np.ndarray, points: np.ndarray) -> float:
    """Mean standardized saliency over fixated pixels."""
    saliency = np.asarray(saliency, dtype=np.float64)
    values = _point_values(saliency, points)
    sigma = float(saliency.std())
    if sigma == 0.0:
        raise MetricUndefined("constant saliency map: NSS undefined (zero variance)")
    return float(np.mean((values - saliency.mean()) / sigma))


def sim(saliency: np.ndarray, density: np.ndarray) -> float:
    """Histogram intersection of the two maps as distributions, in [0, 1]."""
    p = _as_distribution(saliency)
    q = _as_distribution(density)
    return float(np.minimum(p, q).sum())


def cc(saliency: np.ndarray, density: np.ndarray) -> float:
    """Pearson correlation between map and density."""
    p = np.asarray(saliency, dtype=np.float64).ravel()
    q = np.asarray(density, dtype=np.float64).ravel()
    if p.shape != q.shape:
        raise ValueError("saliency and density must share dimensions")
    pc = p - p.mean()
    qc = q - q.mean()
    denom = np.sqrt((pc * pc).sum() * (qc * qc).sum())
    if denom == 0.0:
        raise MetricUndefined("constant input: correlation undefined")
    return float((pc * qc).sum() / denom)


def kl(saliency: np.ndarray, density: np.ndarray, epsilon: float = EPSILON) -> float:
    """Regularized Kullback-Leibler divergence sum(Q * log(eps + Q / (eps + P)))."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    p = _as_distribution(saliency)
    q = _as_distribution(density)
    return float(np.sum(q * np.log(epsilon + q / (epsilon + p))))


def ig(
    saliency: np.ndarray,
    baseline: np.ndarray,
    points: np.ndarray,
    epsilon: float = EPSILON,
) -> float:
    """Information gain over a baseline, in bits per fixation."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    p = _as_distribution(saliency)
    b = _as_distribution(baseline)
    pv = _point_values(p, points)
    bv = _point_values(b, points)
    return float(np.mean(np.log2(epsilon + pv) - np.log2(epsilon + bv)))


def _trapezoid(fps: np.ndarray, tps: np.ndarray) -> float:
    area = 0.0
    for i in range(len(fps) - 1):
        area += (fps[i + 1] - fps[i]) * (tps[i + 1] + tps[i]) / 2.0
    return area


def auc_judd(saliency: np.ndarray, points: np.ndarray) -> float:
    """ROC area with thresholds at every distinct saliency value at fixations.

    True positive rate counts fixations at or above threshold; false
    positive rate counts non-fixated pixels at or above threshold. A
    constant map yields exactly 0.5 (all ties).
    """
    saliency = np.asarray(saliency, dtype=np.float64)
    values = _point_values(saliency, points)
    fixated = np.zeros(saliency.shape, dtype=bool)
    pts = np.asarray(points)
    fixated[pts[:, 1], pts[:, 0]] = True
    background = saliency[~fixated]
    if background.size == 0:
        raise MetricUndefined("every pixel is fixated: no negatives for AUC")

    thresholds = np.unique(values)[::-1]
    values_sorted = np.sort(values)
    background_sorted = np.sort(background)
    n_fix = values.size
    n_bg = background.size
    tp = (n_fix - np.searchsorted(values_sorted, thresholds, side="left")) / n_fix
    fp = (n_bg - np.searchsorted(background_sorted, thresholds, side="left")) / n_bg
    fps = np.concatenate([[0.0], fp, [1.0]])
    tps = np.concatenate([[0.0], tp, [1.0]])
    return _trapezoid(fps, tps)


def _two_sample_auc(positives: np.ndarray, negatives: np.ndarray) -> float:
    # Mann-Whitney statistic: area under the empirical ROC, ties weighted 1/2
    ranks = rankdata(np.concatenate([positives, negatives]))
    n_pos = positives.size
    n_neg = negatives.size
    rank_sum = ranks[:n_pos].sum()
    return float((rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def auc_borji(
    saliency: np.ndarray,
    points: np.ndarray,
    n_splits: int = 100,
    n_negatives: int | None = None,
    seed: int = DEFAULT_SEED,
) -> float:
    """Mean AUC over splits whose negatives are uniform random pixels."""
    saliency = np.asarray(saliency, dtype=np.float64)
    positives = _point_values(saliency, points)
    if n_splits < 1:
        raise ValueError("n_splits must be >= 1")
    n_neg = n_negatives if n_negatives is not None else positives.size
    flat = saliency.ravel()
    rng = np.random.default_rng(seed)
    scores = [
        _two_sample_auc(positives, flat[rng.integers(0, flat.size, n_neg)])
        for _ in range(n_splits)
    ]
    return float(np.mean(scores))


def sauc(
    saliency: np.ndarray,
    points: np.ndarray,
    other_points: np.ndarray,
    n_splits: int = 100,
    seed: int = DEFAULT_SEED,
) -> float:
    """Shuffled AUC: negatives drawn from other images' fixation locations.

    Each split samples as many negatives as there are fixations (without
    replacement when the pool allows it), which penalizes center bias.
    """
    saliency = np.asarray(saliency, dtype=np.float64)
    positives = _point_values(saliency, points)
    pool = np.asarray(other_points)
    if pool.ndim != 2 or pool.shape[1] != 2 or len(pool) == 0:
        raise ValueError("shuffle pool must be a nonempty (M, 2) array")
    pool_values = _point_values(saliency, pool)
    n_neg = positives.size
    rng = np.random.default_rng(seed)
    scores = []
    for _ in range(n_splits):
        replace = pool_values.size < n_neg
        chosen = rng.choice(pool_values.size, size=n_neg, replace=replace)
        scores.append(_two_sample_auc(positives, pool_values[chosen]))
    return float(np.mean(scores))


@dataclass(frozen=True)
class PrCurve:
    """Precision/recall at the 256 thresholds of the 8-bit quantized map."""

    thresholds: np.ndarray
    precision: np.ndarray
    recall: np.ndarray


def pr_curve(saliency: np.ndarray, mask: np.ndarray) -> PrCurve:
    """Binarize the quantized map at every threshold in [0, 255].

    A threshold that selects no pixels scores precision 1 by convention.
    """
    saliency = np.asarray(saliency, dtype=np.float64)
    mask = np.asarray(mask).astype(bool)
    if mask.shape != saliency.shape:
        raise ValueError("mask and saliency must share dimensions")
    n_pos = int(mask.sum())
    if n_pos == 0:
        raise ValueError("empty positive mask")
    quantized = np.rint(np.clip(saliency, 0.0, 1.0) * 255.0).astype(np.intp)

    hist_all = np.bincount(quantized.ravel(), minlength=256)
    hist_pos = np.bincount(quantized[mask], minlength=256)
    # selected(t) = number of pixels with quantized value >= t
    selected = np.cumsum(hist_all[::-1])[::-1].astype(np.float64)
    true_pos = np.cumsum(hist_pos[::-1])[::-1].astype(np.float64)

    precision = np.where(selected > 0, true_pos / np.maximum(selected, 1), 1.0)
    recall = true_pos / n_pos
    return PrCurve(thresholds=np.arange(256), precision=precision, recall=recall)


def f_measure(curve: PrCurve, beta2: float = 0.3) -> float:
    """Maximum weighted F-score over the curve's thresholds."""
    p, r = curve.precision, curve.recall
    denom = beta2 * p + r
    f = np.where(denom > 0, (1.0 + beta2) * p * r / np.where(denom > 0, denom, 1.0), 0.0)
    return float(f.max())
