"""End-to-end saliency prediction.

Stage order (fixed):

1. resize the stimulus to the working size (plain bilinear, aspect not
   preserved; default 256x256)
2. von Kries gain control
3. opponent decomposition (WB / RG / YB)
4. per channel: multi-level Haar decomposition -> wavelet energy map ->
   frequency-domain sensitivity filtering (achromatic grid on WB,
   red-green grid on RG, yellow-blue grid on YB)
5. per channel: clamp the small negatives left by the real() projection,
   then min-max normalize
6. weighted mean of the three channels
7. Gaussian blur (sigma = smoothing_sigma * working width)
8. min-max normalize and resize back to the stimulus resolution

Everything is pure and deterministic: the same image and parameters give
bitwise-identical maps, and a global intensity rescale of the input by a
power of two cancels exactly inside the gain-control stage.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.ndimage import gaussian_filter

from .adaptation import AdaptationParams, von_kries_adapt
from .csf import (
    ACHROMATIC_DEFAULTS,
    RED_GREEN_DEFAULTS,
    YELLOW_BLUE_DEFAULTS,
    CsfParams,
    apply_csf,
    cached_csf_grid,
)
from .imagecore import RgbImage, SaliencyMap, normalize_minmax, resize_bilinear
from .opponent import rgb_to_opponent
from .wavelet import dwt_multilevel, max_levels, wavelet_energy_map

__all__ = ["PipelineParams", "predict_saliency", "predict_saliency_stages", "predict_video"]

CHANNEL_NAMES = ("wb", "rg", "yb")


@dataclass(frozen=True)
class PipelineParams:
    """Every tunable of the prediction pipeline, with reproduction defaults."""

    working_width: int = 256
    working_height: int = 256
    gains: AdaptationParams = AdaptationParams()
    levels: int | None = None  # None = decompose as deep as the working size allows
    include_approximation: bool = True
    ppd: float = 32.0
    acsf: CsfParams = ACHROMATIC_DEFAULTS
    rgcsf: CsfParams = RED_GREEN_DEFAULTS
    ybcsf: CsfParams = YELLOW_BLUE_DEFAULTS
    fusion_weights: tuple[float, float, float] = (1.0, 1.0, 1.0)
    smoothing_sigma: float = 0.03  # fraction of working width; 0 disables
    temporal_alpha: float = 0.0  # video only; 0 disables temporal smoothing

    def __post_init__(self) -> None:
        if self.working_width < 32 or self.working_height < 32:
            raise ValueError("working size must be at least 32 per axis")
        if len(self.fusion_weights) != 3 or any(w < 0 for w in self.fusion_weights):
            raise ValueError("fusion_weights must be three nonnegative reals")
        if sum(self.fusion_weights) == 0:
            raise ValueError("fusion_weights must not all be zero")
        if self.smoothing_sigma < 0:
            raise ValueError("smoothing_sigma must be >= 0")
        if not (0.0 <= self.temporal_alpha <= 1.0):
            raise ValueError("temporal_alpha must lie in [0, 1]")
        if not (self.ppd > 0):
            raise ValueError("ppd must be positive")

    def channel_csf(self) -> tuple[CsfParams, CsfParams, CsfParams]:
        return self.acsf, self.rgcsf, self.ybcsf


def _finish(plane: np.ndarray, src_w: int, src_h: int) -> SaliencyMap:
    out = resize_bilinear(plane, src_w, src_h)
    peak = float(out.max())
    if peak > 0.0:
        out = out / peak
    out = np.clip(out, 0.0, 1.0)
    return SaliencyMap(plane=out, source_width=src_w, source_height=src_h)


def predict_saliency_stages(
    image: RgbImage, params: PipelineParams = PipelineParams()
) -> tuple[SaliencyMap, dict[str, np.ndarray]]:
    """Run the pipeline and keep every intermediate plane for inspection.

    Stage keys: ``opponent_<c>``, ``energy_<c>``, ``filtered_<c>``,
    ``channel_<c>`` (normalized, post-rectification) for c in wb/rg/yb,
    plus ``fused`` (pre-normalization) and ``smoothed``.
    """
    if image.width == 1 and image.height == 1:
        raise ValueError("degenerate 1x1 image rejected")

    w, h = params.working_width, params.working_height
    working = RgbImage(
        np.stack([resize_bilinear(image.channel(i), w, h) for i in range(3)], axis=-1)
    )
    adapted = von_kries_adapt(working, params.gains)
    opp = rgb_to_opponent(adapted)

    levels = params.levels if params.levels is not None else max_levels(w, h)
    stages: dict[str, np.ndarray] = {}
    channels = []
    for name, plane, csf_params in zip(CHANNEL_NAMES, opp.planes(), params.channel_csf()):
        pyramid = dwt_multilevel(plane, levels)
        energy = wavelet_energy_map(pyramid, params.include_approximation)
        grid = cached_csf_grid(w, h, params.ppd, csf_params)
        filtered = apply_csf(energy, grid)
        channel = normalize_minmax(np.maximum(filtered, 0.0))
        channels.append(channel)
        stages[f"opponent_{name}"] = plane
        stages[f"energy_{name}"] = energy
        stages[f"filtered_{name}"] = filtered
        stages[f"channel_{name}"] = channel

    weights = params.fusion_weights
    fused = sum(wt * ch for wt, ch in zip(weights, channels)) / sum(weights)
    stages["fused"] = fused

    sigma = params.smoothing_sigma * w
    smoothed = gaussian_filter(fused, sigma=sigma, mode="reflect") if sigma > 0 else fused
    stages["smoothed"] = smoothed

    result = _finish(normalize_minmax(smoothed), image.width, image.height)
    return result, stages


def predict_saliency(image: RgbImage, params: PipelineParams = PipelineParams()) -> SaliencyMap:
    """Predict one saliency map at the stimulus resolution."""
    result, _ = predict_saliency_stages(image, params)
    return result


def predict_video(
    frames: Sequence[RgbImage], params: PipelineParams = PipelineParams()
) -> list[SaliencyMap]:
    """Frame-wise prediction with optional exponential temporal smoothing.

    With ``temporal_alpha`` = 0 the outputs are exactly the independent
    per-frame predictions. Otherwise a running accumulator
    A_t = alpha * A_{t-1} + (1 - alpha) * S_t is renormalized per frame.
    """
    if len(frames) == 0:
        raise ValueError("empty frame sequence")
    dims = {(f.width, f.height) for f in frames}
    if len(dims) != 1:
        raise ValueError(f"frames have mismatched dimensions: {sorted(dims)}")

    static = [predict_saliency(frame, params) for frame in frames]
    alpha = params.temporal_alpha
    if alpha == 0.0:
        return static

    out: list[SaliencyMap] = []
    acc: np.ndarray | None = None
    for sal in static:
        acc = sal.plane if acc is None else alpha * acc + (1.0 - alpha) * sal.plane
        out.append(
            SaliencyMap(
                plane=normalize_minmax(acc),
                source_width=sal.source_width,
                source_height=sal.source_height,
            )
        )
    return out
