"""Gain control: von Kries chromatic adaptation applied in RGB.

Each channel is divided by its own maximum and rescaled by a fixed gain
(default 0.6). The image's tristimulus values stand in for cone responses
directly, so no RGB-to-LMS matrix is involved; the per-channel maximum is
taken over the processed image itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .imagecore import RgbImage

__all__ = ["AdaptationParams", "von_kries_adapt"]


@dataclass(frozen=True)
class AdaptationParams:
    """Per-channel gains, each in (0, 1]."""

    gain_l: float = 0.6
    gain_m: float = 0.6
    gain_s: float = 0.6

    def __post_init__(self) -> None:
        for name, value in (("gain_l", self.gain_l), ("gain_m", self.gain_m), ("gain_s", self.gain_s)):
            if not (0.0 < value <= 1.0):
                raise ValueError(f"{name} must lie in (0, 1], got {value}")

    @classmethod
    def uniform(cls, gain: float) -> "AdaptationParams":
        return cls(gain, gain, gain)


def von_kries_adapt(image: RgbImage, params: AdaptationParams = AdaptationParams()) -> RgbImage:
    """Normalize each channel by its maximum and apply the channel gain.

    A channel that is identically zero is passed through unchanged; that
    signals a degenerate stimulus, not a failure. Because each channel is
    divided by its own maximum first, the result is invariant to global
    intensity rescaling of the input.
    """
    gains = (params.gain_l, params.gain_m, params.gain_s)
    out = np.empty_like(image.data)
    for i, gain in enumerate(gains):
        channel = image.data[:, :, i]
        peak = float(channel.max())
        if peak == 0.0:
            out[:, :, i] = channel
        else:
            out[:, :, i] = channel / peak * gain
    return RgbImage(out)
