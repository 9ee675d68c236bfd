"""Linear transform from RGB to the O1/O2/O3 opponent color space.

O1 carries white-black (luminance), O2 red-green and O3 yellow-blue
opponency. The matrix coefficients are fixed four-decimal constants; rows
are deliberately not renormalized, so achromatic input produces small but
nonzero chromatic components (0.0237 and 0.1206 per unit gray).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .imagecore import RgbImage

__all__ = ["OPPONENT_FROM_RGB", "RGB_FROM_OPPONENT", "OpponentImage", "rgb_to_opponent"]

OPPONENT_FROM_RGB = np.array(
    [
        [0.2814, 0.6938, 0.0638],
        [-0.0971, 0.1458, -0.0250],
        [-0.0930, -0.2529, 0.4665],
    ],
    dtype=np.float64,
)

# Inverse computed once at import; used by tests and for sanity round trips.
RGB_FROM_OPPONENT = np.linalg.inv(OPPONENT_FROM_RGB)


@dataclass(frozen=True)
class OpponentImage:
    """Three aligned opponent planes; values may be negative."""

    wb: np.ndarray
    rg: np.ndarray
    yb: np.ndarray

    def __post_init__(self) -> None:
        if not (self.wb.shape == self.rg.shape == self.yb.shape):
            raise ValueError("opponent planes must share dimensions")

    @property
    def shape(self) -> tuple[int, int]:
        return self.wb.shape

    def planes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.wb, self.rg, self.yb


def rgb_to_opponent(image: RgbImage) -> OpponentImage:
    """Apply the 3x3 opponent matrix to every pixel."""
    o = image.data @ OPPONENT_FROM_RGB.T
    return OpponentImage(wb=o[:, :, 0], rg=o[:, :, 1], yb=o[:, :, 2])
