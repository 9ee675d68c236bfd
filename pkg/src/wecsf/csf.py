"""Contrast sensitivity grids over the 2-D frequency plane.

The achromatic sensitivity at a frequency vector (fx, fy) in cycles/degree
is the product of a band-pass radial term

    Q(f) = g * (exp(-f / fm) - l * exp(-f^2 / s^2))

and an oblique-effect term

    L(fx, fy) = 1 - w * (4 * (1 - exp(-f / os)) * fx^2 * fy^2) / f^4

with f = |(fx, fy)|. L is 1 on the frequency axes and tends to 1 at the
origin (the 0/0 at DC resolves to zero oblique loss), so the DC gain is
g * (1 - l). Achromatic defaults: g=330.74, fm=7.28, l=0.837, s=1.809,
w=1, os=6.664.

The chromatic red-green and yellow-blue sensitivities use the same
machinery with low-pass parameter sets (l=0, w=0). Their exact values are
not standardized; the shipped defaults below reproduce the expected
low-pass shapes and are plain config values that callers can substitute.

Frequency mapping: after fftshift, centered pixel index k on an axis of
n samples maps to (k / n) * ppd cycles/degree. The default ppd (pixels
per degree) of 32 puts the Nyquist of a 256-pixel image at 16 cyc/deg.

Filtering happens in the Fourier domain:

    out = real(ifft2(ifftshift(fftshift(fft2(plane)) * gains)))
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .imagecore import fft2, fftshift, ifft2, ifftshift

__all__ = [
    "CsfParams",
    "CsfGrid",
    "ACHROMATIC_DEFAULTS",
    "RED_GREEN_DEFAULTS",
    "YELLOW_BLUE_DEFAULTS",
    "CHROMATIC_KINDS",
    "csf_gain",
    "build_acsf",
    "build_chromatic_csf",
    "cached_csf_grid",
    "apply_csf",
]


@dataclass(frozen=True)
class CsfParams:
    """Sensitivity-surface parameters.

    g: overall gain; fm: exponential decay constant (cyc/deg); l: loss at
    low frequencies; s: attenuation of the loss at high frequencies
    (cyc/deg); w: oblique-effect weight; os: oblique-effect scale
    (cyc/deg).
    """

    g: float = 330.74
    fm: float = 7.28
    l: float = 0.837
    s: float = 1.809
    w: float = 1.0
    os: float = 6.664

    def __post_init__(self) -> None:
        values = (self.g, self.fm, self.l, self.s, self.w, self.os)
        if not all(np.isfinite(v) for v in values):
            raise ValueError("CSF parameters must be finite")
        if self.fm <= 0 or self.s <= 0 or self.os <= 0:
            raise ValueError("fm, s and os must be positive")


ACHROMATIC_DEFAULTS = CsfParams()
RED_GREEN_DEFAULTS = CsfParams(g=91.0, fm=5.5, l=0.0, s=1.809, w=0.0, os=6.664)
YELLOW_BLUE_DEFAULTS = CsfParams(g=74.0, fm=4.1, l=0.0, s=1.809, w=0.0, os=6.664)

CHROMATIC_KINDS = {
    "red-green": RED_GREEN_DEFAULTS,
    "yellow-blue": YELLOW_BLUE_DEFAULTS,
}


@dataclass(frozen=True)
class CsfGrid:
    """Frequency-domain gain surface, zero frequency at the center.

    ``gains`` is laid out to multiply an fftshift-ed spectrum; point
    symmetry gains(fx, fy) = gains(-fx, -fy) holds because the formula is
    even in both frequency components.
    """

    gains: np.ndarray
    ppd: float

    @property
    def width(self) -> int:
        return self.gains.shape[1]

    @property
    def height(self) -> int:
        return self.gains.shape[0]


def csf_gain(fx, fy, params: CsfParams = ACHROMATIC_DEFAULTS):
    """Evaluate the sensitivity at frequency vectors in cycles/degree.

    Vectorized over broadcastable fx/fy; the DC cell takes the analytic
    limit (zero oblique loss), so results are finite everywhere.
    """
    fx = np.asarray(fx, dtype=np.float64)
    fy = np.asarray(fy, dtype=np.float64)
    f = np.hypot(fx, fy)
    radial = params.g * (np.exp(-f / params.fm) - params.l * np.exp(-(f * f) / (params.s * params.s)))
    f4 = f ** 4
    anisotropy = np.divide(fx * fx * fy * fy, f4, out=np.zeros_like(f), where=f4 > 0)
    oblique = 1.0 - params.w * 4.0 * (1.0 - np.exp(-f / params.os)) * anisotropy
    out = radial * oblique
    return float(out) if out.ndim == 0 else out


def _centered_freq_axis(n: int, ppd: float) -> np.ndarray:
    # index k (zero frequency at n // 2) -> (k / n) * ppd cycles/degree
    return (np.arange(n) - n // 2) / n * ppd


def _build_grid(width: int, height: int, ppd: float, params: CsfParams) -> CsfGrid:
    if width < 1 or height < 1:
        raise ValueError("grid dimensions must be >= 1")
    if not (ppd > 0):
        raise ValueError(f"ppd must be positive, got {ppd}")
    fx = _centered_freq_axis(width, ppd)[None, :]
    fy = _centered_freq_axis(height, ppd)[:, None]
    gains = csf_gain(fx, fy, params)
    gains.setflags(write=False)
    return CsfGrid(gains=gains, ppd=ppd)


def build_acsf(width: int, height: int, ppd: float, params: CsfParams = ACHROMATIC_DEFAULTS) -> CsfGrid:
    """Achromatic (band-pass, oblique-attenuated) sensitivity grid."""
    return _build_grid(width, height, ppd, params)


def build_chromatic_csf(
    kind: str,
    width: int,
    height: int,
    ppd: float,
    params: CsfParams | None = None,
) -> CsfGrid:
    """Chromatic (low-pass) sensitivity grid for "red-green" or "yellow-blue"."""
    if kind not in CHROMATIC_KINDS:
        raise ValueError(f"unknown chromatic CSF kind {kind!r}")
    return _build_grid(width, height, ppd, params if params is not None else CHROMATIC_KINDS[kind])


@lru_cache(maxsize=64)
def _cached_grid(width: int, height: int, ppd: float, params: CsfParams) -> CsfGrid:
    return _build_grid(width, height, ppd, params)


def cached_csf_grid(width: int, height: int, ppd: float, params: CsfParams) -> CsfGrid:
    """Shared grid cache; every image of a batch reuses the same surface.

    Safe under concurrent readers (grids are immutable, their arrays
    read-only).
    """
    return _cached_grid(width, height, ppd, params)


def apply_csf(plane: np.ndarray, grid: CsfGrid) -> np.ndarray:
    """Multiply the centered spectrum of a plane by the gain surface.

    real(ifft2(ifftshift(fftshift(fft2(plane)) * gains))); linear in the
    input, and real up to rounding because the grid is point symmetric.
    """
    plane = np.asarray(plane, dtype=np.float64)
    if plane.shape != grid.gains.shape:
        raise ValueError(f"plane {plane.shape} does not match grid {grid.gains.shape}")
    spectrum = fftshift(fft2(plane))
    return np.real(ifft2(ifftshift(spectrum * grid.gains)))
