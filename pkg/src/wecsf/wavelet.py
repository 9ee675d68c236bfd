"""Multi-level orthonormal Haar decomposition and the wavelet energy map.

The decomposition is the standard Mallat pyramid: each level splits the
current approximation into one coarser approximation plus horizontal,
vertical and diagonal detail bands, with stride-2 downsampling. Filters
are the orthonormal Haar pair low = [1, 1]/sqrt(2), high = [1, -1]/sqrt(2)
applied to non-overlapping sample pairs (high takes first minus second).

Orientation naming: "h" is lowpass along y / highpass along x (responds to
vertical edges), "v" is highpass along y / lowpass along x, "d" is highpass
along both. For the 2x2 plane [[1, 2], [3, 4]] one level gives
a = 5, h = -1, v = -2, d = 0.

Odd-length axes: the trailing lone sample is carried into the
approximation band unchanged and its detail slot is zero, so every level
has ceil(n / 2) samples per axis and the transform stays orthonormal
(coefficient energy equals pixel energy exactly, and the analysis bank is
invertible). This is the energy-preserving form of half-sample symmetric
extension: extending and filtering would scale the duplicated tail pair by
sqrt(2), which the boundary rule here renormalizes away.

The energy map squares every subband pointwise, upsamples each squared
band back to the source resolution (corner-aligned bilinear) and sums.
With the approximation band excluded, the sum runs over detail bands only,
which models complex-cell pooling of oriented simple-cell responses.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import json
import numpy as np

from .imagecore import resize_bilinear, write_plane

__all__ = [
    "DecompositionError",
    "DetailBands",
    "WaveletPyramid",
    "max_levels",
    "dwt_level",
    "dwt_multilevel",
    "wavelet_energy_map",
    "dump_pyramid",
]

_SQRT2 = float(np.sqrt(2.0))


class DecompositionError(ValueError):
    """Raised for undecomposable planes or out-of-range level counts."""


@dataclass(frozen=True)
class DetailBands:
    """One level's detail subbands (shared dimensions)."""

    h: np.ndarray
    v: np.ndarray
    d: np.ndarray

    def __iter__(self):
        return iter((self.h, self.v, self.d))


@dataclass(frozen=True)
class WaveletPyramid:
    """Mallat pyramid: per-level detail bands plus the final approximation.

    ``details[k]`` holds level k+1; level-k subbands measure
    ceil(source / 2**k) per axis. Total subband count is 3 * levels + 1.
    """

    details: tuple[DetailBands, ...]
    approximation: np.ndarray
    source_shape: tuple[int, int]  # (height, width)

    @property
    def levels(self) -> int:
        return len(self.details)

    @property
    def subband_count(self) -> int:
        return 3 * self.levels + 1


def max_levels(width: int, height: int) -> int:
    """Deepest decomposition for a width x height plane: floor(log2(min dim)).

    A plane whose smaller dimension is below 2 cannot be decomposed at all.
    """
    if width < 1 or height < 1:
        raise ValueError("dimensions must be >= 1")
    smallest = min(width, height)
    if smallest < 2:
        raise DecompositionError(f"nothing to decompose in a {width}x{height} plane")
    return smallest.bit_length() - 1


def _analyze_last_axis(arr: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal Haar split along the last axis; outputs have ceil(n/2) samples."""
    n = arr.shape[-1]
    pairs = n // 2
    even = arr[..., 0 : 2 * pairs : 2]
    odd = arr[..., 1 : 2 * pairs : 2]
    lo = (even + odd) / _SQRT2
    hi = (even - odd) / _SQRT2
    if n % 2:
        tail = arr[..., -1:]
        lo = np.concatenate([lo, tail], axis=-1)
        hi = np.concatenate([hi, np.zeros_like(tail)], axis=-1)
    return lo, hi


def dwt_level(plane: np.ndarray) -> tuple[np.ndarray, DetailBands]:
    """One separable analysis step: (approximation, detail bands)."""
    plane = np.asarray(plane, dtype=np.float64)
    lo_x, hi_x = _analyze_last_axis(plane)
    a, v = (band.T for band in _analyze_last_axis(lo_x.T))
    h, d = (band.T for band in _analyze_last_axis(hi_x.T))
    return a, DetailBands(h=h, v=v, d=d)


def dwt_multilevel(plane: np.ndarray, levels: int) -> WaveletPyramid:
    """Decompose ``levels`` times, recursing on the approximation band only."""
    plane = np.asarray(plane, dtype=np.float64)
    if plane.ndim != 2:
        raise ValueError("dwt_multilevel wants a 2-D plane")
    h, w = plane.shape
    deepest = max_levels(w, h)
    if not (1 <= levels <= deepest):
        raise DecompositionError(
            f"levels must lie in [1, {deepest}] for a {w}x{h} plane, got {levels}"
        )
    details = []
    approx = plane
    for _ in range(levels):
        approx, bands = dwt_level(approx)
        details.append(bands)
    return WaveletPyramid(details=tuple(details), approximation=approx, source_shape=(h, w))


def wavelet_energy_map(pyramid: WaveletPyramid, include_approximation: bool = True) -> np.ndarray:
    """Pixel-wise sum of squared subband coefficients at source resolution.

    Each subband is squared first, then bilinearly upsampled, so the
    result is nonnegative everywhere. ``include_approximation`` selects
    between the full 3L+1 sum (default) and the detail-only complex-cell
    form.
    """
    src_h, src_w = pyramid.source_shape
    acc = np.zeros((src_h, src_w), dtype=np.float64)
    bands: list[np.ndarray] = []
    for level in pyramid.details:
        bands.extend(level)
    if include_approximation:
        bands.append(pyramid.approximation)
    for band in bands:
        acc += resize_bilinear(band * band, src_w, src_h)
    return np.maximum(acc, 0.0)


def dump_pyramid(pyramid: WaveletPyramid, directory: str | Path, prefix: str = "pyramid") -> Path:
    """Write every subband as a WECSF1 plane plus a JSON sidecar index.

    Returns the sidecar path. Used for golden tests and pipeline
    inspection.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    entries = []
    for idx, level in enumerate(pyramid.details, start=1):
        for orientation in ("h", "v", "d"):
            name = f"{prefix}_l{idx}_{orientation}.wecsf1"
            write_plane(directory / name, getattr(level, orientation))
            entries.append({"file": name, "level": idx, "orientation": orientation})
    name = f"{prefix}_l{pyramid.levels}_a.wecsf1"
    write_plane(directory / name, pyramid.approximation)
    entries.append({"file": name, "level": pyramid.levels, "orientation": "a"})
    sidecar = directory / f"{prefix}.json"
    sidecar.write_text(
        json.dumps(
            {
                "source_height": pyramid.source_shape[0],
                "source_width": pyramid.source_shape[1],
                "levels": pyramid.levels,
                "subbands": entries,
            },
            indent=2,
        )
    )
    return sidecar
