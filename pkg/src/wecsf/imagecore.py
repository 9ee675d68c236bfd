"""Core raster types and deterministic numeric primitives.

Every stage of the model passes data around as "planes": 2-D float64 numpy
arrays, row-major, all values finite. Color images and saliency maps are
thin dataclass wrappers around planes. All functions here are pure and
thread-safe; nothing mutates its inputs.

Conventions pinned for the whole package:

* fftshift moves the zero-frequency bin to index ``n // 2`` on each axis
  (the ceil-split convention), so odd dimensions are well defined.
* Bilinear resampling uses corner-aligned sample positions: output sample
  ``j`` of an axis resized from ``n`` to ``m`` reads source coordinate
  ``j * (n - 1) / (m - 1)``. Resizing to the same size is the identity.
* Plane files use the ``WECSF1`` dump: 6-byte magic, little-endian u32
  width, u32 height, then width*height little-endian float64 row-major.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

__all__ = [
    "ImageDecodeError",
    "RgbImage",
    "SaliencyMap",
    "normalize_minmax",
    "resize_bilinear",
    "fft2",
    "ifft2",
    "fftshift",
    "ifftshift",
    "write_plane",
    "read_plane",
    "load_image",
    "load_gray",
    "save_gray_png",
]

PLANE_MAGIC = b"WECSF1"


class ImageDecodeError(ValueError):
    """Raised when an input file cannot be decoded as PNG or JPEG."""


@dataclass(frozen=True)
class RgbImage:
    """An RGB image as an (height, width, 3) float64 array.

    Channel values are expected in [0, 1]; :meth:`from_array` clamps on
    load, direct construction does not (the pipeline relies on that for
    its scale-invariance contract).
    """

    data: np.ndarray

    def __post_init__(self) -> None:
        if self.data.ndim != 3 or self.data.shape[2] != 3:
            raise ValueError(f"RgbImage wants (h, w, 3), got {self.data.shape}")

    @classmethod
    def from_array(cls, arr: np.ndarray, clamp: bool = True) -> "RgbImage":
        data = np.asarray(arr, dtype=np.float64)
        if clamp:
            data = np.clip(data, 0.0, 1.0)
        return cls(data)

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    def channel(self, index: int) -> np.ndarray:
        return self.data[:, :, index]

    @property
    def r(self) -> np.ndarray:
        return self.data[:, :, 0]

    @property
    def g(self) -> np.ndarray:
        return self.data[:, :, 1]

    @property
    def b(self) -> np.ndarray:
        return self.data[:, :, 2]


@dataclass(frozen=True)
class SaliencyMap:
    """Final model output: one plane in [0, 1] at the stimulus resolution.

    The maximum is 1 unless the map is identically zero (degenerate
    stimulus, e.g. a uniform field).
    """

    plane: np.ndarray
    source_width: int
    source_height: int


def normalize_minmax(plane: np.ndarray) -> np.ndarray:
    """Rescale a plane to [0, 1]; a constant plane maps to all zeros."""
    plane = np.asarray(plane, dtype=np.float64)
    if plane.size == 0:
        raise ValueError("empty plane")
    lo = float(plane.min())
    hi = float(plane.max())
    if hi == lo:
        return np.zeros_like(plane)
    return (plane - lo) / (hi - lo)


def _axis_coords(n_src: int, n_dst: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    # corner-aligned sample positions; degenerate axes collapse to 0
    if n_dst == 1 or n_src == 1:
        coords = np.zeros(n_dst)
    else:
        coords = np.linspace(0.0, n_src - 1.0, n_dst)
    i0 = np.floor(coords).astype(np.intp)
    i1 = np.minimum(i0 + 1, n_src - 1)
    frac = coords - i0
    return i0, i1, frac


def resize_bilinear(plane: np.ndarray, new_width: int, new_height: int) -> np.ndarray:
    """Corner-aligned separable bilinear resampling.

    Identity (bitwise-equal copy) when the size is unchanged; constant
    planes stay exactly constant because the interpolation is computed as
    ``v0 + frac * (v1 - v0)``.
    """
    if new_width < 1 or new_height < 1:
        raise ValueError(f"target dimensions must be >= 1, got {new_width}x{new_height}")
    plane = np.asarray(plane, dtype=np.float64)
    h, w = plane.shape
    if (new_width, new_height) == (w, h):
        return plane.copy()

    x0, x1, fx = _axis_coords(w, new_width)
    y0, y1, fy = _axis_coords(h, new_height)

    left = plane[:, x0]
    right = plane[:, x1]
    horiz = left + fx[None, :] * (right - left)
    top = horiz[y0, :]
    bottom = horiz[y1, :]
    return top + fy[:, None] * (bottom - top)


def fft2(plane: np.ndarray) -> np.ndarray:
    """Forward 2-D DFT (unnormalized)."""
    return np.fft.fft2(plane)


def ifft2(grid: np.ndarray) -> np.ndarray:
    """Inverse 2-D DFT (1/N-normalized); complex output."""
    return np.fft.ifft2(grid)


def fftshift(grid: np.ndarray) -> np.ndarray:
    """Move the zero-frequency bin to index ``n // 2`` on both axes."""
    return np.fft.fftshift(grid)


def ifftshift(grid: np.ndarray) -> np.ndarray:
    """Exact inverse of :func:`fftshift` for even and odd dimensions."""
    return np.fft.ifftshift(grid)


def write_plane(path: str | Path, plane: np.ndarray) -> None:
    """Dump a plane in the WECSF1 binary format."""
    plane = np.ascontiguousarray(plane, dtype=np.float64)
    if plane.ndim != 2:
        raise ValueError("write_plane wants a 2-D plane")
    h, w = plane.shape
    with open(path, "wb") as fh:
        fh.write(struct.pack("<6sII", PLANE_MAGIC, w, h))
        fh.write(plane.astype("<f8").tobytes())


def read_plane(path: str | Path) -> np.ndarray:
    """Load a WECSF1 plane dump; validates magic, size and finiteness."""
    raw = Path(path).read_bytes()
    if len(raw) < 14:
        raise ValueError(f"{path}: truncated WECSF1 file")
    magic, w, h = struct.unpack_from("<6sII", raw, 0)
    if magic != PLANE_MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}")
    expected = 14 + 8 * w * h
    if len(raw) != expected:
        raise ValueError(f"{path}: expected {expected} bytes, found {len(raw)}")
    data = np.frombuffer(raw, dtype="<f8", offset=14).reshape(h, w)
    if not np.isfinite(data).all():
        raise ValueError(f"{path}: non-finite values in plane")
    return data.astype(np.float64)


def _open_checked(path: str | Path) -> Image.Image:
    try:
        img = Image.open(path)
        img.load()
    except (UnidentifiedImageError, OSError) as exc:
        raise ImageDecodeError(f"{path}: cannot decode image ({exc})") from exc
    if img.format not in ("PNG", "JPEG"):
        raise ImageDecodeError(f"{path}: unsupported format {img.format!r} (PNG/JPEG only)")
    return img


def load_image(path: str | Path) -> RgbImage:
    """Decode a PNG or JPEG stimulus into an RgbImage in [0, 1].

    8-bit data is promoted to float64; grayscale and palette images are
    expanded to three channels.
    """
    img = _open_checked(path).convert("RGB")
    data = np.asarray(img, dtype=np.float64) / 255.0
    return RgbImage.from_array(data)


def load_gray(path: str | Path) -> np.ndarray:
    """Decode a PNG/JPEG file as a single grayscale plane in [0, 1]."""
    img = _open_checked(path).convert("L")
    return np.asarray(img, dtype=np.float64) / 255.0


def save_gray_png(path: str | Path, plane: np.ndarray) -> None:
    """Write a [0, 1] plane as an 8-bit grayscale PNG (values = round(255 s))."""
    data = np.rint(np.clip(np.asarray(plane, dtype=np.float64), 0.0, 1.0) * 255.0)
    Image.fromarray(data.astype(np.uint8), mode="L").save(path, format="PNG")
