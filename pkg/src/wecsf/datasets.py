"""Dataset ingestion: stimuli, fixation points, densities, video frames.

Datasets live on disk in one fixed layout under a root directory:

    root/
      manifest.json      list of sample ids, in evaluation order
      stimuli/           <id>.png or <id>.jpg / <id>.jpeg
      fixations/         <id>.csv with header "x,y", one integer pair per row
      density/           <id>.png (grayscale), optional per id

The manifest is the source of truth for ids, order, categories and
optional target bounding boxes:

    {"samples": [{"id": "img001", "category": "brightness",
                  "bbox": [x0, y0, x1, y1]}, ...]}

Entries may also carry an explicit "file" name for the stimulus.
Fixation files are optional per id (a stimuli-only benchmark simply has
no fixations directory). Out-of-bounds coordinates and malformed CSV rows
are hard errors naming the file, line and offending values. Loading never
mutates anything; two loads iterate identically.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np

from .imagecore import RgbImage, load_gray, load_image
from .metrics import FixationData

__all__ = [
    "DatasetError",
    "DatasetLayout",
    "DatasetSample",
    "load_dataset",
    "list_video_frames",
    "load_video",
]

STIMULUS_EXTENSIONS = (".png", ".jpg", ".jpeg")


class DatasetError(ValueError):
    """Malformed dataset on disk."""


@dataclass(frozen=True)
class DatasetLayout:
    root: Path
    stimuli_dir: str = "stimuli"
    fixations_dir: str = "fixations"
    density_dir: str = "density"
    manifest_name: str = "manifest.json"

    @classmethod
    def at(cls, root: str | Path) -> "DatasetLayout":
        return cls(root=Path(root))


@dataclass(frozen=True)
class DatasetSample:
    id: str
    stimulus: RgbImage
    fixations: FixationData | None = None
    category: str | None = None
    bbox: tuple[int, int, int, int] | None = None


def _resolve_stimulus(layout: DatasetLayout, entry: dict) -> Path:
    stimuli = layout.root / layout.stimuli_dir
    if "file" in entry:
        path = stimuli / entry["file"]
        if path.is_file():
            return path
        raise DatasetError(f"stimulus file missing for id {entry['id']!r}: {path}")
    for ext in STIMULUS_EXTENSIONS:
        path = stimuli / f"{entry['id']}{ext}"
        if path.is_file():
            return path
    raise DatasetError(f"no stimulus found for id {entry['id']!r} under {stimuli}")


def _parse_fixations(path: Path, width: int, height: int) -> np.ndarray:
    lines = path.read_text().splitlines()
    if not lines or lines[0].strip() != "x,y":
        raise DatasetError(f"{path}:1: expected header 'x,y'")
    points = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise DatasetError(f"{path}:{lineno}: expected 'x,y' pair, got {line!r}")
        try:
            x, y = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise DatasetError(f"{path}:{lineno}: non-integer coordinate in {line!r}") from exc
        if not (0 <= x < width and 0 <= y < height):
            raise DatasetError(
                f"{path}:{lineno}: fixation ({x}, {y}) outside {width}x{height} stimulus"
            )
        points.append((x, y))
    return np.array(points, dtype=np.intp).reshape(-1, 2)


def load_dataset(layout: DatasetLayout) -> Iterator[DatasetSample]:
    """Lazily yield samples in manifest order."""
    manifest_path = layout.root / layout.manifest_name
    if not manifest_path.is_file():
        raise DatasetError(f"manifest not found: {manifest_path}")
    try:
        manifest = json.loads(manifest_path.read_text())
        entries = manifest["samples"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise DatasetError(f"invalid manifest {manifest_path}: {exc}") from exc

    seen: set[str] = set()
    for entry in entries:
        sample_id = entry["id"]
        if sample_id in seen:
            raise DatasetError(f"duplicate id {sample_id!r} in manifest")
        seen.add(sample_id)

        stimulus = load_image(_resolve_stimulus(layout, entry))

        fixations = None
        fix_path = layout.root / layout.fixations_dir / f"{sample_id}.csv"
        density = None
        density_path = layout.root / layout.density_dir / f"{sample_id}.png"
        if density_path.is_file():
            density = load_gray(density_path)
            if density.shape != (stimulus.height, stimulus.width):
                raise DatasetError(
                    f"{density_path}: density {density.shape} does not match stimulus "
                    f"{(stimulus.height, stimulus.width)}"
                )
        if fix_path.is_file():
            points = _parse_fixations(fix_path, stimulus.width, stimulus.height)
            fixations = FixationData(points=points, density=density)
        elif density is not None:
            fixations = FixationData(points=None, density=density)

        bbox = tuple(entry["bbox"]) if "bbox" in entry else None
        yield DatasetSample(
            id=sample_id,
            stimulus=stimulus,
            fixations=fixations,
            category=entry.get("category"),
            bbox=bbox,
        )


def _natural_key(path: Path) -> tuple:
    digits = re.findall(r"\d+", path.stem)
    if not digits:
        raise DatasetError(f"frame name {path.name!r} carries no frame number")
    return (*map(int, digits), path.stem)


def list_video_frames(directory: str | Path) -> list[Path]:
    """Frame files of a directory in natural numeric order (1, 2, ..., 10)."""
    directory = Path(directory)
    frames = sorted(
        (p for p in directory.iterdir() if p.suffix.lower() in STIMULUS_EXTENSIONS),
        key=_natural_key,
    )
    if not frames:
        raise DatasetError(f"no frames found in {directory}")
    return frames


def load_video(directory: str | Path) -> list[RgbImage]:
    """Load a directory of numerically named frames in natural order."""
    frames = list_video_frames(directory)
    images = []
    dims: tuple[int, int] | None = None
    for path in frames:
        image = load_image(path)
        if dims is None:
            dims = (image.width, image.height)
        elif (image.width, image.height) != dims:
            raise DatasetError(
                f"frame {path.name} is {image.width}x{image.height}, expected {dims[0]}x{dims[1]}"
            )
        images.append(image)
    return images
