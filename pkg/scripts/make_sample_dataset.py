#!/usr/bin/env python3
"""Regenerate the bundled 10-image sample dataset under data/sample10.

Feature-singleton stimuli across five categories, with synthetic
fixations clustered on the target plus a weak center bias. Three images
also ship a precomputed density PNG so the loader's density path stays
exercised. Deterministic: rerunning reproduces the same bytes.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
from PIL import Image
from scipy.ndimage import gaussian_filter

ROOT = Path(__file__).resolve().parents[1] / "data" / "sample10"
SIZE = 128
CELLS = 6
CATEGORIES = ["brightness", "color", "size", "orientation", "shape"]


def paint_square(img, cx, cy, half, color):
    img[max(cy - half, 0) : cy + half, max(cx - half, 0) : cx + half] = color


def make_stimulus(category: str, target_cell, rng):
    img = np.full((SIZE, SIZE, 3), 0.35)
    gray = np.array([0.55, 0.55, 0.55])
    step = SIZE // CELLS
    bbox = None
    for row in range(CELLS):
        for col in range(CELLS):
            cx = col * step + step // 2 + int(rng.integers(-3, 4))
            cy = row * step + step // 2 + int(rng.integers(-3, 4))
            is_target = (col, row) == tuple(target_cell)
            if category == "brightness":
                paint_square(img, cx, cy, 5, np.array([0.95] * 3) if is_target else gray)
            elif category == "color":
                color = np.array([0.2, 0.7, 0.25]) if is_target else np.array([0.7, 0.25, 0.2])
                paint_square(img, cx, cy, 5, color)
            elif category == "size":
                paint_square(img, cx, cy, 9 if is_target else 4, gray)
            elif category == "orientation":
                if is_target:
                    img[cy - 2 : cy + 2, max(cx - 6, 0) : cx + 6] = gray
                else:
                    img[max(cy - 6, 0) : cy + 6, cx - 2 : cx + 2] = gray
            elif category == "shape":
                if is_target:
                    for d in range(-6, 6):
                        for t in (-1, 0, 1):
                            for yy in (cy + d + t, cy - d + t):
                                if 0 <= yy < SIZE and 0 <= cx + d < SIZE:
                                    img[yy, cx + d] = gray
                else:
                    paint_square(img, cx, cy, 5, gray)
            if is_target:
                bbox = [
                    max(cx - 18, 0),
                    max(cy - 18, 0),
                    min(cx + 18, SIZE),
                    min(cy + 18, SIZE),
                ]
    return img, bbox


def make_fixations(bbox, rng):
    cx = (bbox[0] + bbox[2]) / 2
    cy = (bbox[1] + bbox[3]) / 2
    on_target = rng.normal([cx, cy], 6.0, size=(20, 2))
    center_bias = rng.normal([SIZE / 2, SIZE / 2], 18.0, size=(8, 2))
    pts = np.concatenate([on_target, center_bias])
    return np.clip(np.rint(pts), 0, SIZE - 1).astype(int)


def main() -> None:
    rng = np.random.default_rng(20250809)
    stim_dir = ROOT / "stimuli"
    fix_dir = ROOT / "fixations"
    dens_dir = ROOT / "density"
    for d in (stim_dir, fix_dir, dens_dir):
        d.mkdir(parents=True, exist_ok=True)

    cells = [(4, 1), (1, 4), (2, 3), (3, 2), (4, 4), (1, 1), (3, 4), (2, 1), (4, 2), (1, 3)]
    samples = []
    for i in range(10):
        category = CATEGORIES[i % len(CATEGORIES)]
        sample_id = f"stim{i + 1:02d}"
        img, bbox = make_stimulus(category, cells[i], rng)
        Image.fromarray(np.rint(img * 255).astype(np.uint8)).save(stim_dir / f"{sample_id}.png")

        points = make_fixations(bbox, rng)
        lines = ["x,y"] + [f"{x},{y}" for x, y in points]
        (fix_dir / f"{sample_id}.csv").write_text("\n".join(lines) + "\n")

        if i < 3:
            counts = np.zeros((SIZE, SIZE))
            np.add.at(counts, (points[:, 1], points[:, 0]), 1.0)
            dens = gaussian_filter(counts, sigma=4.0)
            dens = dens / dens.max()
            Image.fromarray(np.rint(dens * 255).astype(np.uint8), mode="L").save(
                dens_dir / f"{sample_id}.png"
            )

        samples.append({"id": sample_id, "category": category, "bbox": bbox})

    (ROOT / "manifest.json").write_text(
        json.dumps({"name": "sample10", "samples": samples}, indent=2) + "\n"
    )
    print(f"wrote {len(samples)} samples to {ROOT}")


if __name__ == "__main__":
    main()
