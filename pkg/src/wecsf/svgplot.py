"""Minimal SVG line plots (PR and ROC curves); no plotting dependency."""

from __future__ import annotations

from pathlib import Path

import numpy as np

__all__ = ["polyline_plot"]

_PALETTE = ("#1f66ad", "#c23b22", "#2e8540", "#8a4fbf", "#b8860b")


def _fmt(value: float) -> str:
    return f"{value:.2f}".rstrip("0").rstrip(".")


def polyline_plot(
    path: str | Path,
    series: list[tuple[np.ndarray, np.ndarray, str]],
    *,
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    xlim: tuple[float, float] = (0.0, 1.0),
    ylim: tuple[float, float] = (0.0, 1.0),
    size: tuple[int, int] = (480, 380),
) -> None:
    """Write one SVG with the given (x, y, label) curves."""
    width, height = size
    left, right, top, bottom = 56, 16, 34, 46
    plot_w = width - left - right
    plot_h = height - top - bottom
    x0, x1 = xlim
    y0, y1 = ylim

    def sx(x: float) -> float:
        return left + (x - x0) / (x1 - x0) * plot_w

    def sy(y: float) -> float:
        return top + plot_h - (y - y0) / (y1 - y0) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#333" stroke-width="1"/>',
    ]
    if title:
        parts.append(f'<text x="{width / 2}" y="20" text-anchor="middle" font-size="13">{title}</text>')

    for i in range(5):
        frac = i / 4
        tx = x0 + frac * (x1 - x0)
        ty = y0 + frac * (y1 - y0)
        parts.append(
            f'<line x1="{sx(tx)}" y1="{top}" x2="{sx(tx)}" y2="{top + plot_h}" '
            'stroke="#ddd" stroke-width="0.5"/>'
        )
        parts.append(
            f'<line x1="{left}" y1="{sy(ty)}" x2="{left + plot_w}" y2="{sy(ty)}" '
            'stroke="#ddd" stroke-width="0.5"/>'
        )
        parts.append(
            f'<text x="{sx(tx)}" y="{top + plot_h + 14}" text-anchor="middle">{_fmt(tx)}</text>'
        )
        parts.append(
            f'<text x="{left - 6}" y="{sy(ty) + 4}" text-anchor="end">{_fmt(ty)}</text>'
        )
    if xlabel:
        parts.append(
            f'<text x="{left + plot_w / 2}" y="{height - 10}" text-anchor="middle">{xlabel}</text>'
        )
    if ylabel:
        parts.append(
            f'<text x="14" y="{top + plot_h / 2}" text-anchor="middle" '
            f'transform="rotate(-90 14 {top + plot_h / 2})">{ylabel}</text>'
        )

    for idx, (xs, ys, label) in enumerate(series):
        color = _PALETTE[idx % len(_PALETTE)]
        pts = " ".join(f"{sx(float(x)):.2f},{sy(float(y)):.2f}" for x, y in zip(xs, ys))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        if label:
            ly = top + 14 + 14 * idx
            parts.append(
                f'<line x1="{left + plot_w - 96}" y1="{ly - 4}" x2="{left + plot_w - 76}" '
                f'y2="{ly - 4}" stroke="{color}" stroke-width="1.5"/>'
            )
            parts.append(f'<text x="{left + plot_w - 70}" y="{ly}">{label}</text>')

    parts.append("</svg>")
    Path(path).write_text("\n".join(parts))
