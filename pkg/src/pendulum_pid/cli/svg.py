"""Minimal SVG line charts (single or overlaid series) written as plain text."""

from __future__ import annotations

from html import escape
from typing import Sequence

import numpy as np

WIDTH = 900
HEIGHT = 420
MARGIN_LEFT = 70
MARGIN_RIGHT = 20
MARGIN_TOP = 40
MARGIN_BOTTOM = 50
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e")
MAX_POINTS = 2000


def _decimate(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Polylines with 15000 vertices render fine but bloat the file.
    if len(x) <= MAX_POINTS:
        return x, y
    idx = np.linspace(0, len(x) - 1, MAX_POINTS).round().astype(int)
    return x[idx], y[idx]


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def line_chart(
    series: Sequence[tuple[str, Sequence[float], Sequence[float]]],
    title: str = "",
    x_label: str = "t (s)",
    y_label: str = "theta (rad)",
) -> str:
    """Render ``(label, xs, ys)`` series into one SVG document."""
    if not series:
        raise ValueError("at least one series is required")
    data = []
    for label, xs, ys in series:
        # Clip so spans of diverging runs stay representable.
        xs = np.clip(np.asarray(xs, float), -1e300, 1e300)
        ys = np.clip(np.asarray(ys, float), -1e300, 1e300)
        if xs.shape != ys.shape or xs.size == 0:
            raise ValueError(f"series {label!r} must have matching, non-empty x and y")
        data.append((label, *_decimate(xs, ys)))

    x_lo = min(float(xs.min()) for _, xs, _ in data)
    x_hi = max(float(xs.max()) for _, xs, _ in data)
    y_lo = min(float(ys.min()) for _, _, ys in data)
    y_hi = max(float(ys.max()) for _, _, ys in data)
    if x_hi == x_lo:
        pad = max(abs(x_lo), 1.0) * 0.5
        x_lo, x_hi = x_lo - pad, x_hi + pad
    if y_hi == y_lo:
        pad = max(abs(y_lo), 1.0) * 0.5
        y_lo, y_hi = y_lo - pad, y_hi + pad

    left, right = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
    top, bottom = MARGIN_TOP, HEIGHT - MARGIN_BOTTOM

    def px(v):
        return left + (v - x_lo) / (x_hi - x_lo) * (right - left)

    def py(v):
        return bottom - (v - y_lo) / (y_hi - y_lo) * (bottom - top)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2}" y="24" text-anchor="middle" font-family="sans-serif" '
        f'font-size="16">{escape(title)}</text>',
        f'<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{bottom}" stroke="black"/>',
    ]
    for v in _ticks(x_lo, x_hi):
        out.append(
            f'<text x="{px(v):.2f}" y="{bottom + 18}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{v:.3g}</text>'
        )
    for v in _ticks(y_lo, y_hi):
        out.append(
            f'<text x="{left - 6}" y="{py(v) + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{v:.3g}</text>'
        )
    if y_lo < 0 < y_hi:
        out.append(
            f'<line x1="{left}" y1="{py(0.0):.2f}" x2="{right}" y2="{py(0.0):.2f}" '
            f'stroke="#999" stroke-dasharray="4 3"/>'
        )
    out.append(
        f'<text x="{(left + right) / 2}" y="{HEIGHT - 10}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{escape(x_label)}</text>'
    )
    out.append(
        f'<text x="16" y="{(top + bottom) / 2}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="13" transform="rotate(-90 16 {(top + bottom) / 2})">{escape(y_label)}</text>'
    )
    for i, (label, xs, ys) in enumerate(data):
        color = COLORS[i % len(COLORS)]
        points = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(xs, ys))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{points}"/>')
        if len(data) > 1:
            y = top + 14 + 16 * i
            out.append(f'<line x1="{right - 140}" y1="{y}" x2="{right - 115}" y2="{y}" stroke="{color}" stroke-width="2"/>')
            out.append(
                f'<text x="{right - 110}" y="{y + 4}" font-family="sans-serif" '
                f'font-size="12">{escape(label)}</text>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"
