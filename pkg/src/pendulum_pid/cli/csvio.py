"""Trajectory CSV export/import with an exact, round-trippable schema."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from ..simulate import COLUMNS, Trajectory

HEADER = ",".join(COLUMNS)


class SchemaError(ValueError):
    pass


def format_rows(data: np.ndarray) -> str:
    lines = [HEADER]
    lines.extend(",".join(f"{v:.17g}" for v in row) for row in data)
    return "\n".join(lines) + "\n"


def write_trajectory(path: Path, trajectory: Trajectory) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(format_rows(trajectory.data))


def read_trajectory(path: Path) -> np.ndarray:
    """Parse a trajectory CSV into an ``(n, 7)`` array.

    Raises SchemaError naming the first offending line; OSError passes through.
    """
    with open(path, encoding="ascii", newline="") as fh:
        lines = fh.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise SchemaError(f"{path}: empty file")
    if lines[0] != HEADER:
        raise SchemaError(f"{path}: line 1: expected header {HEADER!r}, got {lines[0]!r}")
    if len(lines) == 1:
        raise SchemaError(f"{path}: no data rows")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split(",")
        if len(fields) != len(COLUMNS):
            raise SchemaError(f"{path}: line {lineno}: expected {len(COLUMNS)} fields, got {len(fields)}")
        try:
            rows.append([float(f) for f in fields])
        except ValueError:
            raise SchemaError(f"{path}: line {lineno}: non-numeric field in {line!r}") from None
    return np.array(rows, dtype=float)


def trajectory_metrics(theta: np.ndarray) -> dict[str, float]:
    """Angle statistics used to compare runs (error taken against θ = 0)."""
    theta = np.asarray(theta, dtype=float)
    n = len(theta)
    final_third = theta[n - n // 3:] if n >= 3 else theta
    return {
        "rmse": float(np.sqrt(np.mean(theta**2))),
        "mae": float(np.mean(np.abs(theta))),
        "max_abs_theta": float(np.max(np.abs(theta))),
        "final_third_mean_abs_theta": float(np.mean(np.abs(final_third))),
    }
