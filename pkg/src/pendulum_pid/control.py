"""Discrete PID controller with a clamped output."""

from __future__ import annotations

import math
from typing import NamedTuple

DEFAULT_SATURATION = 500.0


class PidGains(NamedTuple):
    k_p: float
    k_i: float
    k_d: float

    @classmethod
    def parse(cls, text: str) -> "PidGains":
        """Parse ``"kp,ki,kd"``."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError(f"expected three comma-separated gains, got {len(parts)}")
        gains = cls(*(float(p) for p in parts))
        if not all(math.isfinite(k) for k in gains):
            raise ValueError(f"gains must be finite, got {text!r}")
        return gains

    def magnitude(self) -> float:
        return abs(self.k_p) + abs(self.k_i) + abs(self.k_d)


class PidController:
    """PID on the rod angle error ``e = θ - θ_target``.

    The integral uses left-rectangle accumulation and is updated before the
    output is formed. The derivative is a backward difference and is zero on
    the first update after construction or reset. There is no anti-windup:
    the accumulator keeps integrating while the output is clamped.
    """

    def __init__(
        self,
        gains: PidGains,
        target: float = 0.0,
        low: float = -DEFAULT_SATURATION,
        high: float = DEFAULT_SATURATION,
    ):
        if not low < high:
            raise ValueError(f"saturation bounds must satisfy low < high, got [{low}, {high}]")
        self.gains = PidGains(*gains)
        self.target = float(target)
        self.low = float(low)
        self.high = float(high)
        self.reset()

    def reset(self) -> None:
        self.integral = 0.0
        self.previous_error = 0.0
        self.initialized = False

    def update(self, measured: float, dt: float) -> float:
        if not dt > 0:
            raise ValueError(f"dt must be positive, got {dt!r}")
        k_p, k_i, k_d = self.gains
        error = measured - self.target
        self.integral += error * dt
        derivative = (error - self.previous_error) / dt if self.initialized else 0.0
        raw = k_p * error + k_i * self.integral + k_d * derivative
        self.previous_error = error
        self.initialized = True
        return min(max(raw, self.low), self.high)

    def __repr__(self):
        return (
            f"PidController(gains={tuple(self.gains)}, target={self.target}, "
            f"bounds=[{self.low}, {self.high}], integral={self.integral})"
        )
