"""Regularized tracking-error cost of a PID gain triple."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .control import PidGains
from .simulate import SimConfig, Trajectory, run

DEFAULT_GAIN_PENALTY = 1e-4
DEFAULT_DIVERGENCE_PENALTY = 1e6


class Metric(str, Enum):
    RMSE = "rmse"
    MAE = "mae"


def rmse(errors: np.ndarray) -> float:
    return math.sqrt(float(np.mean(np.square(errors))))


def mae(errors: np.ndarray) -> float:
    return float(np.mean(np.abs(errors)))


METRICS = {Metric.RMSE: rmse, Metric.MAE: mae}


@dataclass(frozen=True)
class ObjectiveSpec:
    metric: Metric = Metric.RMSE
    gain_penalty_weight: float = DEFAULT_GAIN_PENALTY
    sim: SimConfig = field(default_factory=SimConfig)
    divergence_penalty: float = DEFAULT_DIVERGENCE_PENALTY

    def __post_init__(self):
        object.__setattr__(self, "metric", Metric(self.metric))
        if not (math.isfinite(self.gain_penalty_weight) and self.gain_penalty_weight >= 0):
            raise ValueError(f"gain_penalty_weight must be >= 0, got {self.gain_penalty_weight!r}")
        if not (math.isfinite(self.divergence_penalty) and self.divergence_penalty > 0):
            raise ValueError(f"divergence_penalty must be positive, got {self.divergence_penalty!r}")

    def config_for(self, gains: PidGains) -> SimConfig:
        return dataclasses.replace(self.sim, gains=PidGains(*gains))


def angle_errors(trajectory: Trajectory, target: float) -> np.ndarray:
    return trajectory.theta - target


def tracking_error(spec: ObjectiveSpec, trajectory: Trajectory) -> float:
    """The metric term alone, without the gain penalty."""
    return METRICS[spec.metric](angle_errors(trajectory, spec.sim.target))


def score(spec: ObjectiveSpec, gains: PidGains, trajectory: Trajectory) -> float:
    penalty = spec.gain_penalty_weight * PidGains(*gains).magnitude()
    if trajectory.diverged or len(trajectory) == 0:
        return spec.divergence_penalty + penalty
    value = tracking_error(spec, trajectory)
    if not math.isfinite(value):
        return spec.divergence_penalty + penalty
    return value + penalty


def evaluate(spec: ObjectiveSpec, gains: PidGains) -> float:
    """Simulate ``gains`` under ``spec.sim`` and return the regularized cost."""
    gains = PidGains(*map(float, gains))
    if not all(math.isfinite(k) for k in gains):
        raise ValueError(f"gains must be finite, got {gains}")
    return score(spec, gains, run(spec.config_for(gains)))
