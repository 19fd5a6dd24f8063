"""Fixed-step closed-loop simulation of the PID-controlled cart-pole."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .control import DEFAULT_SATURATION, PidGains
from .dynamics import State, SystemParams, accelerations, accelerations_raw, net_force_raw

COLUMNS = ("t", "x", "x_dot", "theta", "theta_dot", "u", "F_net")

DEFAULT_INITIAL_STATE = State(0.0, 0.0, math.pi / 4, 0.0)


def step_count(duration: float, dt: float) -> int:
    """Number of fixed steps in ``duration``; rejects non-integer ratios."""
    if not (math.isfinite(dt) and dt > 0):
        raise ValueError(f"dt must be positive, got {dt!r}")
    if not (math.isfinite(duration) and duration > 0):
        raise ValueError(f"duration must be positive, got {duration!r}")
    ratio = duration / dt
    n = round(ratio)
    if n < 1 or abs(ratio - n) > 0.5 * math.ulp(n):
        raise ValueError(f"duration / dt = {ratio!r} is not an integer step count")
    return n


@dataclass(frozen=True)
class SimConfig:
    params: SystemParams = field(default_factory=SystemParams)
    initial_state: State = DEFAULT_INITIAL_STATE
    dt: float = 0.001
    duration: float = 15.0
    gains: PidGains = PidGains(0.0, 0.0, 0.0)
    target: float = 0.0
    saturation_low: float = -DEFAULT_SATURATION
    saturation_high: float = DEFAULT_SATURATION

    def __post_init__(self):
        object.__setattr__(self, "initial_state", State(*map(float, self.initial_state)))
        object.__setattr__(self, "gains", PidGains(*map(float, self.gains)))
        if not all(math.isfinite(v) for v in self.initial_state):
            raise ValueError(f"initial_state must be finite, got {self.initial_state}")
        if not all(math.isfinite(v) for v in self.gains):
            raise ValueError(f"gains must be finite, got {self.gains}")
        if not self.saturation_low < self.saturation_high:
            raise ValueError("saturation_low must be below saturation_high")
        step_count(self.duration, self.dt)

    @property
    def n_steps(self) -> int:
        return step_count(self.duration, self.dt)


@dataclass
class Trajectory:
    """Post-step samples of a closed-loop run, one row per step.

    ``diverged`` is set when the state became non-finite; the run halts there
    and only the finite samples before the halt are kept.
    """

    data: np.ndarray  # shape (n, 7), columns as in COLUMNS
    diverged: bool = False

    def __len__(self):
        return self.data.shape[0]

    def column(self, name: str) -> np.ndarray:
        return self.data[:, COLUMNS.index(name)]

    t = property(lambda self: self.data[:, 0])
    x = property(lambda self: self.data[:, 1])
    x_dot = property(lambda self: self.data[:, 2])
    theta = property(lambda self: self.data[:, 3])
    theta_dot = property(lambda self: self.data[:, 4])
    u = property(lambda self: self.data[:, 5])
    F_net = property(lambda self: self.data[:, 6])

    def state(self, k: int) -> State:
        return State(*self.data[k, 1:5])


def step(params: SystemParams, state: State, command: float, dt: float) -> State:
    """Advance one step holding the accelerations constant over ``dt``."""
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    x, x_dot, theta, theta_dot = state
    x_ddot, theta_ddot = accelerations(params, state, command)
    return State(
        x + x_dot * dt + 0.5 * x_ddot * dt * dt,
        x_dot + x_ddot * dt,
        theta + theta_dot * dt + 0.5 * theta_ddot * dt * dt,
        theta_dot + theta_ddot * dt,
    )


@njit(cache=True)
def _closed_loop(M, m, L, g, friction, x, x_dot, theta, theta_dot,
                 k_p, k_i, k_d, target, low, high, dt, n):
    out = np.empty((n, 7))
    integral = 0.0
    previous_error = 0.0
    for k in range(n):
        # Controller sees the pre-step angle; its command is held for the step.
        error = theta - target
        integral += error * dt
        derivative = (error - previous_error) / dt if k > 0 else 0.0
        raw = k_p * error + k_i * integral + k_d * derivative
        u = min(max(raw, low), high)
        previous_error = error

        x_ddot, theta_ddot = accelerations_raw(M, m, L, g, friction, theta, theta_dot, u)
        x = x + x_dot * dt + 0.5 * x_ddot * dt * dt
        x_dot = x_dot + x_ddot * dt
        theta = theta + theta_dot * dt + 0.5 * theta_ddot * dt * dt
        theta_dot = theta_dot + theta_ddot * dt
        if not (np.isfinite(x) and np.isfinite(x_dot)
                and np.isfinite(theta) and np.isfinite(theta_dot)):
            return out[:k], True

        out[k, 0] = (k + 1) * dt
        out[k, 1] = x
        out[k, 2] = x_dot
        out[k, 3] = theta
        out[k, 4] = theta_dot
        out[k, 5] = u
        out[k, 6] = net_force_raw(friction, u)
    return out, False


def run(config: SimConfig) -> Trajectory:
    p = config.params
    s = config.initial_state
    data, diverged = _closed_loop(
        p.cart_mass, p.ball_mass, p.rod_length, p.gravity, p.friction_force,
        s.x, s.x_dot, s.theta, s.theta_dot,
        *config.gains, config.target, config.saturation_low, config.saturation_high,
        config.dt, config.n_steps,
    )
    return Trajectory(data=data, diverged=bool(diverged))
