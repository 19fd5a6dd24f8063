"""Cart-pole plant: friction, equations of motion, ball kinematics and energies.

The rod is massless with a point mass at its tip, θ is measured from the
upright position and a positive θ tips the ball towards -x.  The scalar
kernels below are compiled with numba so the closed-loop simulation can call
them from its own compiled loop; the dataclass-level functions are thin
wrappers for everyday use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from numba import njit

# Below this |cos θ| the rod is treated as horizontal and θ̈ is recovered from
# the rod equation instead of the cart equation (which divides by cos θ).
COS_SINGULAR = 1e-8


@dataclass(frozen=True)
class SystemParams:
    cart_mass: float = 5.0
    ball_mass: float = 5.0
    rod_length: float = 1.0
    friction_coefficient: float = 0.3
    gravity: float = 9.8

    def __post_init__(self):
        for name in ("cart_mass", "ball_mass", "rod_length", "gravity"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")
        mu = self.friction_coefficient
        if not (math.isfinite(mu) and mu >= 0):
            raise ValueError(f"friction_coefficient must be >= 0, got {mu!r}")

    @property
    def friction_force(self) -> float:
        """Magnitude of the Coulomb friction force μ(M+m)g."""
        return self.friction_coefficient * (self.cart_mass + self.ball_mass) * self.gravity


class State(NamedTuple):
    x: float
    x_dot: float
    theta: float
    theta_dot: float


class Accelerations(NamedTuple):
    x_ddot: float
    theta_ddot: float


@njit(cache=True)
def net_force_raw(friction: float, applied: float) -> float:
    # Friction switches on the sign of the applied force, not the velocity.
    if abs(friction) > abs(applied):
        return 0.0
    elif applied > 0:
        return applied - friction
    else:
        return applied + friction


@njit(cache=True)
def accelerations_raw(M, m, L, g, friction, theta, theta_dot, applied):
    """Return (ẍ, θ̈) for the given angle, angular rate and applied force.

    The cart position and velocity do not enter the equations of motion.
    """
    F = net_force_raw(friction, applied)
    s = math.sin(theta)
    c = math.cos(theta)

    # A ẍ + B θ̈ + C = 0   (cart)
    # D ẍ + E θ̈ + Fc = 0  (rod)
    A = M + m
    B = -m * L * c
    C = m * L * theta_dot * theta_dot * s - F
    D = -c
    E = L
    Fc = -g * s

    x_ddot = (Fc * B - C * E) / (A * E - D * B)
    if abs(c) >= COS_SINGULAR:
        theta_ddot = -(C + A * x_ddot) / B
    else:
        theta_ddot = -(Fc + D * x_ddot) / E
    return x_ddot, theta_ddot


def net_force(params: SystemParams, applied: float) -> float:
    """Net horizontal force on the cart after Coulomb friction."""
    return net_force_raw(params.friction_force, float(applied))


def accelerations(params: SystemParams, state: State, applied: float) -> Accelerations:
    x_ddot, theta_ddot = accelerations_raw(
        params.cart_mass,
        params.ball_mass,
        params.rod_length,
        params.gravity,
        params.friction_force,
        float(state.theta),
        float(state.theta_dot),
        float(applied),
    )
    return Accelerations(x_ddot, theta_ddot)


def ball_position(params: SystemParams, state: State) -> tuple[float, float]:
    L = params.rod_length
    return state.x - L * math.sin(state.theta), L * math.cos(state.theta)


def ball_velocity(params: SystemParams, state: State) -> tuple[float, float]:
    L = params.rod_length
    c, s = math.cos(state.theta), math.sin(state.theta)
    return state.x_dot - L * state.theta_dot * c, -L * state.theta_dot * s


def energies(params: SystemParams, state: State) -> tuple[float, float, float]:
    """Return (kinetic, potential, lagrangian) in joules.

    Potential energy is zero at the rod's horizontal position, so the upright
    rest state has PE = m g L.
    """
    M, m, L, g = params.cart_mass, params.ball_mass, params.rod_length, params.gravity
    _, x_dot, theta, theta_dot = state
    kinetic = (
        0.5 * M * x_dot**2
        + 0.5 * m * x_dot**2
        - m * x_dot * L * theta_dot * math.cos(theta)
        + 0.5 * m * L**2 * theta_dot**2
    )
    potential = m * g * L * math.cos(theta)
    return kinetic, potential, kinetic - potential


def total_energy(params: SystemParams, state: State) -> float:
    kinetic, potential, _ = energies(params, state)
    return kinetic + potential
