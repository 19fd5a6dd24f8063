"""Nelder-Mead search over PID gains."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .control import PidGains
from .objective import ObjectiveSpec, evaluate

COLLAPSE_RTOL = 1e-12


@dataclass(frozen=True)
class OptimizerConfig:
    initial_gains: PidGains = PidGains(-300.0, 0.0, -100.0)
    max_evaluations: int = 2000
    simplex_scale: float = 0.05
    zero_step: float = 1.0
    tolerance: float = 1e-6
    reflection: float = 1.0
    expansion: float = 2.0
    contraction: float = 0.5
    shrink: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "initial_gains", PidGains(*map(float, self.initial_gains)))
        if self.max_evaluations < 4:
            raise ValueError("max_evaluations must cover the initial simplex (>= 4)")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if not (self.simplex_scale > 0 and self.zero_step > 0):
            raise ValueError("simplex_scale and zero_step must be positive")
        if not (self.reflection > 0 and self.expansion > 1 and self.expansion > self.reflection):
            raise ValueError("need reflection > 0 and expansion > max(1, reflection)")
        if not (0 < self.contraction < 1 and 0 < self.shrink < 1):
            raise ValueError("contraction and shrink must lie in (0, 1)")


@dataclass
class TuneResult:
    best_gains: PidGains
    best_cost: float
    evaluation_count: int
    converged: bool
    cost_history: list[float] = field(default_factory=list)
    initial_cost: float = math.nan


def initial_simplex(seed, scale: float, zero_step: float) -> list[np.ndarray]:
    seed = np.asarray(seed, dtype=float)
    vertices = [seed.copy()]
    for i in range(seed.size):
        v = seed.copy()
        v[i] = v[i] + scale * v[i] if v[i] != 0 else zero_step
        vertices.append(v)
    return vertices


def _collapsed(simplex) -> bool:
    best = simplex[0][2]
    spread = max(np.max(np.abs(v[2] - best)) for v in simplex[1:])
    return spread <= COLLAPSE_RTOL * max(1.0, float(np.max(np.abs(best))))


def nelder_mead(func: Callable[[np.ndarray], float], config: OptimizerConfig) -> TuneResult:
    """Minimize ``func`` from ``config.initial_gains``.

    Stops once the spread between the best and worst vertex costs drops below
    ``config.tolerance`` or the evaluation budget is spent.  Vertices with equal
    cost keep the order in which they were created.

    A simplex that has shrunk to rounding level without meeting the cost
    tolerance also stops the search, reported as not converged; this happens
    on objectives that are discontinuous at the minimum.
    """
    alpha, gamma = config.reflection, config.expansion
    rho, sigma = config.contraction, config.shrink
    evaluations = 0
    created = 0

    def vertex(point):
        nonlocal evaluations, created
        evaluations += 1
        created += 1
        return (float(func(point)), created, point)

    simplex = [vertex(p) for p in initial_simplex(config.initial_gains, config.simplex_scale, config.zero_step)]
    initial_cost = simplex[0][0]
    simplex.sort(key=lambda v: v[:2])
    history = [simplex[0][0]]
    converged = False

    while True:
        if simplex[-1][0] - simplex[0][0] < config.tolerance:
            converged = True
            break
        if evaluations >= config.max_evaluations or _collapsed(simplex):
            break

        best, worst = simplex[0], simplex[-1]
        centroid = np.mean([v[2] for v in simplex[:-1]], axis=0)

        reflected = vertex(centroid + alpha * (centroid - worst[2]))
        if reflected[0] < best[0]:
            expanded = vertex(centroid + gamma * (reflected[2] - centroid))
            simplex[-1] = expanded if expanded[0] < reflected[0] else reflected
        elif reflected[0] < simplex[-2][0]:
            simplex[-1] = reflected
        else:
            if reflected[0] < worst[0]:
                contracted = vertex(centroid + rho * (reflected[2] - centroid))
                accept = contracted[0] <= reflected[0]
            else:
                contracted = vertex(centroid + rho * (worst[2] - centroid))
                accept = contracted[0] < worst[0]
            if accept:
                simplex[-1] = contracted
            else:
                simplex = [best] + [
                    vertex(best[2] + sigma * (v[2] - best[2])) for v in simplex[1:]
                ]
        simplex.sort(key=lambda v: v[:2])
        history.append(simplex[0][0])

    cost, _, point = simplex[0]
    return TuneResult(
        best_gains=PidGains(*map(float, point)),
        best_cost=cost,
        evaluation_count=evaluations,
        converged=converged,
        cost_history=history,
        initial_cost=initial_cost,
    )


def minimize(spec: ObjectiveSpec, config: OptimizerConfig) -> TuneResult:
    """Tune PID gains against the regularized error objective."""
    return nelder_mead(lambda k: evaluate(spec, PidGains(*k)), config)
