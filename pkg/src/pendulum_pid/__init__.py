"""Cart-pole simulation with a PID controller and a derivative-free gain tuner."""

from .control import PidController, PidGains
from .dynamics import Accelerations, State, SystemParams, accelerations, ball_position, energies, net_force
from .objective import Metric, ObjectiveSpec, evaluate
from .optimizer import OptimizerConfig, TuneResult, minimize, nelder_mead
from .simulate import SimConfig, Trajectory, run, step

__version__ = "0.1.0"

__all__ = [
    "Accelerations",
    "Metric",
    "ObjectiveSpec",
    "OptimizerConfig",
    "PidController",
    "PidGains",
    "SimConfig",
    "State",
    "SystemParams",
    "Trajectory",
    "TuneResult",
    "accelerations",
    "ball_position",
    "energies",
    "evaluate",
    "minimize",
    "nelder_mead",
    "net_force",
    "run",
    "step",
]
