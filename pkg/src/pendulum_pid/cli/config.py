"""Flat ``key = value`` run configuration, named figure scenarios and manifests."""

from __future__ import annotations

import math
import re
from pathlib import Path

from ..control import PidGains
from ..dynamics import State, SystemParams
from ..simulate import SimConfig

PARAM_KEYS = ("cart_mass", "ball_mass", "rod_length", "friction_coefficient", "gravity")
STATE_KEYS = ("x0", "x_dot0", "theta0", "theta_dot0")
GAIN_KEYS = ("k_p", "k_i", "k_d")
RUN_KEYS = ("dt", "duration", "target_angle", "saturation_low", "saturation_high")
CONFIG_KEYS = PARAM_KEYS + STATE_KEYS + GAIN_KEYS + RUN_KEYS
# Written into manifests for the record; accepted and ignored when read back.
INFO_KEYS = ("scenario", "version", "csv", "svg", "manifest", "diverged", "samples",
             "metric", "gain_penalty_weight")

SCENARIOS = {
    "fig2": {"k_p": -200.0, "k_i": 0.0, "k_d": 0.0},
    "fig3": {"k_p": -200.0, "k_i": 0.0, "k_d": -100.0},
    "fig4": {"k_p": -200.0, "k_i": -20.0, "k_d": -100.0},
    "fig5": {"k_p": -308.08, "k_i": -63.55, "k_d": -94.96},
    "fig6": {"k_p": -308.08, "k_i": -63.55, "k_d": -94.96, "theta0": math.pi / 6},
    "fig7": {"k_p": -289.57, "k_i": -77.18, "k_d": -60.65},
}

_PI_EXPR = re.compile(r"^\s*([+-]?)\s*(\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$")


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending key or line."""


def parse_number(text: str) -> float:
    """Parse a float, also accepting multiples of pi such as ``pi/6`` or ``-2pi/3``."""
    try:
        value = float(text)
    except ValueError:
        match = _PI_EXPR.match(text.lower())
        if not match:
            raise ValueError(f"not a number: {text!r}") from None
        sign, coef, den = match.groups()
        value = (float(coef) if coef not in ("", ".") else 1.0) * math.pi
        if den:
            value /= float(den)
        if sign == "-":
            value = -value
    if not math.isfinite(value):
        raise ValueError(f"not a finite number: {text!r}")
    return value


def read_config_file(path: str | Path) -> dict[str, str]:
    """Read ``key = value`` lines; ``#`` starts a comment."""
    values: dict[str, str] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS and key not in INFO_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def defaults() -> dict[str, float]:
    config = SimConfig()
    p, s = config.params, config.initial_state
    return {
        "cart_mass": p.cart_mass,
        "ball_mass": p.ball_mass,
        "rod_length": p.rod_length,
        "friction_coefficient": p.friction_coefficient,
        "gravity": p.gravity,
        "x0": s.x,
        "x_dot0": s.x_dot,
        "theta0": s.theta,
        "theta_dot0": s.theta_dot,
        "k_p": 0.0,
        "k_i": 0.0,
        "k_d": 0.0,
        "dt": config.dt,
        "duration": config.duration,
        "target_angle": config.target,
        "saturation_low": config.saturation_low,
        "saturation_high": config.saturation_high,
    }


def resolve(scenario: str | None = None, file_values: dict[str, str] | None = None,
            overrides: dict[str, float] | None = None) -> tuple[dict[str, float], str | None]:
    """Merge defaults < scenario < config file < flag overrides.

    A ``scenario`` key in the file is honoured when no scenario flag is given.
    Returns the resolved numeric values and the scenario name used.
    """
    file_values = dict(file_values or {})
    scenario = scenario or file_values.get("scenario") or None
    values = defaults()
    if scenario is not None:
        if scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {scenario!r}; choose from {', '.join(SCENARIOS)}")
        values.update(SCENARIOS[scenario])
    for key, text in file_values.items():
        if key in INFO_KEYS:
            continue
        try:
            values[key] = parse_number(text)
        except ValueError as exc:
            raise ConfigError(f"{key}: {exc}") from None
    values.update(overrides or {})
    return values, scenario


def build_sim_config(values: dict[str, float]) -> SimConfig:
    """Validate resolved values into a SimConfig, naming the offending field."""
    for key in ("dt", "duration"):
        if not values[key] > 0:
            raise ConfigError(f"{key} must be positive, got {values[key]!r}")
    try:
        params = SystemParams(*(values[k] for k in PARAM_KEYS))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    try:
        return SimConfig(
            params=params,
            initial_state=State(*(values[k] for k in STATE_KEYS)),
            dt=values["dt"],
            duration=values["duration"],
            gains=PidGains(*(values[k] for k in GAIN_KEYS)),
            target=values["target_angle"],
            saturation_low=values["saturation_low"],
            saturation_high=values["saturation_high"],
        )
    except ValueError as exc:
        raise ConfigError(f"duration/dt: {exc}" if "step count" in str(exc) else str(exc)) from None


def config_values(config: SimConfig) -> dict[str, float]:
    """Inverse of :func:`build_sim_config`."""
    p, s = config.params, config.initial_state
    return {
        "cart_mass": p.cart_mass,
        "ball_mass": p.ball_mass,
        "rod_length": p.rod_length,
        "friction_coefficient": p.friction_coefficient,
        "gravity": p.gravity,
        "x0": s.x,
        "x_dot0": s.x_dot,
        "theta0": s.theta,
        "theta_dot0": s.theta_dot,
        "k_p": config.gains.k_p,
        "k_i": config.gains.k_i,
        "k_d": config.gains.k_d,
        "dt": config.dt,
        "duration": config.duration,
        "target_angle": config.target,
        "saturation_low": config.saturation_low,
        "saturation_high": config.saturation_high,
    }


def format_key_values(items: dict[str, object]) -> str:
    lines = []
    for key, value in items.items():
        # repr keeps floats round-trippable so a manifest replays bit-exactly.
        text = repr(float(value)) if isinstance(value, float) else str(value)
        lines.append(f"{key} = {text}")
    return "\n".join(lines) + "\n"


def write_manifest(path: Path, config: SimConfig, extra: dict[str, object]) -> None:
    from .. import __version__

    items: dict[str, object] = {"version": __version__}
    items.update(extra)
    items.update(config_values(config))
    path.write_text("# run manifest: replay with `pendulum-pid simulate --config <this file>`\n"
                    + format_key_values(items), encoding="utf-8")
