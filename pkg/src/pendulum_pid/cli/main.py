"""``pendulum-pid`` command line: simulate, tune, compare."""

from __future__ import annotations

import argparse
import dataclasses
import re
import sys
import time
from pathlib import Path

from ..control import PidGains
from ..dynamics import State
from ..objective import Metric, ObjectiveSpec
from ..optimizer import OptimizerConfig, minimize
from ..simulate import SimConfig, run
from . import config as cfg
from .csvio import SchemaError, read_trajectory, trajectory_metrics, write_trajectory
from .svg import line_chart

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # Let "-300,0,-100" and "-pi/4" through as values rather than options.
        self._negative_number_matcher = re.compile(r"^-(\d|\.\d|\d*\.?\d*\*?pi)")

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _gains(text: str) -> PidGains:
    try:
        return PidGains.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _number(text: str) -> float:
    try:
        return cfg.parse_number(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pendulum-pid", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--config", type=Path, help="key = value configuration file")
        p.add_argument("--scenario", choices=sorted(cfg.SCENARIOS), help="preset figure scenario")
        p.add_argument("--dt", type=_number)
        p.add_argument("--duration", type=_number)

    sim = sub.add_parser("simulate", help="run one closed-loop simulation")
    common(sim)
    sim.add_argument("--theta0", type=_number, help="initial rod angle (rad); accepts e.g. pi/6")
    sim.add_argument("--gains", type=_gains, metavar="KP,KI,KD")
    sim.add_argument("--out", type=Path, default=Path("trajectory.csv"), help="output CSV path")

    tune = sub.add_parser("tune", help="optimize PID gains and simulate the result")
    common(tune)
    tune.add_argument("--metric", choices=[m.value for m in Metric], default="rmse")
    tune.add_argument("--seed", type=_gains, default=PidGains(-300.0, 0.0, -100.0), metavar="KP,KI,KD")
    tune.add_argument("--theta0", type=_number,
                      help="start angle for the run with the tuned gains (tuning itself uses the config's theta0)")
    tune.add_argument("--max-evals", type=int, default=OptimizerConfig.max_evaluations)
    tune.add_argument("--out", type=Path, default=Path("tune_out"), help="output directory")

    cmp_ = sub.add_parser("compare", help="compare two trajectory CSVs")
    cmp_.add_argument("a", type=Path)
    cmp_.add_argument("b", type=Path)
    cmp_.add_argument("--out", type=Path, default=Path("compare.txt"), help="report path")
    return parser


def _resolve(args, extra_overrides=None) -> tuple[SimConfig, str | None]:
    file_values = cfg.read_config_file(args.config) if args.config else None
    overrides = {k: v for k, v in (("dt", args.dt), ("duration", args.duration)) if v is not None}
    overrides.update(extra_overrides or {})
    values, scenario = cfg.resolve(args.scenario, file_values, overrides)
    return cfg.build_sim_config(values), scenario


def simulate_to(config: SimConfig, csv_path: Path, scenario: str | None = None,
                title: str | None = None) -> bool:
    """Run ``config`` and write CSV, SVG and manifest next to each other.

    Returns True when the run diverged.
    """
    trajectory = run(config)
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    svg_path = csv_path.with_suffix(".svg")
    manifest_path = csv_path.with_suffix(".manifest")
    write_trajectory(csv_path, trajectory)
    k_p, k_i, k_d = config.gains
    svg_path.write_text(
        line_chart([("theta", trajectory.t, trajectory.theta)],
                   title=title or f"Rod angle, (Kp, Ki, Kd) = ({k_p:g}, {k_i:g}, {k_d:g})"),
        encoding="utf-8",
    )
    cfg.write_manifest(manifest_path, config, {
        "scenario": scenario or "custom",
        "csv": csv_path.name,
        "svg": svg_path.name,
        "samples": len(trajectory),
        "diverged": str(trajectory.diverged).lower(),
    })
    if trajectory.diverged:
        print(f"warning: state became non-finite after {len(trajectory)} steps; "
              f"CSV holds the samples up to the halt", file=sys.stderr)
    return trajectory.diverged


def cmd_simulate(args) -> int:
    extra = {}
    if args.theta0 is not None:
        extra["theta0"] = args.theta0
    if args.gains is not None:
        extra.update(zip(cfg.GAIN_KEYS, args.gains))
    config, scenario = _resolve(args, extra)
    simulate_to(config, args.out, scenario)
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_tune(args) -> int:
    if args.max_evals < 4:
        raise UsageError("--max-evals must be at least 4")
    sim_config, _ = _resolve(args)
    spec = ObjectiveSpec(metric=Metric(args.metric), sim=sim_config)
    opt = OptimizerConfig(initial_gains=args.seed, max_evaluations=args.max_evals)

    started = time.perf_counter()
    result = minimize(spec, opt)
    elapsed = time.perf_counter() - started
    if not result.converged:
        print(f"warning: optimizer stopped after {result.evaluation_count} evaluations "
              f"without meeting the cost tolerance", file=sys.stderr)

    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)
    k_p, k_i, k_d = result.best_gains
    report = {
        "metric": spec.metric.value,
        "gain_penalty_weight": spec.gain_penalty_weight,
        "seed_k_p": opt.initial_gains.k_p,
        "seed_k_i": opt.initial_gains.k_i,
        "seed_k_d": opt.initial_gains.k_d,
        "seed_cost": result.initial_cost,
        "best_k_p": k_p,
        "best_k_i": k_i,
        "best_k_d": k_d,
        "best_cost": result.best_cost,
        "evaluation_count": result.evaluation_count,
        "converged": str(result.converged).lower(),
        "iterations": len(result.cost_history) - 1,
        "wall_time_s": round(elapsed, 3),
    }
    (out / "tune_report.txt").write_text(cfg.format_key_values(report), encoding="utf-8")
    with open(out / "cost_history.csv", "w", encoding="ascii", newline="") as fh:
        fh.write("iteration,best_cost\n")
        fh.writelines(f"{i},{c:.17g}\n" for i, c in enumerate(result.cost_history))

    tuned = dataclasses.replace(sim_config, gains=result.best_gains)
    if args.theta0 is not None:
        s = tuned.initial_state
        tuned = dataclasses.replace(tuned, initial_state=State(s.x, s.x_dot, args.theta0, s.theta_dot))
    simulate_to(tuned, out / "tuned.csv", f"tuned-{spec.metric.value}",
                title=f"Tuned PID ({spec.metric.value.upper()}): ({k_p:.2f}, {k_i:.2f}, {k_d:.2f})")
    print(f"best gains ({k_p:.4f}, {k_i:.4f}, {k_d:.4f}), cost {result.best_cost:.6g}, "
          f"{result.evaluation_count} evaluations; wrote {out}")
    return EXIT_OK


def cmd_compare(args) -> int:
    data_a = read_trajectory(args.a)
    data_b = read_trajectory(args.b)
    metrics_a = trajectory_metrics(data_a[:, 3])
    metrics_b = trajectory_metrics(data_b[:, 3])
    report = {"a": str(args.a), "b": str(args.b)}
    for key in metrics_a:
        report[f"a_{key}"] = metrics_a[key]
        report[f"b_{key}"] = metrics_b[key]
        report[f"delta_{key}"] = metrics_b[key] - metrics_a[key]
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(cfg.format_key_values(report), encoding="utf-8")
    args.out.with_suffix(".svg").write_text(
        line_chart([(args.a.stem, data_a[:, 0], data_a[:, 3]), (args.b.stem, data_b[:, 0], data_b[:, 3])],
                   title="Rod angle comparison"),
        encoding="utf-8",
    )
    print(f"wrote {args.out}")
    return EXIT_OK


COMMANDS = {"simulate": cmd_simulate, "tune": cmd_tune, "compare": cmd_compare}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (cfg.ConfigError, SchemaError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
