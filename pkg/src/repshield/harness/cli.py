"""Command-line front end for the benchmark harness.

Subcommands mirror the three experiment protocols plus an offline replay
that runs the avoidance step over recorded depth frames.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..errors import InputFormatError
from ..pipeline import (DECISION_LOG_HEADER, avoidance_step, decision_log_row,
                        load_config)
from ..platforms import PLATFORMS, get_platform
from ..projection import load_depth_frame
from ..repulsion import load_trajectory
from ..worldgen import DYNAMIC_SCENARIOS
from .experiments import (ExperimentSpec, MetricsReport, emit_plot_data,
                          per_trial_csv, run_dynamic, run_exploration,
                          run_goal_conditioned)


def _add_common(parser: argparse.ArgumentParser, default_trials: int) -> None:
    parser.add_argument("--world", help="bundled world name or world file path")
    parser.add_argument("--platform", choices=sorted(PLATFORMS), default="locobot")
    parser.add_argument("--shield", action=argparse.BooleanOptionalAction, default=True,
                        help="wrap the policy in the avoidance shield")
    parser.add_argument("--trials", type=int, default=default_trials)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--config", type=Path,
                        help="key = value config file overriding platform defaults")
    parser.add_argument("--out", type=Path, help="directory for report and logs")
    parser.add_argument("--max-time", type=float, default=300.0,
                        help="per-trial wall of simulated seconds")
    parser.add_argument("--max-distance", type=float, default=30.0,
                        help="per-trial odometer cap in meters")


def _build_spec(args, task: str) -> ExperimentSpec:
    return ExperimentSpec(task=task, world=args.world, platform=args.platform,
                          shield=args.shield, trials=args.trials, seed=args.seed,
                          max_distance_m=args.max_distance, max_time_s=args.max_time)


def _write_outputs(report: MetricsReport, out: Path | None) -> None:
    if out is None:
        return
    out.mkdir(parents=True, exist_ok=True)
    emit_plot_data(report, out / "report.csv")
    (out / "trials.csv").write_text(per_trial_csv(report))
    logs = out / "logs"
    logs.mkdir(exist_ok=True)
    for rec in report.per_trial:
        (logs / f"trial_{rec.trial:03d}.traj.csv").write_text(rec.trajectory_log)
        if rec.decision_log is not None:
            (logs / f"trial_{rec.trial:03d}.dec.csv").write_text(rec.decision_log)


def _print_summary(report: MetricsReport) -> None:
    print(f"task={report.task} shield={int(report.shield)} trials={report.trials}")
    print(f"  arrival_rate={report.arrival_rate:.3f}")
    print(f"  distance_before_collision={report.distance_before_collision_mean:.3f}"
          f" +/- {report.distance_before_collision_std:.3f} m")
    print(f"  path_length={report.path_length_mean:.3f}"
          f" +/- {report.path_length_std:.3f} m")
    print(f"  completion_time={report.completion_time_mean:.3f}"
          f" +/- {report.completion_time_std:.3f} s")
    print(f"  collisions: mean={report.collision_count_mean:.3f}"
          f" trials_with={report.collision_trials}")


def _cmd_explore(args) -> int:
    spec = _build_spec(args, "exploration")
    report = run_exploration(spec)
    _print_summary(report)
    _write_outputs(report, args.out)
    return 0


def _cmd_goal(args) -> int:
    spec = _build_spec(args, "goal_conditioned")
    report = run_goal_conditioned(spec)
    _print_summary(report)
    _write_outputs(report, args.out)
    return 0


def _cmd_dynamic(args) -> int:
    spec = _build_spec(args, "dynamic_obstacle")
    report = run_dynamic(spec, scenario=args.scenario)
    _print_summary(report)
    _write_outputs(report, args.out)
    return 0


def _cmd_replay(args) -> int:
    platform = get_platform(args.platform)
    cfg = platform.config()
    if args.config is not None:
        cfg = load_config(args.config, base=cfg)
    traj = load_trajectory(args.trajectory)
    frames = sorted(Path(args.frames).glob("*.df1"))
    if not frames:
        raise InputFormatError(f"no *.df1 frames found in {args.frames}")
    rows = [DECISION_LOG_HEADER]
    for k, frame_path in enumerate(frames):
        frame = load_depth_frame(frame_path, cfg.mount)
        decision = avoidance_step(frame, traj, cfg)
        rows.append(decision_log_row(k * args.dt, decision))
    text = "\n".join(rows) + "\n"
    if args.out is not None:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="repshield",
        description="Reactive collision-avoidance benchmarks in a planar simulator.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("explore", help="wander until first contact")
    _add_common(p, default_trials=20)
    p.set_defaults(func=_cmd_explore)

    p = sub.add_parser("goal", help="follow a goal chain through clutter")
    _add_common(p, default_trials=1)
    p.set_defaults(func=_cmd_goal)

    p = sub.add_parser("dynamic", help="goal navigation against a scripted agent")
    _add_common(p, default_trials=10)
    p.add_argument("--scenario", choices=DYNAMIC_SCENARIOS,
                   help="bundled scenario; alternative to --world")
    p.set_defaults(func=_cmd_dynamic)

    p = sub.add_parser("replay", help="run the avoidance step over recorded frames")
    p.add_argument("--frames", required=True, type=Path,
                   help="directory of DF1 depth frames, replayed in name order")
    p.add_argument("--trajectory", required=True, type=Path,
                   help="TJ1 trajectory applied at every frame")
    p.add_argument("--platform", choices=sorted(PLATFORMS), default="locobot")
    p.add_argument("--config", type=Path)
    p.add_argument("--out", type=Path, help="decision log destination (default stdout)")
    p.add_argument("--dt", type=float, default=0.1)
    p.set_defaults(func=_cmd_replay)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputFormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
