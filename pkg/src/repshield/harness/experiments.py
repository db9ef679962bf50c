"""Benchmark protocols: exploration, goal chains, and scripted crossings.

Every run is a pure function of the experiment spec. Per-trial randomness
(start poses, policy drift seeds, schedule jitter) derives from the spec
seed through named SeedSequence streams that never depend on whether the
shield is enabled, so paired arms see identical worlds and initial
conditions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ..errors import InputFormatError
from ..platforms import SIM_FRAME_ROWS, PlatformSpec, get_platform
from ..sim import RobotState, WorldModel, check_collision, perturb_agent
from ..sim.policies import GoalSeeker, Wanderer
from ..worldgen import BUNDLED_WORLDS, bundled_world_path
from ..sim.world import load_world
from .episodes import GOAL_RADIUS_M, EpisodeResult, run_episode

TASKS = ("exploration", "goal_conditioned", "dynamic_obstacle")

# SeedSequence stream tags, one per independent random purpose.
_STREAM_POLICY = 0
_STREAM_START = 1
_STREAM_SCHEDULE = 2


@dataclass(frozen=True)
class ExperimentSpec:
    """Declarative description of one experiment arm."""

    task: str
    world: str | Path | WorldModel | None = None
    platform: str = "locobot"
    shield: bool = True
    trials: int = 10
    seed: int = 0
    waypoint_count: int = 8
    step_len_m: float = 0.25
    max_distance_m: float = 30.0
    max_time_s: float = 300.0
    dt: float = 0.1
    frame_rows: int = SIM_FRAME_ROWS

    def __post_init__(self):
        if self.task not in TASKS:
            raise ValueError(f"task must be one of {TASKS}, got {self.task!r}")
        if self.trials < 1:
            raise ValueError(f"trials must be at least 1, got {self.trials}")


@dataclass
class TrialRecord:
    trial: int
    arrived: bool
    distance_m: float
    distance_before_collision_m: float
    completion_time_s: float
    collisions: int
    trajectory_log: str
    decision_log: str | None


@dataclass
class MetricsReport:
    """Aggregates over one experiment arm; means pair with sample std."""

    task: str
    shield: bool
    trials: int
    arrival_rate: float
    distance_before_collision_mean: float
    distance_before_collision_std: float
    path_length_mean: float
    path_length_std: float
    completion_time_mean: float
    completion_time_std: float
    collision_count_mean: float
    collision_trials: int
    per_trial: list[TrialRecord] = field(default_factory=list)


def _mean_std(values: list[float]) -> tuple[float, float]:
    if not values:
        return math.nan, math.nan
    arr = np.asarray(values)
    std = float(np.std(arr, ddof=1)) if arr.size > 1 else 0.0
    return float(np.mean(arr)), std


def _trial_rng(seed: int, trial: int, stream: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed,
                                                        spawn_key=(trial, stream)))


def _trial_policy_seed(seed: int, trial: int) -> int:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(trial, _STREAM_POLICY))
    return int(ss.generate_state(1)[0])


def resolve_world(world: str | Path | WorldModel) -> WorldModel:
    """Accept a WorldModel, a bundled world name, or a file path."""
    if isinstance(world, WorldModel):
        return world
    if world is None:
        raise InputFormatError("no world given")
    name = str(world)
    if name in BUNDLED_WORLDS:
        return load_world(bundled_world_path(name))
    path = Path(world)
    if not path.exists():
        raise InputFormatError(f"world {name!r} is neither a bundled name nor a file")
    return load_world(path)


def _sample_start(world: WorldModel, platform: PlatformSpec,
                  rng: np.random.Generator, clearance: float = 0.3) -> RobotState:
    """Uniform collision-free pose; the same rng stream on both arms.

    The clearance pads the footprint during sampling only, so no trial
    begins already brushing an obstacle that sits outside the camera fov.
    """
    xmin, ymin, xmax, ymax = world.bounds
    margin = platform.footprint_radius_m + clearance + 0.02
    probe_radius = platform.footprint_radius_m + clearance
    for _ in range(1000):
        x = rng.uniform(xmin + margin, xmax - margin)
        y = rng.uniform(ymin + margin, ymax - margin)
        heading = rng.uniform(-math.pi, math.pi)
        probe = RobotState(x, y, heading, probe_radius, platform.name)
        if not check_collision(world, probe, t=0.0):
            return RobotState(x, y, heading, platform.footprint_radius_m, platform.name)
    raise RuntimeError("could not sample a collision-free start pose")


def _jittered_start(world: WorldModel, platform: PlatformSpec,
                    rng: np.random.Generator) -> RobotState:
    if world.start is None:
        raise InputFormatError("world does not define a start pose")
    x0, y0, h0 = world.start
    for _ in range(100):
        x = x0 + rng.uniform(-0.1, 0.1)
        y = y0 + rng.uniform(-0.1, 0.1)
        probe = RobotState(x, y, h0, platform.footprint_radius_m + 0.02, platform.name)
        if not check_collision(world, probe, t=0.0):
            return RobotState(x, y, h0, platform.footprint_radius_m, platform.name)
    return RobotState(x0, y0, h0, platform.footprint_radius_m, platform.name)


def _record(trial: int, res: EpisodeResult) -> TrialRecord:
    return TrialRecord(trial=trial, arrived=res.arrived, distance_m=res.distance_m,
                       distance_before_collision_m=res.distance_before_collision_m,
                       completion_time_s=res.completion_time_s, collisions=res.collisions,
                       trajectory_log=res.trajectory_log, decision_log=res.decision_log)


def _aggregate(task: str, spec: ExperimentSpec, records: list[TrialRecord]) -> MetricsReport:
    dbc_mean, dbc_std = _mean_std([r.distance_before_collision_m for r in records])
    path_mean, path_std = _mean_std([r.distance_m for r in records])
    times = [r.completion_time_s for r in records if r.arrived]
    time_mean, time_std = _mean_std(times)
    return MetricsReport(
        task=task, shield=spec.shield, trials=len(records),
        arrival_rate=sum(r.arrived for r in records) / len(records),
        distance_before_collision_mean=dbc_mean, distance_before_collision_std=dbc_std,
        path_length_mean=path_mean, path_length_std=path_std,
        completion_time_mean=time_mean, completion_time_std=time_std,
        collision_count_mean=sum(r.collisions for r in records) / len(records),
        collision_trials=sum(r.collisions > 0 for r in records),
        per_trial=records,
    )


def run_exploration(spec: ExperimentSpec) -> MetricsReport:
    """Wander until first contact; score distance covered before it."""
    if spec.task != "exploration":
        raise ValueError(f"spec.task is {spec.task!r}, expected 'exploration'")
    world = resolve_world(spec.world)
    platform = get_platform(spec.platform)
    cfg = platform.config()
    records = []
    for trial in range(spec.trials):
        start = _sample_start(world, platform, _trial_rng(spec.seed, trial, _STREAM_START))
        policy = Wanderer(spec.waypoint_count, spec.step_len_m,
                          seed=_trial_policy_seed(spec.seed, trial))
        res = run_episode(world, policy, platform=platform, shield=spec.shield,
                          start=start, cfg=cfg, goals=None, dt=spec.dt,
                          max_distance_m=spec.max_distance_m, max_time_s=spec.max_time_s,
                          stop_on_collision=True, frame_rows=spec.frame_rows)
        records.append(_record(trial, res))
    return _aggregate("exploration", spec, records)


def run_goal_conditioned(spec: ExperimentSpec,
                         goals: np.ndarray | None = None) -> MetricsReport:
    """Visit an ordered goal chain; collisions are counted, not fatal."""
    if spec.task != "goal_conditioned":
        raise ValueError(f"spec.task is {spec.task!r}, expected 'goal_conditioned'")
    world = resolve_world(spec.world)
    platform = get_platform(spec.platform)
    cfg = platform.config()
    goal_array = np.asarray(goals if goals is not None else world.goals, dtype=np.float64)
    if goal_array.size == 0:
        raise InputFormatError("goal-conditioned run needs goals (argument or world file)")
    records = []
    for trial in range(spec.trials):
        start = _jittered_start(world, platform, _trial_rng(spec.seed, trial, _STREAM_START))
        policy = GoalSeeker(spec.waypoint_count, spec.step_len_m)
        res = run_episode(world, policy, platform=platform, shield=spec.shield,
                          start=start, cfg=cfg, goals=goal_array, dt=spec.dt,
                          max_distance_m=spec.max_distance_m, max_time_s=spec.max_time_s,
                          stop_on_collision=False, frame_rows=spec.frame_rows)
        records.append(_record(trial, res))
    return _aggregate("goal_conditioned", spec, records)


def run_dynamic(spec: ExperimentSpec, scenario: str | None = None) -> MetricsReport:
    """Goal navigation against one scripted agent, jittered per trial."""
    if spec.task != "dynamic_obstacle":
        raise ValueError(f"spec.task is {spec.task!r}, expected 'dynamic_obstacle'")
    source = spec.world if spec.world is not None else (
        f"dynamic_{scenario}" if scenario else None)
    base = resolve_world(source)
    if not base.agents:
        raise InputFormatError("dynamic-obstacle world defines no agents")
    platform = get_platform(spec.platform)
    cfg = platform.config()
    if base.goals.size == 0:
        raise InputFormatError("dynamic-obstacle world defines no goals")
    records = []
    for trial in range(spec.trials):
        rng = _trial_rng(spec.seed, trial, _STREAM_SCHEDULE)
        agents = tuple(perturb_agent(a,
                                     delay=rng.uniform(0.0, 1.0),
                                     speed_scale=rng.uniform(0.9, 1.1),
                                     lateral_offset=rng.uniform(-0.1, 0.1))
                       for a in base.agents)
        world = replace(base, agents=agents)
        start = _jittered_start(world, platform, _trial_rng(spec.seed, trial, _STREAM_START))
        policy = GoalSeeker(spec.waypoint_count, spec.step_len_m)
        res = run_episode(world, policy, platform=platform, shield=spec.shield,
                          start=start, cfg=cfg, goals=world.goals, dt=spec.dt,
                          max_distance_m=spec.max_distance_m, max_time_s=spec.max_time_s,
                          stop_on_collision=False, frame_rows=spec.frame_rows)
        records.append(_record(trial, res))
    return _aggregate("dynamic_obstacle", spec, records)


# ---------------------------------------------------------------------------
# Report serialization
# ---------------------------------------------------------------------------

def report_csv(report: MetricsReport) -> str:
    """Flat metric,value summary; floats keep full precision."""
    rows = [
        "metric,value",
        f"task,{report.task}",
        f"shield,{int(report.shield)}",
        f"trials,{report.trials}",
        f"arrival_rate,{report.arrival_rate!r}",
        f"distance_before_collision_mean,{report.distance_before_collision_mean!r}",
        f"distance_before_collision_std,{report.distance_before_collision_std!r}",
        f"path_length_mean,{report.path_length_mean!r}",
        f"path_length_std,{report.path_length_std!r}",
        f"completion_time_mean,{report.completion_time_mean!r}",
        f"completion_time_std,{report.completion_time_std!r}",
        f"collision_count_mean,{report.collision_count_mean!r}",
        f"collision_trials,{report.collision_trials}",
    ]
    return "\n".join(rows) + "\n"


def per_trial_csv(report: MetricsReport) -> str:
    rows = ["trial,arrived,path_length_m,distance_before_collision_m,"
            "completion_time_s,collisions"]
    for r in report.per_trial:
        rows.append(f"{r.trial},{int(r.arrived)},{r.distance_m!r},"
                    f"{r.distance_before_collision_m!r},{r.completion_time_s!r},"
                    f"{r.collisions}")
    return "\n".join(rows) + "\n"


def emit_plot_data(report: MetricsReport, path: str | Path) -> None:
    """Write the summary CSV for downstream plotting."""
    Path(path).write_text(report_csv(report))
