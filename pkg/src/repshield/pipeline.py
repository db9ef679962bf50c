"""The per-frame avoidance step: observation in, velocity command out.

The step is pure: it holds no state between frames, so closed-loop behavior
is fully determined by the stream of observations and trajectories.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from .config import AvoidanceConfig, SafetyParams
from .errors import DegenerateHeadingError, InputFormatError
from .projection import (CameraMount, DepthFrame, ObstacleMap, PointCloud,
                         back_project, construct_obstacle_map)
from .repulsion import (RepulsiveResult, Trajectory, estimate_repulsive_direction,
                        rotate_trajectory)
from .safety import ControlCommand, compute_desired_heading, gate_command


@dataclass(frozen=True, eq=False)
class AvoidanceDecision:
    """Everything one avoidance step concluded, for control and logging.

    passthrough is True exactly when the obstacle map came out empty; the
    trajectory is then the input object, unmodified. repulsive is None in
    that case. degenerate marks the stop issued when the control waypoint
    sat at the origin.
    """

    adjusted_trajectory: Trajectory
    command: ControlCommand
    obstacle_map: ObstacleMap
    repulsive: RepulsiveResult | None
    passthrough: bool
    theta_des: float
    degenerate: bool = False


def avoidance_step(observation: DepthFrame | PointCloud, traj: Trajectory,
                   cfg: AvoidanceConfig) -> AvoidanceDecision:
    """Run one reactive avoidance cycle.

    A depth frame is back-projected first; a point cloud is used as-is.
    When no obstacle survives filtering the trajectory passes through
    untouched and heading control falls back to the first waypoint, which
    is where a zero-force argmax would land. Velocity gating applies in
    every case.

    Args:
        observation: depth frame or camera-frame point cloud.
        traj: candidate waypoints from the navigation policy, robot frame.
        cfg: pipeline configuration.

    Returns:
        AvoidanceDecision carrying the adjusted trajectory and the command.
    """
    if isinstance(observation, DepthFrame):
        cloud = back_project(observation)
    elif isinstance(observation, PointCloud):
        cloud = observation
    else:
        raise InputFormatError(f"unsupported observation type {type(observation).__name__}")

    omap = construct_obstacle_map(cloud, cfg)
    if omap.empty:
        adjusted = traj
        repulsive = None
        dominant = 0
        passthrough = True
    else:
        repulsive = estimate_repulsive_direction(traj, omap, cfg)
        adjusted = rotate_trajectory(traj, repulsive.theta_rot)
        dominant = repulsive.dominant_index
        passthrough = False

    try:
        theta_des = compute_desired_heading(adjusted, dominant)
    except DegenerateHeadingError:
        return AvoidanceDecision(adjusted, ControlCommand(0.0, 0.0), omap, repulsive,
                                 passthrough, theta_des=0.0, degenerate=True)
    command = gate_command(theta_des, cfg.safety)
    return AvoidanceDecision(adjusted, command, omap, repulsive, passthrough, theta_des)


# ---------------------------------------------------------------------------
# Decision log
# ---------------------------------------------------------------------------

DECISION_LOG_HEADER = "t,v,omega,theta_rep,theta_rot,theta_des,passthrough,n_obstacles"


def decision_log_row(t: float, decision: AvoidanceDecision,
                     command: ControlCommand | None = None) -> str:
    """One CSV row per avoidance step; floats keep full precision.

    Args:
        command: the command actually executed, when a stateful wrapper
            (such as the rotation latch) adjusted the decision's own.
    """
    cmd = command if command is not None else decision.command
    rep = decision.repulsive
    theta_rep = rep.theta_rep if rep is not None else 0.0
    theta_rot = rep.theta_rot if rep is not None else 0.0
    return (f"{t!r},{cmd.v!r},{cmd.omega!r},"
            f"{theta_rep!r},{theta_rot!r},{decision.theta_des!r},"
            f"{int(decision.passthrough)},{len(decision.obstacle_map)}")


# ---------------------------------------------------------------------------
# Config files: flat "key = value" text
# ---------------------------------------------------------------------------

_FLOAT_KEYS = ("tau_z", "epsilon", "theta_clip", "x_half_range_m",
               "theta_thres", "v_fwd", "v_max", "omega_max", "k_omega",
               "height_m", "x_offset_m", "fov_deg", "depth_offset_m")
_SAFETY_KEYS = ("theta_thres", "v_fwd", "v_max", "omega_max", "k_omega")
_MOUNT_KEYS = ("height_m", "x_offset_m", "fov_deg", "depth_offset_m")
CONFIG_KEYS = ("tau_z", "epsilon", "bin_count", "theta_clip", "direction_mode",
               "x_half_range_m") + _SAFETY_KEYS + _MOUNT_KEYS


def save_config(cfg: AvoidanceConfig, path: str | Path) -> None:
    """Write the flat key = value form; x_half_range_m is omitted when unset."""
    lines = [
        f"tau_z = {cfg.tau_z!r}",
        f"epsilon = {cfg.epsilon!r}",
        f"bin_count = {cfg.bin_count}",
        f"theta_clip = {cfg.theta_clip!r}",
        f"direction_mode = {cfg.direction_mode}",
    ]
    if cfg.x_half_range_m is not None:
        lines.append(f"x_half_range_m = {cfg.x_half_range_m!r}")
    s, m = cfg.safety, cfg.mount
    lines += [
        f"theta_thres = {s.theta_thres!r}",
        f"v_fwd = {s.v_fwd!r}",
        f"v_max = {s.v_max!r}",
        f"omega_max = {s.omega_max!r}",
        f"k_omega = {s.k_omega!r}",
        f"height_m = {m.height_m!r}",
        f"x_offset_m = {m.x_offset_m!r}",
        f"fov_deg = {m.fov_deg!r}",
        f"depth_offset_m = {m.depth_offset_m!r}",
    ]
    Path(path).write_text("\n".join(lines) + "\n")


def load_config(path: str | Path, base: AvoidanceConfig | None = None) -> AvoidanceConfig:
    """Parse a flat config file.

    With a base config, present keys override it; without one, every key
    except x_half_range_m must appear. Unknown keys are rejected.
    """
    values: dict[str, object] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputFormatError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in CONFIG_KEYS:
            raise InputFormatError(f"{path}:{lineno}: unknown key {key!r}")
        if key in values:
            raise InputFormatError(f"{path}:{lineno}: duplicate key {key!r}")
        try:
            if key == "bin_count":
                values[key] = int(value)
            elif key == "direction_mode":
                values[key] = value
            else:
                values[key] = float(value)
        except ValueError as exc:
            raise InputFormatError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc

    if base is None:
        missing = [k for k in CONFIG_KEYS if k not in values and k != "x_half_range_m"]
        if missing:
            raise InputFormatError(f"{path}: missing keys {missing}")

    def pick(key: str, fallback):
        return values.get(key, fallback)

    base_mount = base.mount if base else CameraMount(height_m=1.0)
    base_safety = base.safety if base else SafetyParams()
    mount = CameraMount(
        height_m=pick("height_m", base_mount.height_m),
        x_offset_m=pick("x_offset_m", base_mount.x_offset_m),
        fov_deg=pick("fov_deg", base_mount.fov_deg),
        depth_offset_m=pick("depth_offset_m", base_mount.depth_offset_m),
    )
    safety = SafetyParams(
        theta_thres=pick("theta_thres", base_safety.theta_thres),
        v_fwd=pick("v_fwd", base_safety.v_fwd),
        v_max=pick("v_max", base_safety.v_max),
        omega_max=pick("omega_max", base_safety.omega_max),
        k_omega=pick("k_omega", base_safety.k_omega),
    )
    try:
        return AvoidanceConfig(
            mount=mount,
            tau_z=pick("tau_z", base.tau_z if base else 1.0),
            epsilon=pick("epsilon", base.epsilon if base else -0.05),
            bin_count=pick("bin_count", base.bin_count if base else 32),
            theta_clip=pick("theta_clip", base.theta_clip if base else math.pi / 4),
            direction_mode=pick("direction_mode", base.direction_mode if base else "repel"),
            safety=safety,
            x_half_range_m=pick("x_half_range_m", base.x_half_range_m if base else None),
        )
    except ValueError as exc:
        raise InputFormatError(f"{path}: {exc}") from exc
