"""Repulsive-force estimation and trajectory rotation.

Obstacles exert an inverse-cube force on every candidate waypoint. The
waypoint with the strongest response is the dominant one; the direction of
its force, clipped to a configurable bound, becomes a rigid rotation applied
to the whole trajectory about the robot center.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import AvoidanceConfig
from .errors import InputFormatError, SingularityError
from .projection import ObstacleMap

# Distances below this are clamped before cubing so a near-contact point
# produces a large but finite force.
MIN_OBSTACLE_DISTANCE_M = 1e-6


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Ordered waypoints in the robot frame, shape (K, 2), K >= 1."""

    waypoints: np.ndarray

    def __post_init__(self):
        wps = np.asarray(self.waypoints, dtype=np.float64)
        object.__setattr__(self, "waypoints", wps)
        if wps.ndim != 2 or wps.shape[1] != 2 or wps.shape[0] < 1:
            raise ValueError(f"waypoints must have shape (K, 2) with K >= 1, got {wps.shape}")
        if not np.all(np.isfinite(wps)):
            raise ValueError("waypoints must be finite")

    def __len__(self) -> int:
        return self.waypoints.shape[0]


@dataclass(frozen=True, eq=False)
class RepulsiveResult:
    """Per-waypoint forces plus the rotation they imply.

    theta_rep is the force direction at the dominant waypoint; theta_rot is
    that angle clipped to the configured bound. When every force is exactly
    zero both angles are 0 by convention and dominant_index is 0.
    """

    forces: np.ndarray
    dominant_index: int
    theta_rep: float
    theta_rot: float


def _obstacle_points(obstacles: ObstacleMap | np.ndarray) -> np.ndarray:
    if isinstance(obstacles, ObstacleMap):
        return obstacles.points
    pts = np.asarray(obstacles, dtype=np.float64)
    if pts.size == 0:
        return pts.reshape(0, 2)
    return pts


def repulsive_force(waypoint: np.ndarray, obstacles: ObstacleMap | np.ndarray,
                    direction_mode: str = "repel") -> np.ndarray:
    """Summed obstacle force on one waypoint.

    Each obstacle at distance d contributes magnitude 1/d^3 along the
    waypoint-obstacle axis; ``repel`` points away from the obstacle,
    ``attract`` toward it. Components are accumulated with math.fsum so the
    result does not depend on summation blocking.

    Raises:
        SingularityError: the waypoint coincides exactly with an obstacle.
    """
    pts = _obstacle_points(obstacles)
    if pts.shape[0] == 0:
        return np.zeros(2)
    p = np.asarray(waypoint, dtype=np.float64)
    diffs = p - pts
    dists = np.hypot(diffs[:, 0], diffs[:, 1])
    zero = np.nonzero(dists == 0.0)[0]
    if zero.size:
        raise SingularityError(int(zero[0]))
    units = diffs / dists[:, None]
    clamped = np.maximum(dists, MIN_OBSTACLE_DISTANCE_M)
    scale = -1.0 / clamped**3
    if direction_mode == "repel":
        scale = -scale
    contrib = scale[:, None] * units
    return np.array([math.fsum(contrib[:, 0]), math.fsum(contrib[:, 1])])


def estimate_repulsive_direction(traj: Trajectory, obstacles: ObstacleMap | np.ndarray,
                                 cfg: AvoidanceConfig) -> RepulsiveResult:
    """Find the dominant waypoint and the clipped rotation it calls for.

    The dominant waypoint maximizes force magnitude; ties resolve to the
    smallest index, which also covers the all-zero case of an empty
    obstacle set.
    """
    forces = np.array([repulsive_force(wp, obstacles, cfg.direction_mode)
                       for wp in traj.waypoints])
    magnitudes = np.hypot(forces[:, 0], forces[:, 1])
    k = int(np.argmax(magnitudes))
    fx, fy = forces[k]
    if fx == 0.0 and fy == 0.0:
        theta_rep = 0.0
    else:
        theta_rep = math.atan2(fy, fx)
    theta_rot = float(np.clip(theta_rep, -cfg.theta_clip, cfg.theta_clip))
    return RepulsiveResult(forces=forces, dominant_index=k,
                           theta_rep=theta_rep, theta_rot=theta_rot)


def rotate_trajectory(traj: Trajectory, theta_rot: float) -> Trajectory:
    """Rotate every waypoint about the origin by theta_rot (CCW positive)."""
    if not (-math.pi <= theta_rot <= math.pi):
        raise ValueError(f"|theta_rot| must not exceed pi, got {theta_rot}")
    c, s = math.cos(theta_rot), math.sin(theta_rot)
    x, y = traj.waypoints[:, 0], traj.waypoints[:, 1]
    return Trajectory(np.column_stack((c * x - s * y, s * x + c * y)))


def save_trajectory(traj: Trajectory, path: str | Path) -> None:
    """Write a TJ1 file: count header, then one ``x y`` line per waypoint."""
    lines = [f"TJ1 {len(traj)}"]
    for x, y in traj.waypoints:
        lines.append(f"{float(x)!r} {float(y)!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_trajectory(path: str | Path) -> Trajectory:
    text = Path(path).read_text()
    tokens = text.split()
    if not tokens or tokens[0] != "TJ1":
        raise InputFormatError(f"{path}: expected TJ1 header")
    try:
        count = int(tokens[1])
        values = np.array([float(t) for t in tokens[2:]], dtype=np.float64)
    except (IndexError, ValueError) as exc:
        raise InputFormatError(f"{path}: malformed TJ1 content: {exc}") from exc
    if count < 1 or values.size != count * 2:
        raise InputFormatError(f"{path}: expected {count} waypoints, found {values.size / 2}")
    try:
        return Trajectory(values.reshape(count, 2))
    except ValueError as exc:
        raise InputFormatError(f"{path}: {exc}") from exc
