"""Depth-camera simulation by per-column raycasting.

The world is planar and obstacles are treated as vertically extruded, so
one ray per pixel column at obstacle height fully determines the frame:
every row of a column carries the column's depth. Depth is the Z component
of the hit point in the camera frame (planar depth, not ray range), which
is what the pinhole back-projection expects.
"""

from __future__ import annotations

import numpy as np

from ..projection import CameraIntrinsics, CameraMount, DepthFrame
from .kinematics import RobotState
from .world import WorldModel

FAR_LIMIT_M = 5.0
_T_EPS = 1e-9


def column_depths(world: WorldModel, robot: RobotState, intrinsics: CameraIntrinsics,
                  mount: CameraMount, t: float = 0.0, far: float = FAR_LIMIT_M,
                  jitter: float = 0.0, rng: np.random.Generator | None = None) -> np.ndarray:
    """Planar depth per pixel column, 0 where nothing is hit within ``far``.

    Args:
        t: simulation time, used to place scripted agents.
        jitter: optional uniform noise half-amplitude in meters, applied to
            hit columns only; requires ``rng`` when non-zero.
    """
    heading = robot.heading
    fwd = np.array([np.cos(heading), np.sin(heading)])
    right = np.array([np.sin(heading), -np.cos(heading)])
    origin = np.array([robot.x, robot.y]) + mount.x_offset_m * fwd

    u = np.arange(intrinsics.width)
    # Pinhole column geometry: a hit at camera (X, Z) lands on column
    # u = cx + fx * X / Z, so column u looks along camera X/Z slope
    # (u - cx) / fx. Positive slope is to the right of the axis.
    slope = (u - intrinsics.cx) / intrinsics.fx
    norm = np.hypot(slope, 1.0)
    dirs = (fwd[None, :] + slope[:, None] * right[None, :]) / norm[:, None]
    cos_axis = 1.0 / norm  # dot(unit ray, forward)

    t_best = np.full(intrinsics.width, np.inf)

    segs = world.static_segments
    if segs.shape[0]:
        a = segs[:, 0]
        e = segs[:, 1] - segs[:, 0]
        ao = a - origin
        denom = dirs[:, 0][:, None] * e[:, 1] - dirs[:, 1][:, None] * e[:, 0]
        t_num = ao[:, 0] * e[:, 1] - ao[:, 1] * e[:, 0]
        s_num = ao[None, :, 0] * dirs[:, 1][:, None] - ao[None, :, 1] * dirs[:, 0][:, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            t_hit = t_num[None, :] / denom
            s_hit = s_num / denom
        ok = (np.abs(denom) > 1e-15) & (t_hit > _T_EPS) & (s_hit >= 0.0) & (s_hit <= 1.0)
        t_hit = np.where(ok, t_hit, np.inf)
        t_best = np.minimum(t_best, t_hit.min(axis=1))

    centers = [c.center for c in world.circles] + \
              [ag.position(t) for ag in world.agents]
    radii = [c.radius for c in world.circles] + [ag.radius for ag in world.agents]
    if centers:
        oc = np.asarray(centers) - origin
        r2 = np.asarray(radii) ** 2
        b = dirs @ oc.T
        c_term = np.einsum("ij,ij->i", oc, oc) - r2
        disc = b * b - c_term[None, :]
        sqrt_disc = np.sqrt(np.maximum(disc, 0.0))
        near = b - sqrt_disc
        far_root = b + sqrt_disc
        t_hit = np.where(near > _T_EPS, near, np.where(far_root > _T_EPS, far_root, np.inf))
        t_hit = np.where(disc >= 0.0, t_hit, np.inf)
        t_best = np.minimum(t_best, t_hit.min(axis=1))

    depth = t_best * cos_axis
    depth = np.where(np.isfinite(depth) & (depth <= far), depth, 0.0)
    # The mount's depth_offset_m models the estimator's systematic bias, and
    # the avoidance pipeline subtracts it. Emitting true + bias here means
    # that correction lands back on the true depth.
    if mount.depth_offset_m != 0.0:
        depth = np.where(depth > 0.0,
                         np.maximum(depth + mount.depth_offset_m, _T_EPS), 0.0)
    if jitter > 0.0:
        if rng is None:
            raise ValueError("depth jitter requires an rng")
        noise = rng.uniform(-jitter, jitter, size=depth.shape)
        depth = np.where(depth > 0.0, np.maximum(depth + noise, _T_EPS), 0.0)
    return depth


def raycast_depth(world: WorldModel, robot: RobotState, intrinsics: CameraIntrinsics,
                  mount: CameraMount, t: float = 0.0, far: float = FAR_LIMIT_M,
                  jitter: float = 0.0, rng: np.random.Generator | None = None) -> DepthFrame:
    """Render a full frame by tiling the column depths across all rows."""
    cols = column_depths(world, robot, intrinsics, mount, t=t, far=far,
                         jitter=jitter, rng=rng)
    grid = np.tile(cols, (intrinsics.height, 1))
    return DepthFrame(grid, intrinsics, mount)
