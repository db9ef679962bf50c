"""Top-down obstacle extraction from metric depth images.

Conventions used throughout:

* Camera frame: X right, Y down, Z forward along the optical axis (meters).
* Robot frame: x forward, y left, origin at the robot center (meters).
* A depth value of exactly 0 marks an invalid pixel and produces no point.

The obstacle map summarizes the scene as at most one point per angular bin,
keeping the nearest return in each bin after range and height filtering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np

from .errors import InputFormatError

if TYPE_CHECKING:
    from .config import AvoidanceConfig


@dataclass(frozen=True)
class CameraIntrinsics:
    """Pinhole intrinsics; focal lengths and principal point in pixels."""

    fx: float
    fy: float
    cx: float
    cy: float
    width: int
    height: int

    def __post_init__(self):
        if self.fx <= 0 or self.fy <= 0:
            raise ValueError(f"focal lengths must be positive, got fx={self.fx} fy={self.fy}")
        if self.width < 1 or self.height < 1:
            raise ValueError(f"image size must be at least 1x1, got {self.width}x{self.height}")
        if not (0 <= self.cx < self.width) or not (0 <= self.cy < self.height):
            raise ValueError(
                f"principal point ({self.cx}, {self.cy}) outside image {self.width}x{self.height}"
            )


def intrinsics_for_fov(width: int, height: int, fov_deg: float) -> CameraIntrinsics:
    """Square-pixel intrinsics whose outermost pixel centers span ``fov_deg``.

    The principal point sits at the grid center ((width-1)/2, (height-1)/2),
    and fx is chosen so the leftmost and rightmost pixel centers subtend
    exactly fov_deg/2 on each side of the optical axis.
    """
    half = math.radians(fov_deg) / 2.0
    f = ((width - 1) / 2.0) / math.tan(half)
    return CameraIntrinsics(fx=f, fy=f, cx=(width - 1) / 2.0, cy=(height - 1) / 2.0,
                            width=width, height=height)


@dataclass(frozen=True)
class CameraMount:
    """Where the depth camera sits on the robot and how it reports range.

    depth_offset_m is a per-sensor calibration bias: it is subtracted from
    raw Z before any range filtering. x_offset_m is the camera position
    ahead (+) or behind (-) the robot center along the forward axis.
    """

    height_m: float
    x_offset_m: float = 0.0
    fov_deg: float = 90.0
    depth_offset_m: float = 0.0

    def __post_init__(self):
        if self.height_m <= 0:
            raise ValueError(f"camera height must be positive, got {self.height_m}")
        if not (0 < self.fov_deg <= 180):
            raise ValueError(f"fov_deg must be in (0, 180], got {self.fov_deg}")


@dataclass(frozen=True, eq=False)
class DepthFrame:
    """A single metric depth image plus the geometry needed to interpret it."""

    depths: np.ndarray
    intrinsics: CameraIntrinsics
    mount: CameraMount

    def __post_init__(self):
        depths = np.asarray(self.depths, dtype=np.float64)
        object.__setattr__(self, "depths", depths)
        expected = (self.intrinsics.height, self.intrinsics.width)
        if depths.shape != expected:
            raise InputFormatError(
                f"depth grid shape {depths.shape} does not match intrinsics {expected}"
            )
        if not np.all(np.isfinite(depths)) or np.any(depths < 0):
            raise InputFormatError("depth values must be finite and non-negative")


@dataclass(frozen=True, eq=False)
class PointCloud:
    """Points in the camera frame, shape (N, 3), columns X, Y, Z."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.size == 0:
            pts = pts.reshape(0, 3)
        object.__setattr__(self, "points", pts)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise InputFormatError(f"point cloud must have shape (N, 3), got {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise InputFormatError("point cloud values must be finite")

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True, eq=False)
class ObstacleMap:
    """Per-bin nearest obstacle points in the robot frame (x forward, y left).

    ``points`` has shape (B, 2) with B <= bin_count; ``bins`` holds the
    strictly increasing bin index of each entry. ``sensing_range`` records
    the range cutoff the map was built with.
    """

    points: np.ndarray
    bins: np.ndarray
    bin_count: int
    sensing_range: float

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.size == 0:
            pts = pts.reshape(0, 2)
        bins = np.asarray(self.bins, dtype=np.int64)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "bins", bins)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError(f"obstacle points must have shape (B, 2), got {pts.shape}")
        if bins.shape != (pts.shape[0],):
            raise ValueError("bins must have one index per obstacle point")
        if pts.shape[0] > self.bin_count:
            raise ValueError("more obstacle entries than bins")

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def empty(self) -> bool:
        return self.points.shape[0] == 0


def back_project(frame: DepthFrame) -> PointCloud:
    """Lift every valid depth pixel to a 3D point in the camera frame.

    Uses the pinhole model: X = (u - cx) * d / fx, Y = (v - cy) * d / fy,
    Z = d. Points come out in row-major pixel order, so ties elsewhere can
    be broken by lowest pixel index.
    """
    intr = frame.intrinsics
    d = frame.depths
    v, u = np.nonzero(d > 0)
    depth = d[v, u]
    x = (u - intr.cx) * depth / intr.fx
    y = (v - intr.cy) * depth / intr.fy
    return PointCloud(np.column_stack((x, y, depth)))


def bin_half_range(cfg: "AvoidanceConfig") -> float:
    """Lateral half-extent of the binning window, in camera X meters."""
    if cfg.x_half_range_m is not None:
        return cfg.x_half_range_m
    return math.tan(math.radians(cfg.mount.fov_deg) / 2.0) * cfg.tau_z


def construct_obstacle_map(cloud: PointCloud, cfg: "AvoidanceConfig") -> ObstacleMap:
    """Reduce a camera-frame cloud to per-bin nearest ground obstacles.

    Steps, in order:

    1. Subtract the mount's depth offset from Z.
    2. Keep points with corrected Z in (0, tau_z] and Y >= -epsilon
       (Y points down, so the Y test drops ceiling / overhead returns).
    3. Partition camera X into ``bin_count`` uniform bins across the lateral
       window and keep the minimum-Z point per bin; equal Z resolves to the
       lowest point index.
    4. Transform survivors to the robot frame:
       x = Z + x_offset_m, y = -X.

    Args:
        cloud: back-projected camera-frame points.
        cfg: pipeline configuration supplying mount, tau_z, epsilon and
            bin geometry.

    Returns:
        ObstacleMap with entries ordered by bin index.
    """
    pts = cloud.points
    m = cfg.mount
    tau = cfg.tau_z
    half = bin_half_range(cfg)
    bin_count = cfg.bin_count

    empty = ObstacleMap(np.empty((0, 2)), np.empty(0, dtype=np.int64), bin_count, tau)
    if pts.shape[0] == 0:
        return empty

    z = pts[:, 2] - m.depth_offset_m
    keep = (z > 0) & (z <= tau) & (pts[:, 1] >= -cfg.epsilon)
    x = pts[keep, 0]
    z = z[keep]
    inside = (x >= -half) & (x <= half)
    x = x[inside]
    z = z[inside]
    if x.size == 0:
        return empty

    width = 2.0 * half / bin_count
    bins = np.minimum((np.floor((x + half) / width)).astype(np.int64), bin_count - 1)

    # Sort by (bin, z, original index); the first row of each bin group is
    # then exactly the linear-scan winner including the index tie-break.
    idx = np.arange(x.size)
    order = np.lexsort((idx, z, bins))
    sorted_bins = bins[order]
    first = np.concatenate(([0], np.nonzero(np.diff(sorted_bins))[0] + 1))
    sel = order[first]

    robot_x = z[sel] + m.x_offset_m
    robot_y = -x[sel]
    return ObstacleMap(np.column_stack((robot_x, robot_y)), sorted_bins[first],
                       bin_count, tau)


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------

def save_depth_frame(frame: DepthFrame, path: str | Path) -> None:
    """Write a DF1 file: header line, then one row of depths per image row."""
    intr = frame.intrinsics
    header = " ".join(["DF1", str(intr.width), str(intr.height),
                       repr(float(intr.fx)), repr(float(intr.fy)),
                       repr(float(intr.cx)), repr(float(intr.cy))])
    lines = [header]
    for row in frame.depths:
        lines.append(" ".join(repr(float(val)) for val in row))
    Path(path).write_text("\n".join(lines) + "\n")


def load_depth_frame(path: str | Path, mount: CameraMount) -> DepthFrame:
    """Read a DF1 file; the mount is supplied separately by configuration."""
    text = Path(path).read_text()
    tokens = text.split()
    if not tokens or tokens[0] != "DF1":
        raise InputFormatError(f"{path}: expected DF1 header")
    if len(tokens) < 7:
        raise InputFormatError(f"{path}: truncated DF1 header")
    try:
        width, height = int(tokens[1]), int(tokens[2])
        fx, fy, cx, cy = (float(t) for t in tokens[3:7])
        depths = np.array([float(t) for t in tokens[7:]], dtype=np.float64)
    except ValueError as exc:
        raise InputFormatError(f"{path}: malformed DF1 value: {exc}") from exc
    if depths.size != width * height:
        raise InputFormatError(
            f"{path}: expected {width * height} depth values, found {depths.size}"
        )
    try:
        intr = CameraIntrinsics(fx, fy, cx, cy, width, height)
        return DepthFrame(depths.reshape(height, width), intr, mount)
    except ValueError as exc:
        raise InputFormatError(f"{path}: {exc}") from exc


def save_point_cloud(cloud: PointCloud, path: str | Path) -> None:
    """Write a PC1 file: count header, then one ``x y z`` line per point."""
    lines = [f"PC1 {len(cloud)}"]
    for x, y, z in cloud.points:
        lines.append(f"{float(x)!r} {float(y)!r} {float(z)!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_point_cloud(path: str | Path) -> PointCloud:
    text = Path(path).read_text()
    tokens = text.split()
    if not tokens or tokens[0] != "PC1":
        raise InputFormatError(f"{path}: expected PC1 header")
    try:
        count = int(tokens[1])
        values = np.array([float(t) for t in tokens[2:]], dtype=np.float64)
    except (IndexError, ValueError) as exc:
        raise InputFormatError(f"{path}: malformed PC1 content: {exc}") from exc
    if values.size != count * 3:
        raise InputFormatError(f"{path}: expected {count} points, found {values.size / 3}")
    try:
        return PointCloud(values.reshape(count, 3))
    except ValueError as exc:
        raise InputFormatError(f"{path}: {exc}") from exc
