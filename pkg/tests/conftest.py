"""Shared helpers: independent oracles and random-input builders.

The oracles here are written as plain linear scans, deliberately not
sharing any code path with the package: the binning oracle walks points
one by one with a dict, the force oracle sums per-obstacle contributions
with scalar math and picks the argmax by exhaustive comparison.
"""

from __future__ import annotations

import math

import numpy as np

from repshield import AvoidanceConfig
from repshield.projection import bin_half_range


# ---------------------------------------------------------------------------
# Binning oracle
# ---------------------------------------------------------------------------

def oracle_obstacle_map(points: np.ndarray, cfg: AvoidanceConfig):
    """Reference per-bin nearest-obstacle reduction.

    Returns (robot_points, bin_indices) as arrays sorted by bin, using the
    same documented rules: subtract the depth offset, keep corrected
    z in (0, tau_z] and Y >= -epsilon, bin camera X over +/- the lateral
    half-range, nearest z per bin with lowest point index on ties.
    """
    half = bin_half_range(cfg)
    width = 2.0 * half / cfg.bin_count
    best: dict[int, tuple[float, int]] = {}
    for i in range(points.shape[0]):
        X, Y, Z = points[i]
        z = Z - cfg.mount.depth_offset_m
        if not (0.0 < z <= cfg.tau_z):
            continue
        if Y < -cfg.epsilon:
            continue
        if not (-half <= X <= half):
            continue
        b = min(int(math.floor((X + half) / width)), cfg.bin_count - 1)
        if b not in best or z < best[b][0]:
            best[b] = (z, i)
    bins = sorted(best)
    pts = np.array([[best[b][0] + cfg.mount.x_offset_m, -points[best[b][1], 0]]
                    for b in bins]).reshape(len(bins), 2)
    return pts, np.array(bins, dtype=np.int64)


def random_cloud(rng: np.random.Generator, n: int, cfg: AvoidanceConfig) -> np.ndarray:
    """Points straddling every filter boundary of the obstacle map."""
    half = bin_half_range(cfg)
    x = rng.uniform(-1.5 * half, 1.5 * half, size=n)
    y = rng.uniform(-0.4, 0.6, size=n)
    z = rng.uniform(0.0, 1.5 * cfg.tau_z, size=n) + cfg.mount.depth_offset_m
    pts = np.column_stack((x, y, np.maximum(z, 0.0)))
    if n >= 8:
        # Exact duplicates of a few depths within one bin exercise the
        # lowest-index tie-break.
        pts[n // 2] = pts[n // 4]
    return pts


# ---------------------------------------------------------------------------
# Force oracle
# ---------------------------------------------------------------------------

def oracle_force(waypoint, obstacles, direction_mode: str = "repel"):
    """Scalar-loop force sum for one waypoint."""
    fx_terms, fy_terms = [], []
    px, py = float(waypoint[0]), float(waypoint[1])
    for ox, oy in np.asarray(obstacles, dtype=np.float64).reshape(-1, 2):
        dx, dy = px - ox, py - oy
        d = math.hypot(dx, dy)
        mag = 1.0 / max(d, 1e-6) ** 3
        if direction_mode != "repel":
            mag = -mag
        fx_terms.append(mag * dx / d)
        fy_terms.append(mag * dy / d)
    return np.array([math.fsum(fx_terms), math.fsum(fy_terms)])


def oracle_dominant(waypoints, obstacles, direction_mode: str = "repel"):
    """Exhaustive argmax over per-waypoint force magnitudes.

    Strictly-greater comparison keeps the earliest maximum, which is the
    lowest-index tie rule.
    """
    forces = [oracle_force(wp, obstacles, direction_mode) for wp in waypoints]
    best, best_mag = 0, -1.0
    for k, f in enumerate(forces):
        mag = math.hypot(f[0], f[1])
        if mag > best_mag:
            best, best_mag = k, mag
    return np.array(forces), best
