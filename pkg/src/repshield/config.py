"""Configuration records for the avoidance pipeline."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .projection import CameraMount

DIRECTION_MODES = ("repel", "attract")


@dataclass(frozen=True)
class SafetyParams:
    """Velocity limits and the forward/rotate gating threshold.

    theta_thres is the half-angle of the safe forward cone: when the desired
    heading magnitude exceeds it, forward motion is suppressed and the robot
    rotates in place. k_omega is the proportional gain mapping heading error
    to angular velocity.
    """

    theta_thres: float = math.pi / 6
    v_fwd: float = 0.2
    v_max: float = 0.2
    omega_max: float = 0.8
    k_omega: float = 2.0

    def __post_init__(self):
        if not (0 < self.theta_thres < math.pi):
            raise ValueError(f"theta_thres must be in (0, pi), got {self.theta_thres}")
        if self.v_max <= 0 or not (0 < self.v_fwd <= self.v_max):
            raise ValueError(
                f"need 0 < v_fwd <= v_max, got v_fwd={self.v_fwd} v_max={self.v_max}"
            )
        if self.omega_max <= 0:
            raise ValueError(f"omega_max must be positive, got {self.omega_max}")
        if self.k_omega <= 0:
            raise ValueError(f"k_omega must be positive, got {self.k_omega}")


@dataclass(frozen=True)
class AvoidanceConfig:
    """Everything the per-frame avoidance step needs besides its inputs.

    direction_mode selects the sign convention of the obstacle force:
    ``repel`` pushes waypoints away from obstacles; ``attract`` keeps the
    raw negative-sign convention of classical potential fields, in which
    the summed vector points from the waypoint toward the obstacles.

    x_half_range_m optionally pins the lateral binning window; when None it
    is derived as tan(fov/2) * tau_z.
    """

    mount: CameraMount
    tau_z: float = 1.0
    epsilon: float = -0.05
    bin_count: int = 32
    theta_clip: float = math.pi / 4
    direction_mode: str = "repel"
    safety: SafetyParams = field(default_factory=SafetyParams)
    x_half_range_m: float | None = None

    def __post_init__(self):
        if self.tau_z <= 0:
            raise ValueError(f"tau_z must be positive, got {self.tau_z}")
        if self.bin_count < 1:
            raise ValueError(f"bin_count must be at least 1, got {self.bin_count}")
        if not (0 < self.theta_clip <= math.pi):
            raise ValueError(f"theta_clip must be in (0, pi], got {self.theta_clip}")
        if self.direction_mode not in DIRECTION_MODES:
            raise ValueError(
                f"direction_mode must be one of {DIRECTION_MODES}, got {self.direction_mode!r}"
            )
        if self.x_half_range_m is not None and self.x_half_range_m <= 0:
            raise ValueError(f"x_half_range_m must be positive, got {self.x_half_range_m}")

    @property
    def theta_thres(self) -> float:
        """Gating threshold; stored once, on the safety parameters."""
        return self.safety.theta_thres

    def with_safety(self, **changes) -> "AvoidanceConfig":
        return replace(self, safety=replace(self.safety, **changes))
