"""Trial containers: time-aligned joint kinematics and vertical ground
reaction forces for one user and walking condition.

Angles are stored in degrees, forces in newtons. Arrays are frozen after
construction; a Trial is safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataIntegrityError, InvalidArgumentError
from ..nn.model import CHANNEL_NAMES, N_CHANNELS

CONDITIONS = ("transparent", "rendering")

__all__ = ["CONDITIONS", "CHANNEL_NAMES", "KinematicSample", "GrfSample", "AlphaSeries", "Trial"]


def _frozen(arr, dtype=np.float64) -> np.ndarray:
    out = np.array(arr, dtype=dtype)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class KinematicSample:
    """Joint angles at one instant: [l_hip, r_hip, l_knee, r_knee, backpack]."""

    t: float
    theta: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "theta", _frozen(self.theta))
        if self.theta.shape != (N_CHANNELS,):
            raise DataIntegrityError(f"theta must have shape ({N_CHANNELS},)")
        if not np.all(np.isfinite(self.theta)) or not np.isfinite(self.t):
            raise DataIntegrityError("kinematic sample contains non-finite values")
        if np.any(np.abs(self.theta) > 180.0):
            raise DataIntegrityError("joint angle magnitude exceeds 180 degrees")


@dataclass(frozen=True)
class GrfSample:
    """Vertical ground reaction force under each foot at one instant."""

    t: float
    f_left_y: float
    f_right_y: float

    def __post_init__(self):
        if not (np.isfinite(self.t) and np.isfinite(self.f_left_y) and np.isfinite(self.f_right_y)):
            raise DataIntegrityError("grf sample contains non-finite values")
        if self.f_left_y < 0.0 or self.f_right_y < 0.0:
            raise DataIntegrityError("vertical forces must be non-negative")


@dataclass(frozen=True)
class AlphaSeries:
    """Weight-distribution series; 0 = left single stance, 1 = right."""

    t: np.ndarray
    alpha: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "t", _frozen(self.t))
        object.__setattr__(self, "alpha", _frozen(self.alpha))
        if self.t.shape != self.alpha.shape or self.t.ndim != 1:
            raise InvalidArgumentError("t and alpha must be equal-length 1-D arrays")
        if not np.all(np.isfinite(self.alpha)):
            raise DataIntegrityError("alpha series contains non-finite values")
        if np.any(self.alpha < 0.0) or np.any(self.alpha > 1.0):
            raise DataIntegrityError("alpha values must lie in [0, 1]")

    def __len__(self) -> int:
        return self.t.shape[0]


RATE_TOLERANCE = 0.01  # allowed relative deviation of sample spacing


@dataclass(frozen=True)
class Trial:
    """One recording: kinematics (N, 5) and vertical GRFs (N, 2) on a shared
    uniform time base. ``grf[:, 0]`` is the left foot, ``grf[:, 1]`` the right.
    """

    user_id: str
    condition: str
    t: np.ndarray
    theta: np.ndarray
    grf: np.ndarray
    sample_rate_hz: float

    def __post_init__(self):
        object.__setattr__(self, "t", _frozen(self.t))
        object.__setattr__(self, "theta", _frozen(self.theta))
        object.__setattr__(self, "grf", _frozen(self.grf))
        if self.condition not in CONDITIONS:
            raise InvalidArgumentError(f"condition must be one of {CONDITIONS}, got {self.condition!r}")
        n = self.t.shape[0]
        if self.t.ndim != 1 or n < 2:
            raise DataIntegrityError("trial needs at least two samples")
        if self.theta.shape != (n, N_CHANNELS):
            raise DataIntegrityError(f"theta must have shape ({n}, {N_CHANNELS})")
        if self.grf.shape != (n, 2):
            raise DataIntegrityError(f"grf must have shape ({n}, 2)")
        for name, arr in (("t", self.t), ("theta", self.theta), ("grf", self.grf)):
            if not np.all(np.isfinite(arr)):
                raise DataIntegrityError(f"trial {name} contains non-finite values")
        if np.any(np.abs(self.theta) > 180.0):
            raise DataIntegrityError("joint angle magnitude exceeds 180 degrees")
        if np.any(self.grf < 0.0):
            raise DataIntegrityError("vertical forces must be non-negative")
        dt = np.diff(self.t)
        if np.any(dt <= 0.0):
            raise DataIntegrityError("timestamps must be strictly increasing")
        nominal = 1.0 / self.sample_rate_hz
        if np.any(np.abs(dt - nominal) > RATE_TOLERANCE * nominal):
            raise DataIntegrityError(
                f"sample spacing deviates more than {RATE_TOLERANCE:.0%} from 1/{self.sample_rate_hz} s"
            )

    def __len__(self) -> int:
        return self.t.shape[0]

    @property
    def duration_s(self) -> float:
        return float(self.t[-1] - self.t[0])

    def kinematic_sample(self, i: int) -> KinematicSample:
        return KinematicSample(t=float(self.t[i]), theta=self.theta[i])

    def grf_sample(self, i: int) -> GrfSample:
        return GrfSample(t=float(self.t[i]), f_left_y=float(self.grf[i, 0]),
                         f_right_y=float(self.grf[i, 1]))
