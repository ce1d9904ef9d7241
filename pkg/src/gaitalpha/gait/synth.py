"""Parametric treadmill-gait generator.

Produces trials whose vertical GRFs and joint kinematics are mutually
consistent functions of the gait-cycle phase, so the weight distribution
derived from the forces is learnable from the kinematics alone.

Cycle convention (phase in [0, 1), left heel strike at 0):

    [0, d]          weight transfer right -> left (alpha 1 -> 0)
    [d, s - d]      left single stance (alpha 0)
    [s - d, s]      weight transfer left -> right (alpha 0 -> 1)
    [s, 1]          right single stance (alpha 1)

with s = stance_fraction (left-leg stance incl. both transfers) and
d = double_stance_fraction (duration of one transfer). Transfers use a
smoothstep ramp; plateaus are exactly 0 / 1. Right-leg kinematics mirror
the left at half a cycle offset. Total vertical load always equals the
configured body+exoskeleton weight (plus optional load-proportional noise).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ..errors import ConfigError, InvalidArgumentError
from .trial import Trial

__all__ = ["GaitSynthParams", "alpha_profile", "synth_gait",
           "sample_user_params", "condition_tweak"]


@dataclass(frozen=True)
class GaitSynthParams:
    cadence_spm: float = 40.0          # steps per minute; one cycle = 2 steps
    stance_fraction: float = 0.6
    double_stance_fraction: float = 0.1
    total_weight_n: float = 750.0      # body + exoskeleton, newtons
    sample_rate_hz: float = 333.0
    hip_offset_deg: float = 18.0
    hip_amp_deg: float = 20.0
    knee_offset_deg: float = -30.0
    knee_amp_deg: float = 24.0
    backpack_offset_deg: float = 4.0
    backpack_amp_deg: float = 1.5
    kin_noise_deg: tuple = (0.3, 0.3, 0.3, 0.3, 0.15)
    grf_noise_rel: float = 0.02
    phase0: float = 0.0
    hip_phase: float = -0.05           # cycle fraction of peak hip flexion
    knee_phase: float = 0.78           # cycle fraction of peak swing flexion
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.double_stance_fraction < self.stance_fraction < 1.0:
            raise ConfigError("need 0 < double_stance_fraction < stance_fraction < 1")
        if self.stance_fraction - 2.0 * self.double_stance_fraction <= 0.0:
            raise ConfigError("stance_fraction must exceed two weight transfers")
        if self.cadence_spm <= 0.0 or self.sample_rate_hz <= 0.0:
            raise ConfigError("cadence and sample rate must be positive")
        if self.total_weight_n <= 0.0:
            raise ConfigError("total weight must be positive")
        if len(self.kin_noise_deg) != 5 or any(v < 0.0 for v in self.kin_noise_deg):
            raise ConfigError("kin_noise_deg must be five non-negative values")
        if self.grf_noise_rel < 0.0:
            raise ConfigError("grf_noise_rel must be >= 0")
        for name in ("hip", "knee", "backpack"):
            off = getattr(self, f"{name}_offset_deg")
            amp = getattr(self, f"{name}_amp_deg")
            if abs(off) + 2.0 * abs(amp) > 175.0:
                raise ConfigError(f"{name} trajectory can exceed the 180 degree bound")

    @property
    def cycle_duration_s(self) -> float:
        return 120.0 / self.cadence_spm

    @property
    def single_stance_fraction(self) -> float:
        """Fraction of the cycle with the full load on one foot."""
        return 1.0 - 2.0 * self.double_stance_fraction


def _smoothstep(u: np.ndarray) -> np.ndarray:
    u = np.clip(u, 0.0, 1.0)
    return u * u * (3.0 - 2.0 * u)


def alpha_profile(phase: np.ndarray, stance_fraction: float,
                  double_stance_fraction: float) -> np.ndarray:
    """Noise-free weight distribution as a function of cycle phase."""
    s, d = stance_fraction, double_stance_fraction
    phase = np.mod(np.asarray(phase, dtype=np.float64), 1.0)
    alpha = np.ones_like(phase)
    alpha = np.where(phase < d, 1.0 - _smoothstep(phase / d), alpha)
    mid = (phase >= d) & (phase < s - d)
    alpha = np.where(mid, 0.0, alpha)
    ramp = (phase >= s - d) & (phase < s)
    alpha = np.where(ramp, _smoothstep((phase - (s - d)) / d), alpha)
    return alpha


def _leg_angles(phase: np.ndarray, p: GaitSynthParams):
    """Hip and knee trajectories for one leg as functions of its own phase."""
    two_pi = 2.0 * np.pi
    hip = p.hip_offset_deg + p.hip_amp_deg * (
        np.cos(two_pi * (phase - p.hip_phase))
        + 0.25 * np.cos(2.0 * two_pi * (phase - p.hip_phase) - 0.9)
    )
    # Knee: small stance-phase flexion plus a strong swing bump (periodic,
    # smooth, and deliberately asymmetric in phase).
    bump = np.exp(6.0 * (np.cos(two_pi * (phase - p.knee_phase)) - 1.0))
    knee = p.knee_offset_deg - p.knee_amp_deg * (
        0.12 * np.cos(two_pi * (phase - 0.12)) + 0.88 * bump
    )
    return hip, knee


def synth_gait(params: GaitSynthParams, duration_s: float,
               user_id: str = "u0", condition: str = "transparent") -> Trial:
    """Generate one trial of ``duration_s`` seconds; deterministic per seed."""
    if duration_s < 5.0:
        raise InvalidArgumentError("duration must be at least 5 s")
    fs = params.sample_rate_hz
    n = int(round(duration_s * fs))
    k = np.arange(n, dtype=np.float64)
    t = k / fs
    # Phase advance per sample, computed from the sample index so that
    # integer-period configurations repeat exactly.
    phase = np.mod(params.phase0 + k * (params.cadence_spm / (120.0 * fs)), 1.0)

    hip_l, knee_l = _leg_angles(phase, params)
    hip_r, knee_r = _leg_angles(phase + 0.5, params)
    backpack = params.backpack_offset_deg + params.backpack_amp_deg * np.cos(
        4.0 * np.pi * (phase - 0.03)
    )
    theta = np.stack([hip_l, hip_r, knee_l, knee_r, backpack], axis=1)

    alpha = alpha_profile(phase, params.stance_fraction, params.double_stance_fraction)
    f_right = params.total_weight_n * alpha
    f_left = params.total_weight_n * (1.0 - alpha)

    rng = np.random.default_rng(params.seed)
    noise = np.asarray(params.kin_noise_deg, dtype=np.float64)
    if np.any(noise > 0.0):
        theta = theta + noise * rng.standard_normal((n, 5))
    if params.grf_noise_rel > 0.0:
        # Load-proportional sensor noise: an unloaded foot reads exactly zero.
        eps = params.grf_noise_rel * rng.standard_normal((n, 2))
        f_left = np.maximum(f_left * (1.0 + eps[:, 0]), 0.0)
        f_right = np.maximum(f_right * (1.0 + eps[:, 1]), 0.0)

    grf = np.stack([f_left, f_right], axis=1)
    return Trial(user_id=user_id, condition=condition, t=t, theta=theta,
                 grf=grf, sample_rate_hz=fs)


def sample_user_params(base: GaitSynthParams, corpus_seed: int, user_index: int) -> GaitSynthParams:
    """Per-user gait style: amplitudes, offsets, cadence and timing jitter
    drawn deterministically from (corpus_seed, user_index).

    Spreads are mild, matching a cohort walking the same treadmill protocol;
    a model trained on a handful of users must still cover an unseen one.
    """
    rng = np.random.default_rng([corpus_seed, user_index])
    return replace(
        base,
        cadence_spm=base.cadence_spm * rng.uniform(0.95, 1.05),
        hip_amp_deg=base.hip_amp_deg * rng.uniform(0.93, 1.07),
        knee_amp_deg=base.knee_amp_deg * rng.uniform(0.93, 1.07),
        backpack_amp_deg=base.backpack_amp_deg * rng.uniform(0.9, 1.1),
        hip_offset_deg=base.hip_offset_deg + rng.uniform(-1.2, 1.2),
        knee_offset_deg=base.knee_offset_deg + rng.uniform(-1.2, 1.2),
        backpack_offset_deg=base.backpack_offset_deg + rng.uniform(-0.6, 0.6),
        hip_phase=base.hip_phase + rng.uniform(-0.006, 0.006),
        knee_phase=base.knee_phase + rng.uniform(-0.006, 0.006),
        total_weight_n=base.total_weight_n * rng.uniform(0.9, 1.15),
        phase0=rng.uniform(0.0, 1.0),
        seed=int(rng.integers(0, 2**31 - 1)),
    )


def condition_tweak(params: GaitSynthParams, condition: str, trial_seed: int) -> GaitSynthParams:
    """Small deterministic change of style between walking conditions; the
    rendered virtual impedance pulls joints toward neutral slightly."""
    if condition == "rendering":
        params = replace(
            params,
            hip_amp_deg=params.hip_amp_deg * 0.93,
            knee_amp_deg=params.knee_amp_deg * 0.93,
            hip_offset_deg=params.hip_offset_deg + 1.5,
            knee_offset_deg=params.knee_offset_deg - 2.0,
        )
    return replace(params, seed=trial_seed)
