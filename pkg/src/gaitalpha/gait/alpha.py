"""Weight distribution from vertical ground reaction forces.

The stance interpolation factor is the right foot's share of the total
vertical load: alpha = F_right / (F_left + F_right). Below a minimum total
load the ratio is numerically meaningless (both feet unloaded), so the
previous value is held instead.
"""

from __future__ import annotations

import numpy as np

from ..errors import DataIntegrityError, InvalidArgumentError
from .trial import AlphaSeries, Trial

DEFAULT_MIN_TOTAL_N = 20.0

__all__ = ["DEFAULT_MIN_TOTAL_N", "stance_interpolation", "compute_alpha_series"]


def stance_interpolation(f_left_y: float, f_right_y: float, prev_alpha: float,
                         min_total: float = DEFAULT_MIN_TOTAL_N) -> float:
    """Right-foot load share in [0, 1], holding ``prev_alpha`` when the
    total vertical load falls below ``min_total`` newtons."""
    if not (np.isfinite(f_left_y) and np.isfinite(f_right_y)):
        raise DataIntegrityError("forces must be finite")
    if f_left_y < 0.0 or f_right_y < 0.0:
        raise DataIntegrityError("vertical forces must be non-negative")
    if not 0.0 <= prev_alpha <= 1.0:
        raise InvalidArgumentError("prev_alpha must lie in [0, 1]")
    total = f_left_y + f_right_y
    if total < min_total:
        return prev_alpha
    return f_right_y / total


def compute_alpha_series(trial: Trial, min_total: float = DEFAULT_MIN_TOTAL_N,
                         initial_alpha: float = 0.5) -> AlphaSeries:
    """Per-sample stance interpolation factor for a whole trial.

    Vectorized equivalent of applying stance_interpolation sample by sample
    with hold-last-value semantics, starting from ``initial_alpha``.
    """
    f_left = trial.grf[:, 0]
    f_right = trial.grf[:, 1]
    total = f_left + f_right
    valid = total >= min_total
    ratio = np.where(valid, f_right / np.where(valid, total, 1.0), 0.0)
    # Hold the last valid ratio over invalid stretches.
    n = len(trial)
    last_valid = np.where(valid, np.arange(n), -1)
    np.maximum.accumulate(last_valid, out=last_valid)
    alpha = np.where(last_valid >= 0, ratio[np.maximum(last_valid, 0)], initial_alpha)
    return AlphaSeries(t=trial.t, alpha=alpha)
