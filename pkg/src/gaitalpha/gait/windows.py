"""Standardization and window extraction over trials."""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..errors import InvalidArgumentError, OutOfRangeError
from ..nn.model import StanceModel
from .trial import Trial

STD_FLOOR = 1e-6

__all__ = ["STD_FLOOR", "standardize_fit", "standardize_apply", "unstandardize",
           "window_extract", "sliding_windows"]


def standardize_fit(trials: list[Trial]) -> tuple[np.ndarray, np.ndarray]:
    """Per-channel mean and std over all kinematics of ``trials``.

    The std is floored at STD_FLOOR so degenerate (constant) channels stay
    usable. Fit this on training data only.
    """
    if not trials:
        raise InvalidArgumentError("standardize_fit needs at least one trial")
    stacked = np.concatenate([tr.theta for tr in trials], axis=0)
    if stacked.shape[0] < 100:
        raise InvalidArgumentError("standardize_fit needs at least 100 samples in total")
    mean = stacked.mean(axis=0)
    std = np.maximum(stacked.std(axis=0), STD_FLOOR)
    return mean, std


def standardize_apply(theta: np.ndarray, mean: np.ndarray, std: np.ndarray) -> np.ndarray:
    return (theta - mean) / std


def unstandardize(z: np.ndarray, mean: np.ndarray, std: np.ndarray) -> np.ndarray:
    return z * std + mean


def window_extract(trial: Trial, index: int, model: StanceModel) -> np.ndarray:
    """Standardized window of the ``model.window_len`` samples ending at
    ``index`` (inclusive), oldest row first. Never mutates the trial."""
    w = model.window_len
    if index < w - 1:
        raise OutOfRangeError(f"index {index} < first valid window end {w - 1}")
    if index >= len(trial):
        raise OutOfRangeError(f"index {index} beyond trial of length {len(trial)}")
    raw = trial.theta[index - w + 1 : index + 1]
    return standardize_apply(raw, model.channel_mean, model.channel_std)


def sliding_windows(std_theta: np.ndarray, window_len: int) -> np.ndarray:
    """All windows of a standardized (N, C) array as a zero-copy view of
    shape (N - window_len + 1, window_len, C)."""
    if std_theta.shape[0] < window_len:
        raise InvalidArgumentError("series shorter than the window")
    return sliding_window_view(std_theta, window_len, axis=0).swapaxes(1, 2)
