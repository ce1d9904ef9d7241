"""Window/target pairing for supervised training and evaluation."""

from __future__ import annotations

import logging

import numpy as np

from ..errors import InvalidArgumentError
from ..gait.alpha import DEFAULT_MIN_TOTAL_N, compute_alpha_series
from ..gait.trial import Trial
from ..gait.windows import sliding_windows, standardize_apply
from ..nn.model import StanceModel

log = logging.getLogger(__name__)

__all__ = ["build_dataset", "trial_windows"]


def trial_windows(trial: Trial, model: StanceModel, stride: int = 1,
                  min_total: float = DEFAULT_MIN_TOTAL_N):
    """Standardized windows and current-time targets for one trial.

    Windows end at indices ``window_len - 1, window_len - 1 + stride, ...``;
    each pairs with the weight distribution at its final sample. Returns
    ``(windows (N, T, C) view-backed copy, targets (N,))``; None if the trial
    is shorter than one window.
    """
    w = model.window_len
    if stride < 1:
        raise InvalidArgumentError("stride must be >= 1")
    if len(trial) < w:
        return None
    std = standardize_apply(trial.theta, model.channel_mean, model.channel_std)
    views = sliding_windows(std, w)
    alpha = compute_alpha_series(trial, min_total=min_total).alpha
    picks = np.arange(0, views.shape[0], stride)
    return np.ascontiguousarray(views[picks]), alpha[picks + w - 1]


def build_dataset(trials: list[Trial], model: StanceModel, stride: int,
                  min_total: float = DEFAULT_MIN_TOTAL_N):
    """Concatenate window/target pairs over ``trials``.

    Windows never cross trial boundaries. Trials shorter than one window are
    skipped with a logged warning. Raises if nothing remains.
    """
    if not trials:
        raise InvalidArgumentError("build_dataset needs at least one trial")
    xs, ys = [], []
    skipped = 0
    for trial in trials:
        pair = trial_windows(trial, model, stride=stride, min_total=min_total)
        if pair is None:
            skipped += 1
            continue
        xs.append(pair[0])
        ys.append(pair[1])
    if skipped:
        log.warning("build_dataset: skipped %d trial(s) shorter than one window", skipped)
    if not xs:
        raise InvalidArgumentError("no trial is long enough for a single window")
    return np.concatenate(xs, axis=0), np.concatenate(ys, axis=0)
