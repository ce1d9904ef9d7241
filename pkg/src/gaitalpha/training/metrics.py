"""Evaluation metrics: coefficient of determination and MSE over trials."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidArgumentError, UndefinedMetricError
from ..gait.alpha import DEFAULT_MIN_TOTAL_N
from ..gait.trial import Trial
from ..nn.forward import Workspace, model_forward_batch, mse_loss
from ..nn.model import StanceModel
from .dataset import trial_windows

__all__ = ["EvalReport", "UserEval", "r_squared", "evaluate", "predict_trial"]

EVAL_BATCH = 2048


def r_squared(pred, actual) -> float:
    """1 - SS_res/SS_tot with SS_tot about the mean of ``actual``.

    Can be negative (worse than predicting the mean). Undefined for a
    constant actual series.
    """
    pred = np.asarray(pred, dtype=np.float64).ravel()
    actual = np.asarray(actual, dtype=np.float64).ravel()
    if pred.shape != actual.shape:
        raise InvalidArgumentError(f"length mismatch: {pred.shape} vs {actual.shape}")
    if pred.size < 2:
        raise InvalidArgumentError("r_squared needs at least two points")
    ss_tot = float(np.sum((actual - actual.mean()) ** 2))
    if ss_tot == 0.0:
        raise UndefinedMetricError("r_squared undefined for a constant actual series")
    ss_res = float(np.sum((pred - actual) ** 2))
    return 1.0 - ss_res / ss_tot


@dataclass(frozen=True)
class UserEval:
    r2: float
    mse: float
    n_windows: int


@dataclass(frozen=True)
class EvalReport:
    r2: float
    mse: float
    n_windows: int
    per_user: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.mse < 0.0:
            raise InvalidArgumentError("mse cannot be negative")
        if self.r2 > 1.0:
            raise InvalidArgumentError("r2 cannot exceed 1")


def predict_trial(model: StanceModel, trial: Trial, batch_size: int = EVAL_BATCH,
                  min_total: float = DEFAULT_MIN_TOTAL_N, ws: Workspace | None = None):
    """Noise-free stride-1 predictions over a whole trial.

    Returns ``(alpha_hat, alpha_true)`` aligned at window ends, or None for
    trials shorter than one window.
    """
    pair = trial_windows(trial, model, stride=1, min_total=min_total)
    if pair is None:
        return None
    windows, targets = pair
    preds = np.empty(windows.shape[0])
    for start in range(0, windows.shape[0], batch_size):
        xb = windows[start : start + batch_size]
        preds[start : start + xb.shape[0]], _ = model_forward_batch(xb, model, training=False, ws=ws)
    return preds, targets


def evaluate(model: StanceModel, trials: list[Trial],
             min_total: float = DEFAULT_MIN_TOTAL_N, predict_fn=None) -> EvalReport:
    """Stride-1, noise-free evaluation pooled over ``trials`` with a
    per-user breakdown. ``predict_fn(model, trial)`` may replace the real
    prediction path (testing seam)."""
    if not trials:
        raise InvalidArgumentError("evaluate needs at least one trial")
    if predict_fn is None:
        ws = Workspace(model, max_batch=EVAL_BATCH)
        predict_fn = lambda m, tr: predict_trial(m, tr, ws=ws)  # noqa: E731
    by_user: dict[str, list] = {}
    all_pred, all_true = [], []
    for trial in trials:
        pair = predict_fn(model, trial)
        if pair is None:
            continue
        pred, true = pair
        all_pred.append(pred)
        all_true.append(true)
        by_user.setdefault(trial.user_id, []).append((pred, true))
    if not all_pred:
        raise InvalidArgumentError("no trial produced any valid window")
    pred = np.concatenate(all_pred)
    true = np.concatenate(all_true)
    per_user = {}
    for user, pairs in by_user.items():
        up = np.concatenate([p for p, _ in pairs])
        ut = np.concatenate([t for _, t in pairs])
        per_user[user] = UserEval(r2=r_squared(up, ut), mse=mse_loss(up, ut), n_windows=up.size)
    return EvalReport(r2=r_squared(pred, true), mse=mse_loss(pred, true),
                      n_windows=pred.size, per_user=per_user)
