"""Mini-batch training loop for the stance-weight model."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ..errors import DivergedTrainingError, InvalidArgumentError
from ..gait.alpha import DEFAULT_MIN_TOTAL_N
from ..gait.trial import Trial
from ..gait.windows import standardize_fit
from ..nn.adam import adam_step, init_adam
from ..nn.backward import backward_batch
from ..nn.forward import Workspace, model_forward_batch, mse_loss
from ..nn.model import StanceModel, flatten_params, init_stance_model, unflatten_params
from .dataset import build_dataset

log = logging.getLogger(__name__)

__all__ = ["TrainConfig", "TrainResult", "train"]


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 10
    batch_size: int = 256
    stride: int = 5                    # subsampling between training windows
    window_len: int = 99               # 99 (~300 ms at 333 Hz) or 1
    hidden_units: int = 10
    noise_sigma: float = 0.01
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    grad_clip_norm: float = 1.0        # global L2 clip; 0 disables
    min_total_force_n: float = DEFAULT_MIN_TOTAL_N
    sample_rate_hz: float = 333.0

    def __post_init__(self):
        if self.epochs < 1:
            raise InvalidArgumentError("epochs must be >= 1")
        if self.batch_size < 1:
            raise InvalidArgumentError("batch_size must be >= 1")
        if self.stride < 1:
            raise InvalidArgumentError("stride must be >= 1")
        if self.window_len not in (1, 99):
            raise InvalidArgumentError("window_len must be 1 or 99")
        if self.grad_clip_norm < 0.0:
            raise InvalidArgumentError("grad_clip_norm must be >= 0")


@dataclass
class TrainResult:
    model: StanceModel
    epoch_losses: list = field(default_factory=list)   # mean training MSE per epoch
    n_windows: int = 0


def train(train_trials: list[Trial], cfg: TrainConfig, seed: int) -> TrainResult:
    """Train a fresh model on ``train_trials``.

    Standardization statistics come from the training trials only. Batches
    are reshuffled across all trials every epoch; each batch gets fresh
    gaussian input corruption. Deterministic for a given seed.
    """
    if not train_trials:
        raise InvalidArgumentError("train needs at least one trial")
    seeds = np.random.SeedSequence(seed).spawn(3)
    init_seed = int(seeds[0].generate_state(1)[0])
    shuffle_rng = np.random.default_rng(seeds[1])
    noise_rng = np.random.default_rng(seeds[2])

    mean, std = standardize_fit(train_trials)
    model = init_stance_model(
        seed=init_seed,
        hidden_units=cfg.hidden_units,
        window_len=cfg.window_len,
        noise_sigma=cfg.noise_sigma,
        sample_rate_hz=cfg.sample_rate_hz,
        channel_mean=mean,
        channel_std=std,
    )
    windows, targets = build_dataset(train_trials, model, stride=cfg.stride,
                                     min_total=cfg.min_total_force_n)
    n = windows.shape[0]
    params = flatten_params(model)
    state = init_adam(params.size, lr=cfg.learning_rate, beta1=cfg.beta1,
                      beta2=cfg.beta2, eps=cfg.adam_eps)
    ws = Workspace(model, max_batch=min(cfg.batch_size, n))

    epoch_losses = []
    for epoch in range(cfg.epochs):
        order = shuffle_rng.permutation(n)
        running = 0.0
        current = unflatten_params(model, params)
        for start in range(0, n, cfg.batch_size):
            idx = order[start : start + cfg.batch_size]
            xb = windows[idx]
            yb = targets[idx]
            alpha, cache = model_forward_batch(xb, current, training=True,
                                               rng=noise_rng, ws=ws)
            batch_loss = mse_loss(alpha, yb)
            if not np.isfinite(batch_loss):
                raise DivergedTrainingError(
                    f"non-finite loss in epoch {epoch + 1}; training diverged"
                )
            running += batch_loss * idx.size
            gvec = backward_batch(cache, current, yb, ws=ws).to_vector()
            if cfg.grad_clip_norm > 0.0:
                # a 99-step recurrence occasionally produces exploding
                # gradients late in training; clip the global norm
                gnorm = float(np.linalg.norm(gvec))
                if gnorm > cfg.grad_clip_norm:
                    gvec *= cfg.grad_clip_norm / gnorm
            params, state = adam_step(params, gvec, state)
            current = unflatten_params(model, params)
        epoch_losses.append(running / n)
        log.info("epoch %d/%d: train mse %.6f", epoch + 1, cfg.epochs, epoch_losses[-1])
    return TrainResult(model=unflatten_params(model, params),
                       epoch_losses=epoch_losses, n_windows=n)
