"""Bias-corrected adaptive moment optimizer over a flat parameter vector."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError

__all__ = ["AdamState", "init_adam", "adam_step"]


@dataclass(frozen=True)
class AdamState:
    """Optimizer state; ``m``/``v`` are congruent to the parameter vector."""

    step: int
    m: np.ndarray
    v: np.ndarray
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    def __post_init__(self):
        if self.step < 0:
            raise ConfigError("step counter must be >= 0")
        if self.m.shape != self.v.shape:
            raise ConfigError("m and v must have identical shapes")
        if np.any(self.v < 0.0):
            raise ConfigError("second-moment buffer must be non-negative")


def init_adam(n_params: int, lr: float = 1e-3, beta1: float = 0.9,
              beta2: float = 0.999, eps: float = 1e-8) -> AdamState:
    return AdamState(step=0, m=np.zeros(n_params), v=np.zeros(n_params),
                     lr=lr, beta1=beta1, beta2=beta2, eps=eps)


def adam_step(params: np.ndarray, grads: np.ndarray, state: AdamState):
    """One update; returns ``(new_params, new_state)``, inputs untouched."""
    if params.shape != grads.shape or params.shape != state.m.shape:
        raise ConfigError(
            f"shape mismatch: params {params.shape}, grads {grads.shape}, state {state.m.shape}"
        )
    t = state.step + 1
    m = state.beta1 * state.m + (1.0 - state.beta1) * grads
    v = state.beta2 * state.v + (1.0 - state.beta2) * grads * grads
    m_hat = m / (1.0 - state.beta1 ** t)
    v_hat = v / (1.0 - state.beta2 ** t)
    new_params = params - state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
    new_state = AdamState(step=t, m=m, v=v, lr=state.lr, beta1=state.beta1,
                          beta2=state.beta2, eps=state.eps)
    return new_params, new_state
