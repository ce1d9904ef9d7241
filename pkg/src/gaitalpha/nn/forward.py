"""Forward pass of the stance-weight network.

The batch implementation carries time as the leading axis, ``(T, B, ...)``,
so the per-timestep views touched inside the recurrence are contiguous.
Single-window operations are thin wrappers around the batch path with B=1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit as sigmoid

from ..errors import ConfigError, DataIntegrityError, InvalidArgumentError
from .model import LstmParams, StanceModel

__all__ = [
    "ForwardCache",
    "Workspace",
    "gaussian_corrupt",
    "lstm_forward",
    "lstm_forward_batch",
    "model_forward",
    "model_forward_batch",
    "mse_loss",
    "sigmoid",
]


def check_window(x: np.ndarray, window_len: int, n_channels: int) -> np.ndarray:
    """Validate one input window: exact shape, finite entries."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (window_len, n_channels):
        raise ConfigError(f"window has shape {x.shape}, expected ({window_len}, {n_channels})")
    if not np.all(np.isfinite(x)):
        raise DataIntegrityError("window contains non-finite values")
    return x


def gaussian_corrupt(x: np.ndarray, sigma: float, seed, training: bool) -> np.ndarray:
    """Additive i.i.d. gaussian corruption of the (standardized) input.

    Used as a regularizer during training only; inference returns ``x``
    untouched. Reproducible for a given ``seed``.
    """
    x = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(x)):
        raise DataIntegrityError("input to gaussian_corrupt is not finite")
    if sigma < 0.0:
        raise InvalidArgumentError("sigma must be >= 0")
    if not training or sigma == 0.0:
        return x
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return x + sigma * rng.standard_normal(x.shape)


@dataclass
class ForwardCache:
    """Everything backpropagation through time needs, for a batch of windows.

    Time-major layout: gates is (T, B, 4*units) with the gate blocks in
    [input, forget, cell-candidate, output] order; cell/tanh_cell/hidden_prev
    are (T, B, units). ``x_used`` is the input the recurrence actually saw
    (i.e. after noise corruption), time-major (T, B, n_in). ``x_raw`` keeps a
    reference to the pre-noise input for staleness checks.
    """

    x_used: np.ndarray
    x_raw: np.ndarray
    gates: np.ndarray
    cell: np.ndarray
    tanh_cell: np.ndarray
    hidden_prev: np.ndarray
    h_final: np.ndarray
    hidden_act: np.ndarray
    alpha: np.ndarray

    def __len__(self) -> int:
        return self.x_used.shape[0]

    @property
    def batch_size(self) -> int:
        return self.x_used.shape[1]


class Workspace:
    """Preallocated scratch for repeated batch forward/backward passes.

    Reusing these buffers keeps the training loop free of large repeated
    allocations (page-fault churn dominates otherwise).
    """

    def __init__(self, model: StanceModel, max_batch: int, window_len: int | None = None):
        T = window_len if window_len is not None else model.window_len
        u = model.lstm.units
        n4 = 4 * u
        n_in = model.n_channels
        B = max_batch
        self.T, self.B = T, B
        self.z = np.empty((T, B, n4))
        self.gates = np.empty((T, B, n4))
        self.cell = np.empty((T, B, u))
        self.tanh_cell = np.empty((T, B, u))
        self.hidden_prev = np.empty((T, B, u))
        self.dz = np.empty((T, B, n4))
        self.x_t = np.empty((T, B, n_in))

    def fits(self, T: int, B: int) -> bool:
        return T == self.T and B <= self.B


def _to_time_major(xb: np.ndarray, out: np.ndarray | None = None) -> np.ndarray:
    """(B, T, n) -> contiguous (T, B, n)."""
    B, T, n = xb.shape
    if out is not None:
        tm = out[:T, :B]
        np.copyto(tm, xb.swapaxes(0, 1))
        return tm
    return np.ascontiguousarray(xb.swapaxes(0, 1))


def lstm_forward_batch(x_tm: np.ndarray, params: LstmParams, ws: Workspace | None = None):
    """Run the LSTM over a time-major batch ``(T, B, n_in)``, h_0 = c_0 = 0.

    Returns ``(h_final, gates, cell, tanh_cell, hidden_prev)``; arrays other
    than ``h_final`` are views into the workspace when one is supplied.
    """
    T, B, n_in = x_tm.shape
    u = params.units
    n4 = 4 * u
    if n_in != params.n_in:
        raise ConfigError(f"window has {n_in} channels, lstm expects {params.n_in}")

    if ws is not None and ws.fits(T, B):
        Z = ws.z[:, :B]
        G = ws.gates[:, :B]
        C = ws.cell[:, :B]
        TC = ws.tanh_cell[:, :B]
        HP = ws.hidden_prev[:, :B]
    else:
        Z = np.empty((T, B, n4))
        G = np.empty((T, B, n4))
        C = np.empty((T, B, u))
        TC = np.empty((T, B, u))
        HP = np.empty((T, B, u))

    # Input projection for every timestep in one GEMM.
    np.dot(x_tm.reshape(T * B, n_in), params.w_in, out=Z.reshape(T * B, n4))

    h = np.zeros((B, u))
    c = np.zeros((B, u))
    bias = params.bias
    u_rec = params.u_rec
    for t in range(T):
        HP[t] = h
        z = Z[t]
        z += h @ u_rec
        z += bias
        g = G[t]
        sigmoid(z[:, : 2 * u], out=g[:, : 2 * u])               # input, forget
        np.tanh(z[:, 2 * u : 3 * u], out=g[:, 2 * u : 3 * u])  # candidate
        sigmoid(z[:, 3 * u :], out=g[:, 3 * u :])              # output
        c = g[:, :u] * g[:, 2 * u : 3 * u] + g[:, u : 2 * u] * c
        tc = np.tanh(c)
        h = g[:, 3 * u :] * tc
        C[t] = c
        TC[t] = tc
    return h, G, C, TC, HP


def lstm_forward(x: np.ndarray, params: LstmParams):
    """Single-window LSTM: ``(T, n_in)`` -> final hidden state ``(units,)``
    plus the recurrence cache (dense-head fields left empty)."""
    x = check_window(x, np.asarray(x).shape[0], params.n_in)
    x_tm = np.ascontiguousarray(x[:, None, :])
    h, G, C, TC, HP = lstm_forward_batch(x_tm, params)
    cache = ForwardCache(
        x_used=x_tm,
        x_raw=x_tm,
        gates=G,
        cell=C,
        tanh_cell=TC,
        hidden_prev=HP,
        h_final=h,
        hidden_act=np.zeros((1, 0)),
        alpha=np.zeros(1),
    )
    return h[0], cache


def _head_forward(h: np.ndarray, model: StanceModel):
    """Dense head on final hidden states: (B, units) -> (alpha (B,), act (B, H))."""
    a1 = sigmoid(h @ model.dense_hidden.weight + model.dense_hidden.bias)
    alpha = sigmoid(a1 @ model.dense_out.weight + model.dense_out.bias)[:, 0]
    return alpha, a1


def model_forward_batch(
    xb: np.ndarray,
    model: StanceModel,
    training: bool = False,
    rng: np.random.Generator | None = None,
    ws: Workspace | None = None,
):
    """Batch forward over ``(B, T, n_in)`` windows.

    Returns ``(alpha, cache)``; the cache is only built when training.
    Noise is drawn from ``rng`` when training and model.noise_sigma > 0.
    """
    xb = np.asarray(xb, dtype=np.float64)
    if xb.ndim != 3:
        raise ConfigError(f"expected a (B, T, n) batch, got shape {xb.shape}")
    use_ws = ws is not None and ws.fits(xb.shape[1], xb.shape[0])
    x_raw_tm = _to_time_major(xb, ws.x_t if use_ws else None)
    if training and model.noise_sigma > 0.0:
        if rng is None:
            raise InvalidArgumentError("training with noise requires an rng/seed")
        x_tm = x_raw_tm + model.noise_sigma * rng.standard_normal(x_raw_tm.shape)
    else:
        x_tm = x_raw_tm
    h, G, C, TC, HP = lstm_forward_batch(x_tm, model.lstm, ws)
    alpha, a1 = _head_forward(h, model)
    if not training:
        return alpha, None
    cache = ForwardCache(
        x_used=x_tm,
        x_raw=x_raw_tm,
        gates=G,
        cell=C,
        tanh_cell=TC,
        hidden_prev=HP,
        h_final=h,
        hidden_act=a1,
        alpha=alpha,
    )
    return alpha, cache


def model_forward(x: np.ndarray, model: StanceModel, training: bool = False, seed=None):
    """Predict alpha for one window ``(window_len, n_channels)``.

    The window must already be standardized with the model's channel stats.
    Returns ``(alpha, cache)``; cache is None unless ``training``.
    """
    x = check_window(x, model.window_len, model.n_channels)
    rng = None
    if training and model.noise_sigma > 0.0:
        if seed is None:
            raise InvalidArgumentError("training forward with noise requires a seed")
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    alpha, cache = model_forward_batch(x[None, :, :], model, training=training, rng=rng)
    return float(alpha[0]), cache


def mse_loss(pred, target) -> float:
    """Mean squared error between two equal-length series."""
    pred = np.asarray(pred, dtype=np.float64).ravel()
    target = np.asarray(target, dtype=np.float64).ravel()
    if pred.size == 0:
        raise InvalidArgumentError("mse_loss of empty series")
    if pred.shape != target.shape:
        raise InvalidArgumentError(f"length mismatch: {pred.shape} vs {target.shape}")
    d = pred - target
    return float(np.mean(d * d))
