"""Backpropagation through time for the stance-weight network.

Gradient convention: plain squared error, d/dtheta of (alpha_hat - alpha)^2
per window (no 1/2 factor); batches average over windows. Standardization
statistics and the corruption sigma are not learnable and get no gradients.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError, InvalidStateError
from .forward import ForwardCache, Workspace
from .model import Gradients, StanceModel

__all__ = ["model_backward", "backward_batch"]


def backward_batch(
    cache: ForwardCache,
    model: StanceModel,
    targets: np.ndarray,
    ws: Workspace | None = None,
) -> Gradients:
    """Gradients of mean((alpha_hat - targets)^2) over the cached batch."""
    targets = np.asarray(targets, dtype=np.float64).ravel()
    T = len(cache)
    B = cache.batch_size
    if targets.shape != (B,):
        raise ConfigError(f"targets shape {targets.shape} does not match batch size {B}")
    u = model.lstm.units
    u_rec = model.lstm.u_rec
    w_h = model.dense_hidden.weight
    w_o = model.dense_out.weight

    alpha = cache.alpha
    a1 = cache.hidden_act
    h_fin = cache.h_final

    # Dense head, all sigmoid activations.
    dalpha = (2.0 / B) * (alpha - targets)
    dz_out = dalpha * alpha * (1.0 - alpha)                     # (B,)
    g_w_out = a1.T @ dz_out[:, None]                            # (H, 1)
    g_b_out = np.array([dz_out.sum()])
    da1 = dz_out[:, None] @ w_o.T                               # (B, H)
    dz_h = da1 * a1 * (1.0 - a1)
    g_w_h = h_fin.T @ dz_h                                      # (u, H)
    g_b_h = dz_h.sum(axis=0)
    dh = dz_h @ w_h.T                                           # (B, u)

    # Recurrence, newest step first.
    G = cache.gates
    C = cache.cell
    TC = cache.tanh_cell
    HP = cache.hidden_prev
    if ws is not None and ws.fits(T, B):
        dZ = ws.dz[:, :B]
    else:
        dZ = np.empty((T, B, 4 * u))
    dc = np.zeros((B, u))
    for t in range(T - 1, -1, -1):
        g = G[t]
        i = g[:, :u]
        f = g[:, u : 2 * u]
        cand = g[:, 2 * u : 3 * u]
        o = g[:, 3 * u :]
        tc = TC[t]
        dz = dZ[t]
        dc += dh * o * (1.0 - tc * tc)
        c_prev = C[t - 1] if t > 0 else 0.0
        dz[:, :u] = dc * cand * i * (1.0 - i)
        dz[:, u : 2 * u] = dc * c_prev * f * (1.0 - f)
        dz[:, 2 * u : 3 * u] = dc * i * (1.0 - cand * cand)
        dz[:, 3 * u :] = dh * tc * o * (1.0 - o)
        dh = dz @ u_rec.T
        dc *= f

    flat_dz = dZ.reshape(T * B, 4 * u)
    g_w_in = cache.x_used.reshape(T * B, -1).T @ flat_dz
    g_u_rec = HP.reshape(T * B, u).T @ flat_dz
    g_bias = dZ.sum(axis=(0, 1))
    return Gradients(
        w_in=g_w_in,
        u_rec=g_u_rec,
        bias=g_bias,
        w_hidden=g_w_h,
        b_hidden=g_b_h,
        w_out=g_w_out,
        b_out=g_b_out,
    )


def model_backward(cache: ForwardCache, x: np.ndarray, model: StanceModel, target: float) -> Gradients:
    """Gradients of (alpha_hat - target)^2 for one window.

    ``cache`` must come from a training-mode forward pass on the same ``x``
    (pre-noise); anything else raises InvalidStateError.
    """
    x = np.asarray(x, dtype=np.float64)
    if cache.batch_size != 1:
        raise InvalidStateError("model_backward expects a single-window cache")
    if cache.hidden_act.shape[1] != model.hidden_units:
        raise InvalidStateError("cache does not match this model's dense head")
    x_raw = cache.x_raw[:, 0, :]
    if x.shape != x_raw.shape or not np.array_equal(x, x_raw):
        raise InvalidStateError("cache was produced from a different window")
    return backward_batch(cache, model, np.array([target]))
