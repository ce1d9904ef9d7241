"""Compiled single-window inference kernel.

One prediction recomputes the full recurrence over the window from zero
state; a sliding window cannot reuse hidden state across predictions. The
kernel is written with explicit loops and caller-provided scratch so a call
performs no heap allocation, which keeps per-prediction latency flat and
well under a millisecond.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from .model import StanceModel

__all__ = ["window_forward_fast", "KernelScratch", "predict_window"]


@njit(cache=True, fastmath=False)
def window_forward_fast(x, w_in, u_rec, bias, w_h, b_h, w_o, b_o, xw, z, h, c):
    """alpha for one standardized window x of shape (T, n_in).

    xw (T, 4u), z (4u,), h (u,), c (u,) are scratch buffers.
    """
    T = x.shape[0]
    n_in = x.shape[1]
    u = u_rec.shape[0]
    n4 = 4 * u
    for t in range(T):
        for k in range(n4):
            acc = bias[k]
            for i in range(n_in):
                acc += x[t, i] * w_in[i, k]
            xw[t, k] = acc
    for j in range(u):
        h[j] = 0.0
        c[j] = 0.0
    for t in range(T):
        for k in range(n4):
            acc = xw[t, k]
            for j in range(u):
                acc += h[j] * u_rec[j, k]
            z[k] = acc
        for j in range(u):
            gi = 1.0 / (1.0 + math.exp(-z[j]))
            gf = 1.0 / (1.0 + math.exp(-z[u + j]))
            gc = math.tanh(z[2 * u + j])
            go = 1.0 / (1.0 + math.exp(-z[3 * u + j]))
            c[j] = gf * c[j] + gi * gc
            h[j] = go * math.tanh(c[j])
    n_hidden = b_h.shape[0]
    out = b_o
    for m in range(n_hidden):
        acc = b_h[m]
        for j in range(u):
            acc += h[j] * w_h[j, m]
        out += w_o[m] / (1.0 + math.exp(-acc))
    return 1.0 / (1.0 + math.exp(-out))


class KernelScratch:
    """Reusable buffers for window_forward_fast, sized for one model."""

    def __init__(self, model: StanceModel, window_len: int | None = None):
        T = window_len if window_len is not None else model.window_len
        u = model.lstm.units
        self.xw = np.empty((T, 4 * u))
        self.z = np.empty(4 * u)
        self.h = np.empty(u)
        self.c = np.empty(u)


def predict_window(x: np.ndarray, model: StanceModel, scratch: KernelScratch | None = None) -> float:
    """Convenience wrapper: predict one window with the compiled kernel."""
    if scratch is None:
        scratch = KernelScratch(model, window_len=x.shape[0])
    return window_forward_fast(
        x,
        model.lstm.w_in,
        model.lstm.u_rec,
        model.lstm.bias,
        model.dense_hidden.weight,
        model.dense_hidden.bias,
        model.dense_out.weight[:, 0],
        model.dense_out.bias[0],
        scratch.xw,
        scratch.z,
        scratch.h,
        scratch.c,
    )
