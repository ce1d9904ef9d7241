"""Central finite-difference gradients, used as the independent oracle for
the analytic backward pass.

The oracle deliberately goes through the compiled inference kernel (the
deterministic, noise-free forward), not through any code shared with
backpropagation, so a bug in the analytic path cannot cancel out here.
"""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from ..errors import InvalidArgumentError
from .backward import model_backward
from .forward import check_window, model_forward
from .kernel import KernelScratch, window_forward_fast
from .model import Gradients, StanceModel, _param_arrays

__all__ = ["finite_diff_grad", "gradient_check"]


def finite_diff_grad(model: StanceModel, x: np.ndarray, target: float, eps: float = 1e-6) -> Gradients:
    """d/dtheta of (alpha_hat - target)^2 for every learnable scalar, by
    central differences with step ``eps`` on the noise-free forward."""
    if eps <= 0.0:
        raise InvalidArgumentError("eps must be > 0")
    x = check_window(x, model.window_len, model.n_channels)
    work = [a.copy() for a in _param_arrays(model)]
    w_in, u_rec, bias, w_h, b_h, w_out, b_out = work
    scratch = KernelScratch(model)

    def loss() -> float:
        a = window_forward_fast(
            x, w_in, u_rec, bias, w_h, b_h, w_out[:, 0], b_out[0],
            scratch.xw, scratch.z, scratch.h, scratch.c,
        )
        d = a - target
        return d * d

    grads = []
    for arr in work:
        g = np.empty_like(arr)
        flat = arr.ravel()
        gflat = g.ravel()
        for idx in range(flat.size):
            orig = flat[idx]
            flat[idx] = orig + eps
            lp = loss()
            flat[idx] = orig - eps
            lm = loss()
            flat[idx] = orig
            gflat[idx] = (lp - lm) / (2.0 * eps)
        grads.append(g)
    return Gradients(
        w_in=grads[0], u_rec=grads[1], bias=grads[2],
        w_hidden=grads[3], b_hidden=grads[4], w_out=grads[5], b_out=grads[6],
    )


def gradient_check(model: StanceModel, x: np.ndarray, target: float, eps: float = 1e-6) -> float:
    """Max over parameters of |analytic - fd| / max(1, |fd|).

    Runs on a noise-free copy of the model so both sides differentiate the
    same deterministic loss.
    """
    clean = replace(model, noise_sigma=0.0)
    _, cache = model_forward(x, clean, training=True)
    analytic = model_backward(cache, x, clean, target).to_vector()
    fd = finite_diff_grad(clean, x, target, eps=eps).to_vector()
    return float(np.max(np.abs(analytic - fd) / np.maximum(1.0, np.abs(fd))))
