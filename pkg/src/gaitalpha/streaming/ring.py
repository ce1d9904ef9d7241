"""Per-sample streaming inference over a fixed-capacity ring of kinematics.

One producer pushes samples; each push after warm-up yields a prediction
computed synchronously on the caller's thread. All buffers are allocated at
construction, so steady-state pushes do not grow the heap.
"""

from __future__ import annotations

import numpy as np

from ..errors import DataIntegrityError, InvalidArgumentError
from ..gait.trial import AlphaSeries, KinematicSample, Trial
from ..nn.kernel import KernelScratch, window_forward_fast
from ..nn.model import StanceModel

__all__ = ["RingWindow", "StreamingPredictor", "stream_trial"]


class RingWindow:
    """Fixed-capacity ring of row vectors; chronological view on demand."""

    def __init__(self, capacity: int, n_channels: int):
        if capacity < 1 or n_channels < 1:
            raise InvalidArgumentError("capacity and channel count must be >= 1")
        self.capacity = capacity
        self.n_channels = n_channels
        self._buf = np.zeros((capacity, n_channels))
        self._cursor = 0
        self._fill = 0

    def __len__(self) -> int:
        return self._fill

    @property
    def is_full(self) -> bool:
        return self._fill == self.capacity

    def push(self, row: np.ndarray) -> None:
        self._buf[self._cursor] = row
        self._cursor = (self._cursor + 1) % self.capacity
        if self._fill < self.capacity:
            self._fill += 1

    def view_into(self, out: np.ndarray) -> None:
        """Copy the last ``capacity`` rows, oldest first, into ``out``."""
        if not self.is_full:
            raise InvalidArgumentError("ring is not full yet")
        tail = self.capacity - self._cursor
        out[:tail] = self._buf[self._cursor :]
        out[tail:] = self._buf[: self._cursor]


class StreamingPredictor:
    """Standardizes incoming samples, maintains the sliding window, and
    predicts the weight distribution once the window is warm."""

    def __init__(self, model: StanceModel):
        self.model = model
        self.ring = RingWindow(model.window_len, model.n_channels)
        self._mean = model.channel_mean
        self._std = model.channel_std
        self._window = np.empty((model.window_len, model.n_channels))
        self._row = np.empty(model.n_channels)
        self._scratch = KernelScratch(model)
        self._w_out = model.dense_out.weight[:, 0]
        self._b_out = float(model.dense_out.bias[0])

    @property
    def n_buffered(self) -> int:
        return len(self.ring)

    def push_sample(self, sample) -> float | None:
        """Feed one kinematic sample; returns the prediction once
        ``model.window_len`` samples are buffered, else None.

        A non-finite sample is rejected without touching the buffer.
        """
        theta = sample.theta if isinstance(sample, KinematicSample) else np.asarray(sample, dtype=np.float64)
        if theta.shape != (self.model.n_channels,):
            raise DataIntegrityError(f"sample must have {self.model.n_channels} channels")
        if not np.all(np.isfinite(theta)):
            raise DataIntegrityError("sample contains non-finite values")
        np.subtract(theta, self._mean, out=self._row)
        self._row /= self._std
        self.ring.push(self._row)
        if not self.ring.is_full:
            return None
        self.ring.view_into(self._window)
        m = self.model
        return window_forward_fast(
            self._window,
            m.lstm.w_in, m.lstm.u_rec, m.lstm.bias,
            m.dense_hidden.weight, m.dense_hidden.bias,
            self._w_out, self._b_out,
            self._scratch.xw, self._scratch.z, self._scratch.h, self._scratch.c,
        )

    def reset(self) -> None:
        self.ring = RingWindow(self.model.window_len, self.model.n_channels)


def stream_trial(model: StanceModel, trial: Trial) -> AlphaSeries:
    """Push a whole trial through a fresh predictor; the result is aligned
    with the trial timestamps from the first full window onward."""
    predictor = StreamingPredictor(model)
    w = model.window_len
    if len(trial) < w:
        raise InvalidArgumentError("trial shorter than one window")
    out = np.empty(len(trial) - w + 1)
    k = 0
    for i in range(len(trial)):
        alpha = predictor.push_sample(trial.theta[i])
        if alpha is not None:
            out[k] = alpha
            k += 1
    return AlphaSeries(t=trial.t[w - 1 :], alpha=out)
