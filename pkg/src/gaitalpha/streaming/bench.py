"""Wall-clock latency measurement of single-window predictions."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidArgumentError
from ..nn.kernel import KernelScratch, window_forward_fast
from ..nn.model import StanceModel

LATENCY_CSV_HEADER = "n,mean_us,std_us,p99_us,max_us"

__all__ = ["LatencyStats", "bench_latency", "write_latency_csv", "LATENCY_CSV_HEADER"]


@dataclass(frozen=True)
class LatencyStats:
    """Per-prediction timings in microseconds. On a healthy run
    max >= p99 >= mean; a pathological scheduler stall can break the
    mean <= p99 ordering, so it is reported, not enforced."""

    n: int
    mean_us: float
    std_us: float
    p99_us: float
    max_us: float


def bench_latency(model: StanceModel, n_predictions: int, warmup: int, seed: int = 0) -> LatencyStats:
    """Time ``n_predictions`` single-window predictions on random
    standardized windows, after ``warmup`` untimed calls (which also absorb
    JIT compilation)."""
    if n_predictions < 1000:
        raise InvalidArgumentError("need at least 1000 timed predictions")
    if warmup < 100:
        raise InvalidArgumentError("need at least 100 warm-up predictions")
    rng = np.random.default_rng(seed)
    total = warmup + n_predictions
    windows = rng.standard_normal((total, model.window_len, model.n_channels))
    scratch = KernelScratch(model)
    m = model
    w_out = m.dense_out.weight[:, 0]
    b_out = float(m.dense_out.bias[0])
    lat = np.empty(n_predictions)
    for i in range(total):
        t0 = time.perf_counter_ns()
        window_forward_fast(
            windows[i], m.lstm.w_in, m.lstm.u_rec, m.lstm.bias,
            m.dense_hidden.weight, m.dense_hidden.bias, w_out, b_out,
            scratch.xw, scratch.z, scratch.h, scratch.c,
        )
        dt = time.perf_counter_ns() - t0
        if i >= warmup:
            lat[i - warmup] = dt / 1000.0
    return LatencyStats(
        n=n_predictions,
        mean_us=float(lat.mean()),
        std_us=float(lat.std()),
        p99_us=float(np.percentile(lat, 99)),
        max_us=float(lat.max()),
    )


def write_latency_csv(stats: LatencyStats, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(LATENCY_CSV_HEADER + "\n")
        fh.write(f"{stats.n},{stats.mean_us:.3f},{stats.std_us:.3f},"
                 f"{stats.p99_us:.3f},{stats.max_us:.3f}\n")
