"""The one place the weight distribution enters control: interpolating
between the left-stance and right-stance dynamic model outputs."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidArgumentError

log = logging.getLogger(__name__)

__all__ = ["ClampCounter", "blend"]


@dataclass
class ClampCounter:
    """Counts out-of-range alphas that had to be clamped."""

    count: int = 0


def blend(alpha: float, left_value, right_value, counter: ClampCounter | None = None) -> np.ndarray:
    """(1 - alpha) * left + alpha * right, elementwise.

    An alpha outside [0, 1] is clamped (and counted) rather than rejected:
    during closed-loop operation a bad estimate must degrade gracefully.
    """
    left = np.asarray(left_value, dtype=np.float64)
    right = np.asarray(right_value, dtype=np.float64)
    if left.shape != right.shape:
        raise InvalidArgumentError(f"shape mismatch: {left.shape} vs {right.shape}")
    if not np.isfinite(alpha):
        raise InvalidArgumentError("alpha must be finite")
    if alpha < 0.0 or alpha > 1.0:
        if counter is not None:
            counter.count += 1
        log.debug("blend: clamping alpha %.6f into [0, 1]", alpha)
        alpha = min(max(alpha, 0.0), 1.0)
    return (1.0 - alpha) * left + alpha * right
