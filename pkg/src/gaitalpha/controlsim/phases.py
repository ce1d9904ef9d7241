"""Gait-phase segmentation of a weight-distribution series and per-cycle
stance statistics.

Thresholds: alpha <= lo is left single stance, alpha >= hi is right single
stance, anything between is double stance. Cycles are delimited by right
stance onsets; the reported stance fraction is for the LEFT leg, i.e. the
share of the cycle in which the left foot bears load (left stance plus
double stance). Both conventions are fixed and documented here.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from ..errors import InsufficientDataError, InvalidArgumentError
from ..gait.trial import AlphaSeries

DEFAULT_LO = 0.1
DEFAULT_HI = 0.9

__all__ = ["GaitPhase", "PhaseSegment", "StanceSegments", "GaitCycleStats",
           "segment_phases", "cycle_stats", "DEFAULT_LO", "DEFAULT_HI"]


class GaitPhase(str, enum.Enum):
    LEFT_STANCE = "left_stance"
    RIGHT_STANCE = "right_stance"
    DOUBLE_STANCE = "double_stance"


@dataclass(frozen=True)
class PhaseSegment:
    phase: GaitPhase
    start_t: float
    end_t: float

    @property
    def duration(self) -> float:
        return self.end_t - self.start_t


@dataclass(frozen=True)
class StanceSegments:
    """Contiguous, non-overlapping segments covering the whole series."""

    segments: tuple

    def __post_init__(self):
        if not self.segments:
            raise InvalidArgumentError("segmentation cannot be empty")
        for a, b in zip(self.segments, self.segments[1:]):
            if b.start_t != a.end_t:
                raise InvalidArgumentError("segments must be contiguous")
            if a.phase == b.phase:
                raise InvalidArgumentError("adjacent segments must differ in phase")

    def __len__(self) -> int:
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)

    def total_duration(self, phase: GaitPhase) -> float:
        return sum(s.duration for s in self.segments if s.phase == phase)


@dataclass(frozen=True)
class GaitCycleStats:
    """stance_fraction_pct: left-leg stance (incl. double stance) as a
    percentage of the cycle, averaged over full cycles."""

    n_cycles: int
    mean_cycle_s: float
    stance_fraction_pct: float
    per_cycle_pct: tuple = field(default=())
    stance_leg: str = "left"

    def __post_init__(self):
        if not 0.0 < self.stance_fraction_pct < 100.0:
            raise InvalidArgumentError("stance fraction must lie strictly between 0 and 100%")


def _classify(alpha: np.ndarray, lo: float, hi: float) -> np.ndarray:
    codes = np.full(alpha.shape, 2, dtype=np.int8)  # double stance
    codes[alpha <= lo] = 0                          # left stance
    codes[alpha >= hi] = 1                          # right stance
    return codes


_PHASES = (GaitPhase.LEFT_STANCE, GaitPhase.RIGHT_STANCE, GaitPhase.DOUBLE_STANCE)


def segment_phases(series: AlphaSeries, lo: float = DEFAULT_LO, hi: float = DEFAULT_HI) -> StanceSegments:
    """Merge per-sample phase labels into maximal runs.

    Segment boundaries sit on sample timestamps; the final segment is closed
    with one median sample period past the last sample.
    """
    if len(series) == 0:
        raise InvalidArgumentError("empty series")
    if not 0.0 < lo < hi < 1.0:
        raise InvalidArgumentError("need 0 < lo < hi < 1")
    codes = _classify(series.alpha, lo, hi)
    t = series.t
    dt = float(np.median(np.diff(t))) if len(series) > 1 else 0.0
    boundaries = np.flatnonzero(np.diff(codes)) + 1
    starts = np.concatenate([[0], boundaries])
    ends = np.concatenate([boundaries, [len(series)]])
    segments = []
    for s, e in zip(starts, ends):
        end_t = float(t[e]) if e < len(series) else float(t[-1]) + dt
        segments.append(PhaseSegment(phase=_PHASES[codes[s]], start_t=float(t[s]), end_t=end_t))
    return StanceSegments(segments=tuple(segments))


def cycle_stats(segments: StanceSegments) -> GaitCycleStats:
    """Per-cycle stance statistics; needs at least two full cycles."""
    onsets = [s.start_t for s in segments if s.phase == GaitPhase.RIGHT_STANCE]
    if len(onsets) < 3:
        raise InsufficientDataError(
            f"need at least 2 full cycles ({len(onsets)} right-stance onset(s) found)"
        )
    fractions = []
    durations = []
    for c0, c1 in zip(onsets, onsets[1:]):
        cycle = c1 - c0
        loaded = 0.0  # left foot loaded: left stance or double stance
        for seg in segments:
            if seg.phase == GaitPhase.RIGHT_STANCE:
                continue
            lo_t = max(seg.start_t, c0)
            hi_t = min(seg.end_t, c1)
            if hi_t > lo_t:
                loaded += hi_t - lo_t
        fractions.append(100.0 * loaded / cycle)
        durations.append(cycle)
    return GaitCycleStats(
        n_cycles=len(durations),
        mean_cycle_s=float(np.mean(durations)),
        stance_fraction_pct=float(np.mean(fractions)),
        per_cycle_pct=tuple(fractions),
    )
