from .blend import ClampCounter, blend
from .compare import (
    COMPARE_CSV_HEADER,
    ClosedLoopReport,
    closed_loop_compare,
    compare_series,
    write_compare_csv,
)
from .phases import (
    DEFAULT_HI,
    DEFAULT_LO,
    GaitCycleStats,
    GaitPhase,
    PhaseSegment,
    StanceSegments,
    cycle_stats,
    segment_phases,
)

__all__ = [
    "ClampCounter", "blend",
    "COMPARE_CSV_HEADER", "ClosedLoopReport", "closed_loop_compare",
    "compare_series", "write_compare_csv",
    "DEFAULT_HI", "DEFAULT_LO", "GaitCycleStats", "GaitPhase", "PhaseSegment",
    "StanceSegments", "cycle_stats", "segment_phases",
]
