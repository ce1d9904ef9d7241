from .alpha import DEFAULT_MIN_TOTAL_N, compute_alpha_series, stance_interpolation
from .synth import GaitSynthParams, alpha_profile, condition_tweak, sample_user_params, synth_gait
from .trial import CONDITIONS, AlphaSeries, GrfSample, KinematicSample, Trial
from .trial_io import HEADER, load_trial_csv, save_trial_csv, trial_filename
from .windows import (
    STD_FLOOR,
    sliding_windows,
    standardize_apply,
    standardize_fit,
    unstandardize,
    window_extract,
)

__all__ = [
    "DEFAULT_MIN_TOTAL_N", "compute_alpha_series", "stance_interpolation",
    "GaitSynthParams", "alpha_profile", "condition_tweak", "sample_user_params", "synth_gait",
    "CONDITIONS", "AlphaSeries", "GrfSample", "KinematicSample", "Trial",
    "HEADER", "load_trial_csv", "save_trial_csv", "trial_filename",
    "STD_FLOOR", "sliding_windows", "standardize_apply", "standardize_fit",
    "unstandardize", "window_extract",
]
