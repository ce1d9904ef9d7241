from .dataset import build_dataset, trial_windows
from .loocv import LOOCV_CSV_HEADER, VARIANTS, LoocvRow, loocv, write_loocv_csv
from .metrics import EvalReport, UserEval, evaluate, predict_trial, r_squared
from .trainer import TrainConfig, TrainResult, train

__all__ = [
    "build_dataset", "trial_windows",
    "LOOCV_CSV_HEADER", "VARIANTS", "LoocvRow", "loocv", "write_loocv_csv",
    "EvalReport", "UserEval", "evaluate", "predict_trial", "r_squared",
    "TrainConfig", "TrainResult", "train",
]
