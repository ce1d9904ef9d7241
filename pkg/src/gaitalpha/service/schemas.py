"""Request/response models of the HTTP service.

Paths in requests are interpreted on the service host; the bundled CLI runs
the service in-process by default, so they are ordinary local paths there.
"""

from __future__ import annotations

import math
from typing import Optional

from pydantic import BaseModel, Field


def none_if_nan(v: float) -> Optional[float]:
    return None if math.isnan(v) else v


class HealthResponse(BaseModel):
    status: str
    version: str


class ErrorResponse(BaseModel):
    error: str
    message: str


class SynthParamOverrides(BaseModel):
    """Optional overrides of the gait generator defaults."""

    cadence_spm: Optional[float] = None
    stance_fraction: Optional[float] = None
    double_stance_fraction: Optional[float] = None
    total_weight_n: Optional[float] = None
    hip_amp_deg: Optional[float] = None
    knee_amp_deg: Optional[float] = None
    grf_noise_rel: Optional[float] = None
    kin_noise_deg: Optional[list[float]] = None

    def as_kwargs(self) -> dict:
        out = self.model_dump(exclude_none=True)
        if "kin_noise_deg" in out:
            out["kin_noise_deg"] = tuple(out["kin_noise_deg"])
        return out


class SynthRequest(BaseModel):
    out_dir: str
    n_users: int = Field(default=6, ge=1)
    duration_s: float = 60.0
    conditions: list[str] = ["transparent", "rendering"]
    seed: int = 0
    params: Optional[SynthParamOverrides] = None


class SynthResponse(BaseModel):
    files: list[str]
    manifest: str


class TrainSettings(BaseModel):
    """Mirrors the training configuration; see TrainConfig for semantics."""

    epochs: int = 10
    batch_size: int = 256
    stride: int = 5
    window_len: int = 99
    hidden_units: int = 10
    noise_sigma: float = 0.01
    learning_rate: float = 1e-3
    grad_clip_norm: float = 1.0
    min_total_force_n: float = 20.0


class TrialSelector(BaseModel):
    trials: list[str] = []
    trials_glob: Optional[str] = None


class TrainRequest(TrialSelector):
    out_model: str
    settings: TrainSettings = TrainSettings()
    seed: int = 0


class TrainResponse(BaseModel):
    model_path: str
    log_path: str
    epoch_losses: list[float]
    n_windows: int
    manifest: str


class EvalRequest(TrialSelector):
    model_path: str
    out_csv: Optional[str] = None


class UserEvalModel(BaseModel):
    r2: float
    mse: float
    n_windows: int


class EvalResponse(BaseModel):
    r2: float
    mse: float
    n_windows: int
    per_user: dict[str, UserEvalModel]
    csv_path: Optional[str] = None
    manifest: Optional[str] = None


class LoocvRequest(TrialSelector):
    out_csv: str
    settings: TrainSettings = TrainSettings()
    seed: int = 0


class LoocvRowModel(BaseModel):
    train_users: list[str]
    test_user: str
    variant: str
    train_mse: float
    test_mse: float
    r2_test: float


class LoocvResponse(BaseModel):
    rows: list[LoocvRowModel]
    csv_path: str
    manifest: str


class BenchRequest(BaseModel):
    model_path: str
    out_csv: str
    n_predictions: int = 10000
    warmup: int = 1000
    seed: int = 0


class BenchResponse(BaseModel):
    n: int
    mean_us: float
    std_us: float
    p99_us: float
    max_us: float
    csv_path: str
    manifest: str


class StreamRequest(BaseModel):
    model_path: str
    trial_path: str
    out_csv: str


class StreamResponse(BaseModel):
    n_predictions: int
    csv_path: str
    manifest: str


class CompareRequest(BaseModel):
    model_path: str
    trial_path: str
    out_csv: str
    lo: float = 0.1
    hi: float = 0.9


class CompareResponse(BaseModel):
    mse: float
    r2: float
    stance_frac_truth: Optional[float]   # None when too few cycles
    stance_frac_pred: Optional[float]
    mean_abs_alpha_err: float
    csv_path: str
    manifest: str


class OpenSessionRequest(BaseModel):
    model_path: str


class OpenSessionResponse(BaseModel):
    session_id: str
    window_len: int


class PushSampleRequest(BaseModel):
    t: float
    theta: list[float]


class PushSampleResponse(BaseModel):
    alpha: Optional[float]
    n_buffered: int


class CloseSessionResponse(BaseModel):
    closed: bool
