"""HTTP service wrapping the estimator package.

Bulk commands (synthesize, train, evaluate, cross-validate, bench, stream,
compare) run synchronously and write their CSV/model artifacts plus one run
manifest on the service host. Live streaming clients open a session and push
kinematic samples one at a time.
"""

from __future__ import annotations

import glob as globmod
import itertools
import os
import threading
import time

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..controlsim.compare import closed_loop_compare, write_compare_csv
from ..errors import (
    DivergedTrainingError,
    GaitAlphaError,
    InvalidArgumentError,
)
from ..gait.synth import GaitSynthParams, condition_tweak, sample_user_params, synth_gait
from ..gait.trial import CONDITIONS, Trial
from ..gait.trial_io import load_trial_csv, save_trial_csv, trial_filename
from ..manifest import RunManifest, manifest_path, write_manifest
from ..streaming.bench import bench_latency, write_latency_csv
from ..streaming.persist import load_model, save_model
from ..streaming.ring import StreamingPredictor, stream_trial
from ..training.loocv import loocv, write_loocv_csv
from ..training.metrics import evaluate
from ..training.trainer import TrainConfig, train
from . import schemas as s

__all__ = ["create_app"]


def _resolve_trials(req: s.TrialSelector) -> list[str]:
    paths = list(req.trials)
    if req.trials_glob:
        matches = sorted(globmod.glob(req.trials_glob))
        if not matches:
            raise InvalidArgumentError(f"no trial files match glob {req.trials_glob!r}")
        paths.extend(matches)
    if not paths:
        raise InvalidArgumentError("no trial files given")
    missing = [p for p in paths if not os.path.isfile(p)]
    if missing:
        raise InvalidArgumentError(f"missing trial file(s): {', '.join(missing)}")
    return paths


def _load_trials(paths: list[str]) -> list[Trial]:
    return [load_trial_csv(p) for p in paths]


def _train_config(settings: s.TrainSettings) -> TrainConfig:
    return TrainConfig(
        epochs=settings.epochs,
        batch_size=settings.batch_size,
        stride=settings.stride,
        window_len=settings.window_len,
        hidden_units=settings.hidden_units,
        noise_sigma=settings.noise_sigma,
        learning_rate=settings.learning_rate,
        grad_clip_norm=settings.grad_clip_norm,
        min_total_force_n=settings.min_total_force_n,
    )


def create_app() -> FastAPI:
    app = FastAPI(title="gaitalpha", version=__version__)
    app.state.sessions = {}
    app.state.session_lock = threading.Lock()
    app.state.session_counter = itertools.count(1)

    @app.exception_handler(GaitAlphaError)
    async def _gaitalpha_error(request: Request, exc: GaitAlphaError):
        # Diverged training is a runtime/numerical failure; everything else
        # raised deliberately by the package is a usage/config/data problem.
        status = 500 if isinstance(exc, DivergedTrainingError) else 400
        return JSONResponse(
            status_code=status,
            content=s.ErrorResponse(error=type(exc).__name__, message=str(exc)).model_dump(),
        )

    @app.exception_handler(FileNotFoundError)
    async def _missing_file(request: Request, exc: FileNotFoundError):
        return JSONResponse(
            status_code=400,
            content=s.ErrorResponse(error="FileNotFoundError", message=str(exc)).model_dump(),
        )

    @app.get("/health", response_model=s.HealthResponse)
    def health():
        return s.HealthResponse(status="ok", version=__version__)

    @app.post("/synth", response_model=s.SynthResponse)
    def synth(req: s.SynthRequest):
        t0 = time.perf_counter()
        bad = [c for c in req.conditions if c not in CONDITIONS]
        if bad or not req.conditions:
            raise InvalidArgumentError(f"conditions must be drawn from {CONDITIONS}")
        overrides = req.params.as_kwargs() if req.params else {}
        base = GaitSynthParams(**overrides)
        os.makedirs(req.out_dir, exist_ok=True)
        files = []
        for u in range(req.n_users):
            user_id = f"u{u:02d}"
            user_params = sample_user_params(base, req.seed, u)
            for c_idx, condition in enumerate(req.conditions):
                trial_seed = int(np.random.SeedSequence((req.seed, u, c_idx)).generate_state(1)[0])
                params = condition_tweak(user_params, condition, trial_seed)
                trial = synth_gait(params, req.duration_s, user_id=user_id, condition=condition)
                path = os.path.join(req.out_dir, trial_filename(user_id, condition))
                save_trial_csv(trial, path)
                files.append(path)
        man = RunManifest(
            command="synth",
            config=req.model_dump(),
            seeds={"corpus": req.seed},
            outputs=list(files),
            tool_version=__version__,
        ).finalize(time.perf_counter() - t0)
        man_path = write_manifest(man, manifest_path(req.out_dir))
        return s.SynthResponse(files=files, manifest=man_path)

    @app.post("/train", response_model=s.TrainResponse)
    def train_cmd(req: s.TrainRequest):
        t0 = time.perf_counter()
        paths = _resolve_trials(req)
        trials = _load_trials(paths)
        result = train(trials, _train_config(req.settings), seed=req.seed)
        save_model(result.model, req.out_model)
        log_path = req.out_model + ".train_log.csv"
        with open(log_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("epoch,train_mse\n")
            for i, loss in enumerate(result.epoch_losses, start=1):
                fh.write(f"{i},{loss:.17g}\n")
        man = RunManifest(
            command="train",
            config={**req.settings.model_dump(), "out_model": req.out_model},
            seeds={"train": req.seed},
            inputs=paths,
            outputs=[req.out_model, log_path],
            tool_version=__version__,
        ).finalize(time.perf_counter() - t0)
        man_path = write_manifest(man, manifest_path(req.out_model))
        return s.TrainResponse(
            model_path=req.out_model,
            log_path=log_path,
            epoch_losses=result.epoch_losses,
            n_windows=result.n_windows,
            manifest=man_path,
        )

    @app.post("/eval", response_model=s.EvalResponse)
    def eval_cmd(req: s.EvalRequest):
        t0 = time.perf_counter()
        paths = _resolve_trials(req)
        model = load_model(req.model_path)
        report = evaluate(model, _load_trials(paths))
        csv_path = None
        man_path = None
        if req.out_csv:
            csv_path = req.out_csv
            with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write("scope,r2,mse,n_windows\n")
                fh.write(f"overall,{report.r2:.17g},{report.mse:.17g},{report.n_windows}\n")
                for user in sorted(report.per_user):
                    ue = report.per_user[user]
                    fh.write(f"{user},{ue.r2:.17g},{ue.mse:.17g},{ue.n_windows}\n")
            man = RunManifest(
                command="eval",
                config={"model_path": req.model_path, "out_csv": req.out_csv},
                inputs=paths + [req.model_path],
                outputs=[csv_path],
                tool_version=__version__,
            ).finalize(time.perf_counter() - t0)
            man_path = write_manifest(man, manifest_path(csv_path))
        return s.EvalResponse(
            r2=report.r2,
            mse=report.mse,
            n_windows=report.n_windows,
            per_user={
                u: s.UserEvalModel(r2=ue.r2, mse=ue.mse, n_windows=ue.n_windows)
                for u, ue in report.per_user.items()
            },
            csv_path=csv_path,
            manifest=man_path,
        )

    @app.post("/loocv", response_model=s.LoocvResponse)
    def loocv_cmd(req: s.LoocvRequest):
        t0 = time.perf_counter()
        paths = _resolve_trials(req)
        trials = _load_trials(paths)
        by_user: dict[str, list[Trial]] = {}
        for trial in trials:
            by_user.setdefault(trial.user_id, []).append(trial)
        rows = loocv(by_user, _train_config(req.settings), seed=req.seed)
        write_loocv_csv(rows, req.out_csv)
        man = RunManifest(
            command="loocv",
            config={**req.settings.model_dump(), "out_csv": req.out_csv},
            seeds={"loocv": req.seed},
            inputs=paths,
            outputs=[req.out_csv],
            tool_version=__version__,
        ).finalize(time.perf_counter() - t0)
        man_path = write_manifest(man, manifest_path(req.out_csv))
        return s.LoocvResponse(
            rows=[
                s.LoocvRowModel(
                    train_users=list(r.train_users),
                    test_user=r.test_user,
                    variant=r.variant,
                    train_mse=r.train_mse,
                    test_mse=r.test_mse,
                    r2_test=r.r2_test,
                )
                for r in rows
            ],
            csv_path=req.out_csv,
            manifest=man_path,
        )

    @app.post("/bench", response_model=s.BenchResponse)
    def bench_cmd(req: s.BenchRequest):
        t0 = time.perf_counter()
        model = load_model(req.model_path)
        stats = bench_latency(model, req.n_predictions, req.warmup, seed=req.seed)
        write_latency_csv(stats, req.out_csv)
        man = RunManifest(
            command="bench",
            config=req.model_dump(),
            seeds={"bench": req.seed},
            inputs=[req.model_path],
            outputs=[req.out_csv],
            tool_version=__version__,
        ).finalize(time.perf_counter() - t0)
        man_path = write_manifest(man, manifest_path(req.out_csv))
        return s.BenchResponse(
            n=stats.n,
            mean_us=stats.mean_us,
            std_us=stats.std_us,
            p99_us=stats.p99_us,
            max_us=stats.max_us,
            csv_path=req.out_csv,
            manifest=man_path,
        )

    @app.post("/stream", response_model=s.StreamResponse)
    def stream_cmd(req: s.StreamRequest):
        t0 = time.perf_counter()
        model = load_model(req.model_path)
        trial = load_trial_csv(req.trial_path)
        series = stream_trial(model, trial)
        with open(req.out_csv, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("t,alpha_hat\n")
            for ti, ai in zip(series.t, series.alpha):
                fh.write(f"{ti:.17g},{ai:.17g}\n")
        man = RunManifest(
            command="stream",
            config=req.model_dump(),
            inputs=[req.model_path, req.trial_path],
            outputs=[req.out_csv],
            tool_version=__version__,
        ).finalize(time.perf_counter() - t0)
        man_path = write_manifest(man, manifest_path(req.out_csv))
        return s.StreamResponse(n_predictions=len(series), csv_path=req.out_csv, manifest=man_path)

    @app.post("/compare", response_model=s.CompareResponse)
    def compare_cmd(req: s.CompareRequest):
        t0 = time.perf_counter()
        model = load_model(req.model_path)
        trial = load_trial_csv(req.trial_path)
        report = closed_loop_compare(trial, model, lo=req.lo, hi=req.hi)
        write_compare_csv(report, req.out_csv)
        man = RunManifest(
            command="compare",
            config=req.model_dump(),
            inputs=[req.model_path, req.trial_path],
            outputs=[req.out_csv],
            tool_version=__version__,
        ).finalize(time.perf_counter() - t0)
        man_path = write_manifest(man, manifest_path(req.out_csv))
        return s.CompareResponse(
            mse=report.mse,
            r2=report.r2,
            stance_frac_truth=s.none_if_nan(report.stance_frac_truth),
            stance_frac_pred=s.none_if_nan(report.stance_frac_pred),
            mean_abs_alpha_err=report.mean_abs_alpha_err,
            csv_path=req.out_csv,
            manifest=man_path,
        )

    @app.post("/sessions", response_model=s.OpenSessionResponse)
    def open_session(req: s.OpenSessionRequest):
        model = load_model(req.model_path)
        predictor = StreamingPredictor(model)
        with app.state.session_lock:
            sid = f"s{next(app.state.session_counter)}"
            app.state.sessions[sid] = predictor
        return s.OpenSessionResponse(session_id=sid, window_len=model.window_len)

    @app.post("/sessions/{sid}/sample", response_model=s.PushSampleResponse)
    def push_sample(sid: str, req: s.PushSampleRequest):
        predictor = app.state.sessions.get(sid)
        if predictor is None:
            raise InvalidArgumentError(f"unknown session {sid!r}")
        alpha = predictor.push_sample(np.asarray(req.theta, dtype=float))
        return s.PushSampleResponse(
            alpha=None if alpha is None else float(alpha),
            n_buffered=predictor.n_buffered,
        )

    @app.delete("/sessions/{sid}", response_model=s.CloseSessionResponse)
    def close_session(sid: str):
        with app.state.session_lock:
            existed = app.state.sessions.pop(sid, None)
        if existed is None:
            raise InvalidArgumentError(f"unknown session {sid!r}")
        return s.CloseSessionResponse(closed=True)

    return app
