"""Command-line client for the gaitalpha service.

Without ``--server`` every command talks to an in-process instance of the
service (no network, same machine, same filesystem); with ``--server URL``
it becomes a plain HTTP client of a running instance.

Exit codes: 0 success, 2 usage/config error, 3 runtime/numerical failure.
"""

from __future__ import annotations

import asyncio
import json
import sys

import click
import httpx

SERVER_HELP = "Base URL of a running service; defaults to an in-process instance."


def _call(server: str | None, method: str, path: str, payload: dict | None = None) -> dict:
    try:
        if server:
            with httpx.Client(base_url=server, timeout=None) as client:
                resp = client.request(method, path, json=payload)
        else:
            resp = asyncio.run(_call_inproc(method, path, payload))
    except httpx.ConnectError as exc:
        click.echo(f"error: cannot reach server: {exc}", err=True)
        sys.exit(2)
    except httpx.HTTPError as exc:
        click.echo(f"error: transport failure: {exc}", err=True)
        sys.exit(3)
    if resp.status_code >= 400:
        try:
            body = resp.json()
            message = f"{body.get('error', 'error')}: {body.get('message', resp.text)}"
        except json.JSONDecodeError:
            message = resp.text
        click.echo(f"error: {message}", err=True)
        sys.exit(2 if resp.status_code < 500 else 3)
    return resp.json()


async def _call_inproc(method: str, path: str, payload: dict | None) -> httpx.Response:
    from .service.app import create_app

    transport = httpx.ASGITransport(app=create_app())
    async with httpx.AsyncClient(transport=transport, base_url="http://gaitalpha", timeout=None) as client:
        return await client.request(method, path, json=payload)


@click.group()
@click.option("--server", "-s", envvar="GAITALPHA_SERVER", default=None, help=SERVER_HELP)
@click.pass_context
def main(ctx, server):
    """Estimate exoskeleton weight distribution from joint kinematics."""
    ctx.obj = server


@main.command()
@click.argument("out_dir", type=click.Path())
@click.option("--users", default=6, show_default=True, help="Number of synthetic users.")
@click.option("--duration", default=60.0, show_default=True, help="Trial duration in seconds.")
@click.option("--conditions", default="transparent,rendering", show_default=True,
              help="Comma-separated walking conditions.")
@click.option("--seed", default=0, show_default=True)
@click.option("--cadence", default=None, type=float, help="Override cadence (steps/min).")
@click.option("--stance-fraction", default=None, type=float)
@click.option("--double-stance-fraction", default=None, type=float)
@click.pass_obj
def synth(server, out_dir, users, duration, conditions, seed, cadence,
          stance_fraction, double_stance_fraction):
    """Generate a corpus of synthetic gait trials (one CSV per user/condition)."""
    params = {}
    if cadence is not None:
        params["cadence_spm"] = cadence
    if stance_fraction is not None:
        params["stance_fraction"] = stance_fraction
    if double_stance_fraction is not None:
        params["double_stance_fraction"] = double_stance_fraction
    payload = {
        "out_dir": out_dir,
        "n_users": users,
        "duration_s": duration,
        "conditions": [c for c in conditions.split(",") if c],
        "seed": seed,
        "params": params or None,
    }
    body = _call(server, "POST", "/synth", payload)
    for f in body["files"]:
        click.echo(f)
    click.echo(f"manifest: {body['manifest']}")


def _settings_options(fn):
    fn = click.option("--epochs", default=10, show_default=True)(fn)
    fn = click.option("--batch-size", default=256, show_default=True)(fn)
    fn = click.option("--stride", default=5, show_default=True,
                      help="Samples between consecutive training windows.")(fn)
    fn = click.option("--window", default=99, show_default=True, type=click.Choice(["1", "99"]),
                      help="Window length in samples (1 = instantaneous posture).")(fn)
    fn = click.option("--hidden-units", default=10, show_default=True)(fn)
    fn = click.option("--noise-sigma", default=0.01, show_default=True)(fn)
    fn = click.option("--learning-rate", default=1e-3, show_default=True)(fn)
    return fn


def _settings_payload(epochs, batch_size, stride, window, hidden_units, noise_sigma, learning_rate):
    return {
        "epochs": epochs,
        "batch_size": batch_size,
        "stride": stride,
        "window_len": int(window),
        "hidden_units": hidden_units,
        "noise_sigma": noise_sigma,
        "learning_rate": learning_rate,
    }


@main.command()
@click.argument("out_model", type=click.Path())
@click.option("--trials", "trials_glob", required=True, help="Glob of trial CSV files.")
@_settings_options
@click.option("--seed", default=0, show_default=True)
@click.pass_obj
def train(server, out_model, trials_glob, epochs, batch_size, stride, window,
          hidden_units, noise_sigma, learning_rate, seed):
    """Train a model on trial files and write it plus a train-log CSV."""
    payload = {
        "out_model": out_model,
        "trials_glob": trials_glob,
        "settings": _settings_payload(epochs, batch_size, stride, window,
                                      hidden_units, noise_sigma, learning_rate),
        "seed": seed,
    }
    body = _call(server, "POST", "/train", payload)
    click.echo(f"model: {body['model_path']}  ({body['n_windows']} windows)")
    click.echo(f"train log: {body['log_path']}")
    click.echo(f"final train mse: {body['epoch_losses'][-1]:.6f}")


@main.command(name="eval")
@click.option("--model", "model_path", required=True, type=click.Path())
@click.option("--trials", "trials_glob", required=True, help="Glob of trial CSV files.")
@click.option("--out", "out_csv", default=None, type=click.Path(), help="Optional report CSV.")
@click.pass_obj
def eval_cmd(server, model_path, trials_glob, out_csv):
    """Evaluate a model (R^2 / MSE, per-user breakdown) on trial files."""
    payload = {"model_path": model_path, "trials_glob": trials_glob, "out_csv": out_csv}
    body = _call(server, "POST", "/eval", payload)
    click.echo(f"overall: r2={body['r2']:.4f} mse={body['mse']:.6f} n={body['n_windows']}")
    for user in sorted(body["per_user"]):
        ue = body["per_user"][user]
        click.echo(f"{user}: r2={ue['r2']:.4f} mse={ue['mse']:.6f} n={ue['n_windows']}")
    if out_csv:
        click.echo(f"report: {out_csv}")


@main.command()
@click.argument("out_csv", type=click.Path())
@click.option("--trials", "trials_glob", required=True, help="Glob of trial CSV files.")
@_settings_options
@click.option("--seed", default=0, show_default=True)
@click.pass_obj
def loocv(server, out_csv, trials_glob, epochs, batch_size, stride, window,
          hidden_units, noise_sigma, learning_rate, seed):
    """Leave-one-user-out cross-validation over both window variants."""
    payload = {
        "out_csv": out_csv,
        "trials_glob": trials_glob,
        "settings": _settings_payload(epochs, batch_size, stride, window,
                                      hidden_units, noise_sigma, learning_rate),
        "seed": seed,
    }
    body = _call(server, "POST", "/loocv", payload)
    for row in body["rows"]:
        click.echo(
            f"{row['variant']}: held out {row['test_user']}: "
            f"train mse {row['train_mse']:.5f}, test mse {row['test_mse']:.5f}, "
            f"test r2 {row['r2_test']:.4f}"
        )
    click.echo(f"report: {body['csv_path']}")


@main.command()
@click.argument("out_csv", type=click.Path())
@click.option("--model", "model_path", required=True, type=click.Path())
@click.option("-n", "--predictions", default=10000, show_default=True)
@click.option("--warmup", default=1000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.pass_obj
def bench(server, out_csv, model_path, predictions, warmup, seed):
    """Measure per-prediction latency on random windows."""
    payload = {
        "model_path": model_path,
        "out_csv": out_csv,
        "n_predictions": predictions,
        "warmup": warmup,
        "seed": seed,
    }
    body = _call(server, "POST", "/bench", payload)
    click.echo(
        f"n={body['n']} mean={body['mean_us']:.1f}us std={body['std_us']:.1f}us "
        f"p99={body['p99_us']:.1f}us max={body['max_us']:.1f}us"
    )
    click.echo(f"report: {body['csv_path']}")


@main.command()
@click.argument("out_csv", type=click.Path())
@click.option("--model", "model_path", required=True, type=click.Path())
@click.option("--trial", "trial_path", required=True, type=click.Path())
@click.pass_obj
def stream(server, out_csv, model_path, trial_path):
    """Stream a trial through a model sample by sample; write alpha-hat CSV."""
    payload = {"model_path": model_path, "trial_path": trial_path, "out_csv": out_csv}
    body = _call(server, "POST", "/stream", payload)
    click.echo(f"{body['n_predictions']} predictions -> {body['csv_path']}")


@main.command()
@click.argument("out_csv", type=click.Path())
@click.option("--model", "model_path", required=True, type=click.Path())
@click.option("--trial", "trial_path", required=True, type=click.Path())
@click.option("--lo", default=0.1, show_default=True, help="Left-stance threshold.")
@click.option("--hi", default=0.9, show_default=True, help="Right-stance threshold.")
@click.pass_obj
def compare(server, out_csv, model_path, trial_path, lo, hi):
    """Closed-loop comparison of predicted vs force-derived weight distribution."""
    payload = {
        "model_path": model_path,
        "trial_path": trial_path,
        "out_csv": out_csv,
        "lo": lo,
        "hi": hi,
    }
    body = _call(server, "POST", "/compare", payload)
    for key in ("mse", "r2", "stance_frac_truth", "stance_frac_pred", "mean_abs_alpha_err"):
        click.echo(f"{key}: {body[key]}")
    click.echo(f"report: {body['csv_path']}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
