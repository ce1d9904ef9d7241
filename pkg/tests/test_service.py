import numpy as np
import pytest
from fastapi.testclient import TestClient

from gaitalpha.gait import load_trial_csv, save_trial_csv
from gaitalpha.service import create_app
from gaitalpha.streaming import save_model


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app(), raise_server_exceptions=False)


@pytest.fixture(scope="module")
def corpus_dir(tmp_path_factory, client):
    out = tmp_path_factory.mktemp("corpus")
    resp = client.post("/synth", json={
        "out_dir": str(out),
        "n_users": 3,
        "duration_s": 10.0,
        "conditions": ["transparent"],
        "seed": 0,
    })
    assert resp.status_code == 200, resp.text
    return out, resp.json()


@pytest.fixture(scope="module")
def model_path(tmp_path_factory, trained_tiny):
    path = tmp_path_factory.mktemp("models") / "m.bin"
    save_model(trained_tiny, str(path))
    return str(path)


def test_health(client):
    body = client.get("/health").json()
    assert body["status"] == "ok"


class TestSynth:
    def test_writes_one_file_per_user_condition(self, corpus_dir):
        out, body = corpus_dir
        assert len(body["files"]) == 3
        assert sorted(body["files"]) == sorted(str(p) for p in out.glob("*.csv"))
        assert (out / "manifest.json").exists()

    def test_files_loadable_and_deterministic(self, client, corpus_dir, tmp_path):
        out, body = corpus_dir
        trial = load_trial_csv(body["files"][0])
        assert trial.user_id == "u00"
        resp = client.post("/synth", json={
            "out_dir": str(tmp_path / "again"),
            "n_users": 3,
            "duration_s": 10.0,
            "conditions": ["transparent"],
            "seed": 0,
        })
        first = open(body["files"][0], "rb").read()
        second = open(resp.json()["files"][0], "rb").read()
        assert first == second

    def test_both_conditions(self, client, tmp_path):
        resp = client.post("/synth", json={
            "out_dir": str(tmp_path / "two"),
            "n_users": 2,
            "duration_s": 6.0,
            "conditions": ["transparent", "rendering"],
            "seed": 1,
        })
        assert len(resp.json()["files"]) == 4

    def test_bad_condition_rejected(self, client, tmp_path):
        resp = client.post("/synth", json={
            "out_dir": str(tmp_path / "bad"),
            "n_users": 1,
            "conditions": ["sideways"],
        })
        assert resp.status_code == 400
        assert "condition" in resp.json()["message"]

    def test_bad_duration_rejected(self, client, tmp_path):
        resp = client.post("/synth", json={
            "out_dir": str(tmp_path / "bad2"),
            "duration_s": -3.0,
            "conditions": ["transparent"],
        })
        assert resp.status_code == 400


class TestTrainEval:
    @pytest.fixture(scope="class")
    def trained(self, client, corpus_dir, tmp_path_factory):
        out, body = corpus_dir
        model_out = tmp_path_factory.mktemp("m") / "model.bin"
        resp = client.post("/train", json={
            "out_model": str(model_out),
            "trials_glob": str(out / "*.csv"),
            "settings": {"epochs": 1, "stride": 15},
            "seed": 0,
        })
        assert resp.status_code == 200, resp.text
        return resp.json()

    def test_train_outputs(self, trained):
        import os

        assert os.path.exists(trained["model_path"])
        assert os.path.exists(trained["log_path"])
        assert os.path.exists(trained["manifest"])
        assert len(trained["epoch_losses"]) == 1
        with open(trained["log_path"]) as fh:
            assert fh.readline().strip() == "epoch,train_mse"

    def test_eval_runs_on_trained_model(self, client, corpus_dir, trained, tmp_path):
        out, _ = corpus_dir
        resp = client.post("/eval", json={
            "model_path": trained["model_path"],
            "trials_glob": str(out / "*.csv"),
            "out_csv": str(tmp_path / "eval.csv"),
        })
        assert resp.status_code == 200
        body = resp.json()
        assert body["n_windows"] > 0
        assert set(body["per_user"]) == {"u00", "u01", "u02"}
        lines = open(tmp_path / "eval.csv").read().splitlines()
        assert lines[0] == "scope,r2,mse,n_windows"
        assert lines[1].startswith("overall,")

    def test_empty_glob_lists_pattern(self, client, tmp_path):
        resp = client.post("/train", json={
            "out_model": str(tmp_path / "m.bin"),
            "trials_glob": str(tmp_path / "nothing*.csv"),
        })
        assert resp.status_code == 400
        assert "nothing*.csv" in resp.json()["message"]

    def test_epochs_zero_rejected(self, client, corpus_dir, tmp_path):
        out, _ = corpus_dir
        resp = client.post("/train", json={
            "out_model": str(tmp_path / "m.bin"),
            "trials_glob": str(out / "*.csv"),
            "settings": {"epochs": 0},
        })
        assert resp.status_code == 400


class TestBenchStreamCompare:
    def test_bench(self, client, model_path, tmp_path):
        resp = client.post("/bench", json={
            "model_path": model_path,
            "out_csv": str(tmp_path / "lat.csv"),
            "n_predictions": 1000,
            "warmup": 100,
        })
        assert resp.status_code == 200
        body = resp.json()
        assert body["max_us"] >= body["p99_us"] >= body["mean_us"] > 0
        lines = open(tmp_path / "lat.csv").read().splitlines()
        assert lines[0] == "n,mean_us,std_us,p99_us,max_us"

    def test_stream_length_contract(self, client, model_path, corpus_dir, tmp_path):
        out, body = corpus_dir
        trial_path = body["files"][0]
        resp = client.post("/stream", json={
            "model_path": model_path,
            "trial_path": trial_path,
            "out_csv": str(tmp_path / "alpha.csv"),
        })
        assert resp.status_code == 200
        n_trial = len(load_trial_csv(trial_path))
        assert resp.json()["n_predictions"] == n_trial - 98

    def test_compare_report_schema(self, client, model_path, corpus_dir, tmp_path):
        out, body = corpus_dir
        resp = client.post("/compare", json={
            "model_path": model_path,
            "trial_path": body["files"][1],
            "out_csv": str(tmp_path / "cmp.csv"),
        })
        assert resp.status_code == 200
        lines = open(tmp_path / "cmp.csv").read().splitlines()
        assert lines[0] == "metric,value"
        names = [ln.split(",")[0] for ln in lines[1:]]
        assert names == ["mse", "r2", "stance_frac_truth", "stance_frac_pred",
                         "mean_abs_alpha_err"]

    def test_missing_model_file(self, client, tmp_path):
        resp = client.post("/bench", json={
            "model_path": str(tmp_path / "absent.bin"),
            "out_csv": str(tmp_path / "x.csv"),
        })
        assert resp.status_code == 400


class TestLoocvEndpoint:
    def test_loocv_rows_and_csv(self, client, corpus_dir, tmp_path):
        out, _ = corpus_dir
        resp = client.post("/loocv", json={
            "out_csv": str(tmp_path / "loocv.csv"),
            "trials_glob": str(out / "*.csv"),
            "settings": {"epochs": 1, "stride": 20},
            "seed": 0,
        })
        assert resp.status_code == 200
        rows = resp.json()["rows"]
        assert len(rows) == 6  # 3 users x 2 variants
        lines = open(tmp_path / "loocv.csv").read().splitlines()
        assert lines[0] == "train_users,test_user,variant,train_mse,test_mse,r2_test"
        assert len(lines) == 7

    def test_single_user_rejected(self, client, corpus_dir, tmp_path):
        out, _ = corpus_dir
        resp = client.post("/loocv", json={
            "out_csv": str(tmp_path / "x.csv"),
            "trials": [str(out / "u00_transparent.csv")],
            "settings": {"epochs": 1},
        })
        assert resp.status_code == 400


class TestSessions:
    def test_push_stream_matches_offline(self, client, model_path, corpus_dir):
        out, body = corpus_dir
        trial = load_trial_csv(body["files"][2])
        opened = client.post("/sessions", json={"model_path": model_path}).json()
        sid = opened["session_id"]
        assert opened["window_len"] == 99
        alphas = []
        for i in range(120):
            r = client.post(f"/sessions/{sid}/sample",
                            json={"t": float(trial.t[i]), "theta": list(trial.theta[i])})
            alpha = r.json()["alpha"]
            if i < 98:
                assert alpha is None
            else:
                alphas.append(alpha)
        from gaitalpha.streaming import load_model, stream_trial

        offline = stream_trial(load_model(model_path), trial)
        assert np.max(np.abs(np.array(alphas) - offline.alpha[: len(alphas)])) < 1e-9
        assert client.delete(f"/sessions/{sid}").json()["closed"] is True
        assert client.delete(f"/sessions/{sid}").status_code == 400

    def test_non_finite_sample_rejected(self, client, model_path):
        sid = client.post("/sessions", json={"model_path": model_path}).json()["session_id"]
        r = client.post(f"/sessions/{sid}/sample",
                        json={"t": 0.0, "theta": [0.0, 1e400, 0.0, 0.0, 0.0]})
        assert r.status_code == 400
        client.delete(f"/sessions/{sid}")

    def test_unknown_session(self, client):
        r = client.post("/sessions/nope/sample", json={"t": 0.0, "theta": [0.0] * 5})
        assert r.status_code == 400
