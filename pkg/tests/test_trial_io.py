import numpy as np
import pytest

from gaitalpha.errors import TrialParseError
from gaitalpha.gait import GaitSynthParams, load_trial_csv, save_trial_csv, synth_gait
from gaitalpha.gait.trial_io import HEADER


@pytest.fixture
def saved(tmp_path, small_trial):
    path = tmp_path / "u00_transparent.csv"
    save_trial_csv(small_trial, str(path))
    return path


def test_round_trip_is_lossless(saved, small_trial):
    loaded = load_trial_csv(str(saved))
    assert np.array_equal(loaded.t, small_trial.t)
    assert np.array_equal(loaded.theta, small_trial.theta)
    assert np.array_equal(loaded.grf, small_trial.grf)
    assert loaded.user_id == small_trial.user_id
    assert loaded.condition == small_trial.condition
    assert loaded.sample_rate_hz == pytest.approx(small_trial.sample_rate_hz, rel=1e-9)


def test_save_is_byte_deterministic(tmp_path, small_trial):
    p1, p2 = tmp_path / "a_transparent.csv", tmp_path / "b_transparent.csv"
    save_trial_csv(small_trial, str(p1))
    save_trial_csv(small_trial, str(p2))
    assert p1.read_bytes() == p2.read_bytes()


def test_row_count_matches_duration(tmp_path):
    trial = synth_gait(GaitSynthParams(seed=1), 60.0)
    path = tmp_path / "u01_rendering.csv"
    save_trial_csv(trial, str(path))
    n_rows = sum(1 for _ in open(path)) - 1
    assert abs(n_rows - 60 * 333) <= 1


def test_missing_column_named_in_error(tmp_path, saved):
    content = saved.read_text().splitlines()
    header = content[0].replace(",f_right_y", "")
    body = ["\n".join([header] + [line.rsplit(",", 1)[0] for line in content[1:]])]
    bad = tmp_path / "bad_transparent.csv"
    bad.write_text(body[0])
    with pytest.raises(TrialParseError, match="f_right_y"):
        load_trial_csv(str(bad))


def test_wrong_field_count_names_line(tmp_path, saved):
    lines = saved.read_text().splitlines()
    lines[3] = lines[3] + ",42"
    bad = tmp_path / "bad2_transparent.csv"
    bad.write_text("\n".join(lines) + "\n")
    with pytest.raises(TrialParseError, match="line 4"):
        load_trial_csv(str(bad))


def test_nan_rejected_with_line(tmp_path, saved):
    lines = saved.read_text().splitlines()
    parts = lines[5].split(",")
    parts[2] = "nan"
    lines[5] = ",".join(parts)
    bad = tmp_path / "bad3_transparent.csv"
    bad.write_text("\n".join(lines) + "\n")
    with pytest.raises(TrialParseError, match="line 6"):
        load_trial_csv(str(bad))


def test_non_monotonic_time_rejected(tmp_path, saved):
    lines = saved.read_text().splitlines()
    lines[4], lines[5] = lines[5], lines[4]
    bad = tmp_path / "bad4_transparent.csv"
    bad.write_text("\n".join(lines) + "\n")
    with pytest.raises(TrialParseError, match="increasing"):
        load_trial_csv(str(bad))


def test_condition_from_filename(tmp_path, small_trial):
    path = tmp_path / "subjectA_rendering.csv"
    save_trial_csv(small_trial, str(path))
    loaded = load_trial_csv(str(path))
    assert loaded.user_id == "subjectA"
    assert loaded.condition == "rendering"
    plain = tmp_path / "subjectB.csv"
    save_trial_csv(small_trial, str(plain))
    assert load_trial_csv(str(plain)).condition == "transparent"


def test_header_is_exact_contract(saved):
    assert saved.read_text().splitlines()[0] == HEADER
    assert HEADER == "t,theta_l_hip,theta_r_hip,theta_l_knee,theta_r_knee,theta_b,f_left_y,f_right_y"
