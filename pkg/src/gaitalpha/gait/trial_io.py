"""Strict CSV persistence for trials.

Schema (one header line, LF endings, UTF-8, 17 significant digits):

    t,theta_l_hip,theta_r_hip,theta_l_knee,theta_r_knee,theta_b,f_left_y,f_right_y

User id and condition are not part of the schema; they are carried by the
file name, ``<user>_<condition>.csv``. A stem without a recognized condition
suffix loads as condition "transparent".
"""

from __future__ import annotations

import math
import os

import numpy as np

from ..errors import TrialParseError
from .trial import CONDITIONS, Trial

HEADER = "t,theta_l_hip,theta_r_hip,theta_l_knee,theta_r_knee,theta_b,f_left_y,f_right_y"
_N_COLS = 8

__all__ = ["HEADER", "save_trial_csv", "load_trial_csv", "trial_filename"]


def trial_filename(user_id: str, condition: str) -> str:
    return f"{user_id}_{condition}.csv"


def _split_stem(path: str) -> tuple[str, str]:
    stem = os.path.splitext(os.path.basename(path))[0]
    if "_" in stem:
        user, suffix = stem.rsplit("_", 1)
        if suffix in CONDITIONS:
            return user, suffix
    return stem, "transparent"


def save_trial_csv(trial: Trial, path: str) -> None:
    """Write a trial losslessly (full float64 round-trip precision)."""
    data = np.concatenate([trial.t[:, None], trial.theta, trial.grf], axis=1)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(HEADER + "\n")
        for row in data:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def load_trial_csv(path: str) -> Trial:
    """Parse a trial file, rejecting anything that deviates from the schema.

    Raises TrialParseError naming the offending 1-based line number.
    """
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").rstrip("\r")
        if header != HEADER:
            missing = set(HEADER.split(",")) - set(header.split(","))
            detail = f" (missing column(s): {', '.join(sorted(missing))})" if missing else ""
            raise TrialParseError(f"{path}: bad header{detail}", line=1)
        rows = []
        lineno = 1
        for raw in fh:
            lineno += 1
            line = raw.rstrip("\n").rstrip("\r")
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != _N_COLS:
                raise TrialParseError(
                    f"{path}: line {lineno}: expected {_N_COLS} fields, got {len(parts)}",
                    line=lineno,
                )
            try:
                values = [float(p) for p in parts]
            except ValueError as exc:
                raise TrialParseError(f"{path}: line {lineno}: {exc}", line=lineno) from exc
            if any(not math.isfinite(v) for v in values):
                raise TrialParseError(f"{path}: line {lineno}: non-finite value", line=lineno)
            if rows and values[0] <= rows[-1][0]:
                raise TrialParseError(
                    f"{path}: line {lineno}: time not strictly increasing", line=lineno
                )
            rows.append(values)
    if len(rows) < 2:
        raise TrialParseError(f"{path}: fewer than two data rows", line=lineno)
    data = np.asarray(rows, dtype=np.float64)
    dt = np.median(np.diff(data[:, 0]))
    user_id, condition = _split_stem(path)
    try:
        return Trial(
            user_id=user_id,
            condition=condition,
            t=data[:, 0],
            theta=data[:, 1:6],
            grf=data[:, 6:8],
            sample_rate_hz=1.0 / dt,
        )
    except Exception as exc:
        raise TrialParseError(f"{path}: {exc}", line=0) from exc
