"""Leave-one-user-out cross-validation.

For every held-out user and both window variants (instantaneous posture and
~300 ms history) a model is trained on all remaining users and evaluated on
the held-out one. Standardization statistics and batches are built strictly
from the training split. Train MSE is a post-hoc stride-1 evaluation on the
full training set, not the running training loss.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ..errors import InvalidArgumentError
from ..gait.trial import Trial
from .metrics import evaluate
from .trainer import TrainConfig, train

VARIANTS = (("tw0", 1), ("tw300", 99))

LOOCV_CSV_HEADER = "train_users,test_user,variant,train_mse,test_mse,r2_test"

__all__ = ["LoocvRow", "loocv", "write_loocv_csv", "LOOCV_CSV_HEADER", "VARIANTS"]


@dataclass(frozen=True)
class LoocvRow:
    train_users: tuple
    test_user: str
    variant: str
    train_mse: float
    test_mse: float
    r2_test: float


def loocv(trials_by_user: dict[str, list[Trial]], cfg: TrainConfig, seed: int) -> list[LoocvRow]:
    """One row per (held-out user, variant); deterministic for a given seed."""
    users = sorted(trials_by_user)
    if len(users) < 2:
        raise InvalidArgumentError("leave-one-out needs at least 2 users")
    for user, trials in trials_by_user.items():
        if not trials:
            raise InvalidArgumentError(f"user {user!r} has no trials")
    rows = []
    for fold, test_user in enumerate(users):
        train_users = tuple(u for u in users if u != test_user)
        train_trials = [tr for u in train_users for tr in trials_by_user[u]]
        test_trials = trials_by_user[test_user]
        for variant_idx, (variant, window_len) in enumerate(VARIANTS):
            fold_cfg = replace(cfg, window_len=window_len)
            fold_seed = int(
                np.random.SeedSequence((seed, fold, variant_idx)).generate_state(1)[0]
            )
            result = train(train_trials, fold_cfg, seed=fold_seed)
            train_report = evaluate(result.model, train_trials, min_total=cfg.min_total_force_n)
            test_report = evaluate(result.model, test_trials, min_total=cfg.min_total_force_n)
            rows.append(
                LoocvRow(
                    train_users=train_users,
                    test_user=test_user,
                    variant=variant,
                    train_mse=train_report.mse,
                    test_mse=test_report.mse,
                    r2_test=test_report.r2,
                )
            )
    return rows


def write_loocv_csv(rows: list[LoocvRow], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(LOOCV_CSV_HEADER + "\n")
        for r in rows:
            fh.write(
                f"{'+'.join(r.train_users)},{r.test_user},{r.variant},"
                f"{r.train_mse:.17g},{r.test_mse:.17g},{r.r2_test:.17g}\n"
            )
