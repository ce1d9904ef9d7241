import numpy as np
import pytest

from gaitalpha.gait import GaitSynthParams, sample_user_params, synth_gait
from gaitalpha.nn import init_stance_model
from gaitalpha.training import TrainConfig, train


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def default_model():
    return init_stance_model(seed=7)


@pytest.fixture(scope="session")
def small_trial():
    """One 12 s default-parameter trial."""
    return synth_gait(GaitSynthParams(seed=5), 12.0, user_id="u00")


@pytest.fixture(scope="session")
def tiny_corpus():
    """Three quick users, 15 s each: enough structure to train something."""
    base = GaitSynthParams()
    return [
        synth_gait(sample_user_params(base, corpus_seed=42, user_index=u), 15.0, user_id=f"u{u:02d}")
        for u in range(3)
    ]


@pytest.fixture(scope="session")
def quick_cfg():
    return TrainConfig(epochs=2, stride=12)


@pytest.fixture(scope="session")
def trained_tiny(tiny_corpus, quick_cfg):
    """A cheap (not accurate) trained model for plumbing tests."""
    return train(tiny_corpus[:2], quick_cfg, seed=3).model
