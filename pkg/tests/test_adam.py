import numpy as np
import pytest

from gaitalpha.errors import ConfigError
from gaitalpha.nn import adam_step, init_adam

from oracles import ref_adam_run


def test_zero_gradient_leaves_params_unchanged():
    params = np.array([1.0, -2.0, 3.0])
    state = init_adam(3)
    new_params, new_state = adam_step(params, np.zeros(3), state)
    assert np.array_equal(new_params, params)
    assert new_state.step == 1


def test_first_step_magnitude_is_lr(rng):
    # bias correction makes the very first step lr * sign(g) (up to eps)
    for g0 in (0.01, 1.0, -3.7):
        params = np.zeros(4)
        state = init_adam(4, lr=0.002)
        grads = np.full(4, g0)
        new_params, _ = adam_step(params, grads, state)
        assert np.allclose(new_params, -0.002 * np.sign(g0), atol=0.002 * 1e-6)


def test_converges_on_scalar_quadratic():
    # f(w) = (w - 3)^2, 100 steps at lr 0.1 from 0, against direct iteration
    w = np.zeros(1)
    state = init_adam(1, lr=0.1)
    for _ in range(100):
        grad = 2.0 * (w - 3.0)
        w, state = adam_step(w, grad, state)
    assert abs(w[0] - 3.0) < 0.5
    ref = ref_adam_run(lambda v: 2.0 * (v - 3.0), 0.0, 100, lr=0.1)
    assert w[0] == pytest.approx(ref, abs=1e-12)


def test_moments_accumulate_and_stay_nonnegative(rng):
    params = rng.normal(size=10)
    state = init_adam(10)
    for _ in range(5):
        params, state = adam_step(params, rng.normal(size=10), state)
    assert state.step == 5
    assert np.all(state.v >= 0.0)


def test_shape_mismatch_rejected():
    with pytest.raises(ConfigError):
        adam_step(np.zeros(3), np.zeros(4), init_adam(3))


def test_inputs_not_mutated(rng):
    params = rng.normal(size=6)
    grads = rng.normal(size=6)
    p0, g0 = params.copy(), grads.copy()
    state = init_adam(6)
    adam_step(params, grads, state)
    assert np.array_equal(params, p0)
    assert np.array_equal(grads, g0)
    assert np.all(state.m == 0.0)
