import numpy as np
import pytest
from dataclasses import replace

from gaitalpha.errors import InvalidArgumentError, InvalidStateError
from gaitalpha.nn import (
    finite_diff_grad,
    gradient_check,
    model_backward,
    model_forward,
)
from gaitalpha.nn.model import DenseParams

from test_nn_forward import random_model


def test_zero_gradient_at_exact_target(rng):
    m = random_model(8)
    x = rng.normal(size=(99, 5))
    alpha, cache = model_forward(x, m, training=True)
    grads = model_backward(cache, x, m, target=alpha)
    assert grads.max_abs() == 0.0


def test_dense_out_bias_closed_form(rng):
    # Zero output layer fixes alpha at 0.5, so d(alpha-t)^2/db = 2(0.5-t)/4.
    m = random_model(9)
    m = replace(m, dense_out=DenseParams(np.zeros((10, 1)), np.zeros(1)))
    x = rng.normal(size=(99, 5))
    target = 0.2
    _, cache = model_forward(x, m, training=True)
    grads = model_backward(cache, x, m, target=target)
    expected = 2.0 * (0.5 - target) * 0.25
    assert grads.b_out[0] == pytest.approx(expected, rel=1e-12)
    # with zero outgoing weights nothing upstream receives any signal
    assert np.all(grads.w_hidden == 0.0)
    assert np.all(grads.w_in == 0.0)


def test_matches_finite_differences(rng):
    for seed in (0, 1, 2):
        m = random_model(seed)
        x = rng.normal(size=(99, 5))
        target = float(rng.uniform())
        assert gradient_check(m, x, target) <= 1e-5


def test_matches_finite_differences_window_one(rng):
    m = random_model(21, window_len=1)
    x = rng.normal(size=(1, 5))
    assert gradient_check(m, x, 0.7) <= 1e-5


def test_cache_window_mismatch_rejected(rng):
    m = random_model(10)
    x = rng.normal(size=(99, 5))
    _, cache = model_forward(x, m, training=True)
    with pytest.raises(InvalidStateError):
        model_backward(cache, x + 1e-9, m, target=0.5)


def test_cache_model_mismatch_rejected(rng):
    m = random_model(10)
    other = random_model(11, hidden_units=12)
    x = rng.normal(size=(99, 5))
    _, cache = model_forward(x, m, training=True)
    with pytest.raises(InvalidStateError):
        model_backward(cache, x, other, target=0.5)


class TestFiniteDiffOracle:
    def test_output_bias_closed_form(self, rng):
        # Zero output weights pin alpha at sigmoid(b_out); the closed-form
        # gradient wrt b_out is 2(alpha-t) * alpha(1-alpha).
        m = random_model(12)
        m = replace(m, dense_out=DenseParams(np.zeros((10, 1)), np.zeros(1)))
        g = finite_diff_grad(m, rng.normal(size=(99, 5)), target=0.2)
        assert g.b_out[0] == pytest.approx(2.0 * (0.5 - 0.2) * 0.25, rel=1e-7)

    def test_step_size_consistency(self):
        # central differences converge at O(eps^2): two step sizes must agree
        m = random_model(12, window_len=1, spread=0.05)
        x = np.full((1, 5), 0.3)
        g1 = finite_diff_grad(m, x, target=0.4, eps=1e-6).to_vector()
        g2 = finite_diff_grad(m, x, target=0.4, eps=2e-6).to_vector()
        assert np.max(np.abs(g1 - g2)) < 1e-9

    def test_eps_zero_rejected(self, rng):
        m = random_model(13)
        with pytest.raises(InvalidArgumentError):
            finite_diff_grad(m, rng.normal(size=(99, 5)), 0.5, eps=0.0)

    def test_gradient_shapes_match_parameters(self, rng):
        m = random_model(14)
        g = finite_diff_grad(m, rng.normal(size=(99, 5)), 0.5)
        assert g.w_in.shape == m.lstm.w_in.shape
        assert g.u_rec.shape == m.lstm.u_rec.shape
        assert g.bias.shape == m.lstm.bias.shape
        assert g.w_hidden.shape == m.dense_hidden.weight.shape
        assert g.b_hidden.shape == m.dense_hidden.bias.shape
        assert g.w_out.shape == m.dense_out.weight.shape
        assert g.b_out.shape == m.dense_out.bias.shape
