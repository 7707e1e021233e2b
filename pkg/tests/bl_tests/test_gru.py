# Copyright (c) 2024 by Jonathan AW

"""
Unit Testing of the reset-after GRU layer.
"""
# test_gru.py

import math

import numpy as np
import pytest

from bl.nn.gradcheck import finite_difference_gradcheck
from bl.nn.gru import gru_backward, gru_forward
from bl.nn.param_store import ParamStore
from exceptions import InvalidConfigurationException
from tests.helpers import naive_gru


def make_gru_params(rng, inputs, units, dtype=np.float64, scale=0.5):
    params = ParamStore(dtype)
    params.add("gru/kernel", rng.normal(0, scale, size=(inputs, 3 * units)))
    params.add("gru/recurrent_kernel", rng.normal(0, scale, size=(units, 3 * units)))
    params.add("gru/bias", rng.normal(0, scale, size=(2, 3 * units)))
    return params

# Positive Test Cases

def test_gru_zero_weights_give_zero_state(rng):
    params = ParamStore(np.float32)
    params.add("gru/kernel", np.zeros((4, 9)))
    params.add("gru/recurrent_kernel", np.zeros((3, 9)))
    params.add("gru/bias", np.zeros((2, 9)))
    h = gru_forward(rng.normal(size=(2, 5, 4)).astype(np.float32), params, 3)
    np.testing.assert_array_equal(h, np.zeros((2, 3)))

def test_gru_scalar_single_step():
    params = ParamStore(np.float64)
    params.add("gru/kernel", np.ones((1, 3)))
    params.add("gru/recurrent_kernel", np.ones((1, 3)))
    params.add("gru/bias", np.zeros((2, 3)))
    h = gru_forward(np.ones((1, 1, 1)), params, 1)

    z = 1.0 / (1.0 + math.exp(-1.0))  # h0 = 0, so only the input term reaches the gates
    candidate = math.tanh(1.0)
    assert h[0, 0] == pytest.approx((1.0 - z) * candidate, abs=1e-12)

def test_gru_output_shape():
    params = make_gru_params(np.random.default_rng(0), 25, 128, np.float32, scale=0.05)
    h = gru_forward(np.zeros((1, 117, 25), dtype=np.float32), params, 128)
    assert h.shape == (1, 128)

def test_gru_matches_scalar_reference(rng):
    params = make_gru_params(rng, 2, 3)
    x = rng.normal(size=(2, 4, 2))
    expected = naive_gru(x, params.value("gru/kernel"), params.value("gru/recurrent_kernel"), params.value("gru/bias"), 3)
    np.testing.assert_allclose(gru_forward(x, params, 3), expected, atol=1e-5)

def test_gru_backward_gradcheck(rng):
    params = make_gru_params(rng, 3, 4)
    params.add("x", rng.normal(size=(2, 5, 3)))
    weights = rng.normal(size=(2, 4))

    def loss():
        return float(np.sum(weights * gru_forward(params.value("x"), params, 4)))

    _, cache = gru_forward(params.value("x"), params, 4, return_cache=True)
    grad_x = gru_backward(cache, params, 4, weights)
    params.accumulate_grad("x", grad_x)
    assert finite_difference_gradcheck(loss, params, h=1e-6) < 1e-4

def test_gru_custom_prefix(rng):
    params = ParamStore(np.float64)
    params.add("rnn/kernel", rng.normal(size=(2, 6)))
    params.add("rnn/recurrent_kernel", rng.normal(size=(2, 6)))
    params.add("rnn/bias", np.zeros((2, 6)))
    assert gru_forward(rng.normal(size=(1, 3, 2)), params, 2, prefix="rnn").shape == (1, 2)

# Negative Test Cases

def test__neg_gru_missing_parameter(rng):
    params = ParamStore(np.float64)
    params.add("gru/kernel", np.zeros((2, 6)))
    params.add("gru/bias", np.zeros((2, 6)))
    with pytest.raises(InvalidConfigurationException):
        gru_forward(rng.normal(size=(1, 3, 2)), params, 2)
