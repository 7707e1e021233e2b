# Copyright (c) 2024 by Jonathan AW

"""
Unit Testing of the cross-entropy loss, the Adam optimizer, the parameter store and the
finite-difference checker.
"""
# test_losses_and_adam.py

import math

import numpy as np
import pytest

from bl.nn.adam import AdamState, adam_step
from bl.nn.gradcheck import finite_difference_gradcheck, gradcheck_report
from bl.nn.layers import dense_backward, dense_forward
from bl.nn.losses import one_hot, softmax_cross_entropy
from bl.nn.param_store import ParamStore
from exceptions import DimensionMismatchException, InvalidConfigurationException, InvalidInputDataException

# Positive Test Cases

def test_cross_entropy_uniform_logits():
    loss, _ = softmax_cross_entropy(np.zeros((1, 11)), one_hot([4], 11, np.float64))
    assert loss == pytest.approx(math.log(11), abs=1e-12)
    assert loss == pytest.approx(2.3979, abs=1e-4)

def test_cross_entropy_saturated_prediction():
    logits = np.zeros((1, 4))
    logits[0, 2] = 1000.0
    loss, _ = softmax_cross_entropy(logits, one_hot([2], 4, np.float64))
    assert loss < 1e-6

def test_cross_entropy_gradient_closed_form():
    _, grad = softmax_cross_entropy(np.zeros((1, 2)), np.array([[1.0, 0.0]]))
    # batch of one: (0.5 - 1) and (0.5 - 0)
    np.testing.assert_allclose(grad, [[-0.5, 0.5]])
    _, grad = softmax_cross_entropy(np.zeros((2, 2)), np.array([[1.0, 0.0], [1.0, 0.0]]))
    np.testing.assert_allclose(grad, [[-0.25, 0.25], [-0.25, 0.25]])

def test_adam_zero_gradient_leaves_parameters():
    params = ParamStore(np.float64)
    params.add("w", np.array([1.0, -2.0]))
    adam_step(params, AdamState())
    np.testing.assert_array_equal(params.value("w"), [1.0, -2.0])

def test_adam_first_step():
    params = ParamStore(np.float64)
    params.add("w", np.zeros(1))
    params.accumulate_grad("w", np.ones(1))
    adam_step(params, AdamState(lr=1e-3))
    assert params.value("w")[0] == pytest.approx(-1e-3, rel=1e-6)
    np.testing.assert_array_equal(params.grad("w"), [0.0])

def test_adam_step_counter():
    params = ParamStore(np.float64)
    params.add("w", np.zeros(3))
    state = AdamState()
    adam_step(params, state)
    adam_step(params, state)
    assert state.step == 2

def test_adam_empty_store_is_noop():
    state = AdamState()
    adam_step(ParamStore(), state)
    assert state.m == {}

def test_adam_grad_mask_freezes_masked_weights():
    params = ParamStore(np.float64)
    params.add("w", np.array([0.0, 0.0]))
    params.accumulate_grad("w", np.array([1.0, 1.0]))
    adam_step(params, AdamState(), grad_masks={"w": np.array([0, 1], dtype=np.uint8)})
    assert params.value("w")[0] == 0.0
    assert params.value("w")[1] < 0.0

def test_gradcheck_square_function():
    params = ParamStore(np.float64)
    params.add("w", np.array([3.0]))
    params.accumulate_grad("w", np.array([6.0]))
    error = finite_difference_gradcheck(lambda: float(params.value("w")[0] ** 2), params, h=1e-4)
    assert error < 1e-6

def test_gradcheck_dense_cross_entropy(rng):
    params = ParamStore(np.float64)
    params.add("W", rng.normal(size=(3, 4)))
    params.add("b", rng.normal(size=4))
    x = rng.normal(size=(2, 3))
    labels = one_hot([1, 3], 4, np.float64)

    def loss():
        return softmax_cross_entropy(dense_forward(x, params.value("W"), params.value("b")), labels)[0]

    logits = dense_forward(x, params.value("W"), params.value("b"))
    _, grad_logits = softmax_cross_entropy(logits, labels)
    _, grad_W, grad_b = dense_backward(x, params.value("W"), logits, grad_logits)
    params.accumulate_grad("W", grad_W)
    params.accumulate_grad("b", grad_b)
    assert finite_difference_gradcheck(loss, params, h=1e-3) < 1e-3

def test_gradcheck_report_per_tensor_and_sampling(rng):
    params = ParamStore(np.float64)
    params.add("a", rng.normal(size=50))
    params.add("b", rng.normal(size=3))
    for name in params:
        params.accumulate_grad(name, 2.0 * params.value(name))
    f = lambda: float(sum(np.sum(params.value(n) ** 2) for n in params))
    report = gradcheck_report(f, params, h=1e-4, samples_per_tensor=5)
    assert set(report) == {"a", "b"}
    assert max(report.values()) < 1e-4

def test_param_store_order_snapshot_and_astype():
    params = ParamStore()
    params.add("second", np.ones(2), prunable=True)
    params.add("first", np.zeros(3))
    assert params.names() == ["second", "first"]
    assert params.size() == 5
    snapshot = params.snapshot()
    params.value("second")[...] = 7.0
    params.restore(snapshot)
    np.testing.assert_array_equal(params.value("second"), [1.0, 1.0])
    wide = params.astype(np.float64)
    assert wide.value("first").dtype == np.float64
    assert wide.entry("second").prunable

# Negative Test Cases

def test__neg_cross_entropy_non_one_hot():
    with pytest.raises(InvalidInputDataException):
        softmax_cross_entropy(np.zeros((1, 3)), np.array([[0.5, 0.5, 0.0]]))

def test__neg_gradcheck_non_positive_step():
    params = ParamStore()
    params.add("w", np.zeros(1))
    with pytest.raises(InvalidInputDataException):
        finite_difference_gradcheck(lambda: 0.0, params, h=0.0)

def test__neg_param_store_duplicate_and_missing_names():
    params = ParamStore()
    params.add("w", np.zeros(1))
    with pytest.raises(InvalidConfigurationException):
        params.add("w", np.zeros(1))
    with pytest.raises(InvalidConfigurationException):
        params.value("missing")

def test__neg_param_store_gradient_shape():
    params = ParamStore()
    params.add("w", np.zeros(2))
    with pytest.raises(DimensionMismatchException):
        params.accumulate_grad("w", np.zeros(3))
