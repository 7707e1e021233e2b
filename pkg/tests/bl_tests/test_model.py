# Copyright (c) 2024 by Jonathan AW

"""
Unit Testing of the model spec, the network builder and the end-to-end gradients.

Key Tests to Include:
- Parameter counts of the three published configurations (exact).
- Shape chain and parameter layout.
- Deterministic initialization and forward contracts of both variants.
- Closed-form count against the built store over the whole supported (L, C) grid.
- Rotation invariance of the classification when the estimator returns the rotation angle.
- Every parameter tensor's gradient against central differences (64-bit and 32-bit), plus zero and
  saturated upstream gradients.
"""
# test_model.py

import numpy as np
import pytest

from bl.factories.model_variant_factory import ModelVariantFactory
from bl.model.model_spec import ModelSpec, count_params, param_layout, shape_chain
from bl.model.network import PetCgdnn, build
from bl.nn.gradcheck import gradcheck_report
from bl.nn.losses import one_hot
from bl.nn.param_store import ParamStore
from bl.pet.phase_transformer import transform_phase_batch
from exceptions import DimensionMismatchException, InvalidConfigurationException

# Positive Test Cases

@pytest.mark.parametrize("length, classes, expected", [(128, 11, 71871), (128, 10, 71742), (1024, 24, 75340)])
def test_count_params_published_configurations(length, classes, expected):
    spec = ModelSpec(length, classes)
    assert count_params(spec) == expected
    assert sum(int(np.prod(p.shape)) for p in param_layout(spec)) == expected

@pytest.mark.parametrize("length", [128, 1024])
@pytest.mark.parametrize("classes", range(2, 25))
def test_count_params_matches_built_store(length, classes):
    spec = ModelSpec(length, classes)
    assert count_params(spec) == sum(int(np.prod(p.shape)) for p in param_layout(spec))
    assert count_params(spec) == build(spec, seed=0).params.size()

def test_count_params_part3_only():
    assert count_params(ModelSpec(128, 11, "part3_only")) == 71871 - 257

def test_build_matches_closed_form():
    model = build(ModelSpec(128, 11), seed=0)
    assert model.params.size() == 71871
    assert model.params.value("gru/recurrent_kernel").shape == (128, 384)

def test_shape_chain_l128():
    chain = dict(shape_chain(ModelSpec(128, 11)))
    assert chain["conv1"] == (1, 121, 75)
    assert chain["conv2"] == (1, 117, 25)
    assert chain["gru"] == (128,)
    assert chain["dense"] == (11,)

def test_prunable_flags():
    layout = {p.name: p.prunable for p in param_layout(ModelSpec(128, 11))}
    assert layout["estimator/kernel"] and layout["gru/recurrent_kernel"] and layout["dense/kernel"]
    assert not any(prunable for name, prunable in layout.items() if name.endswith("bias"))

def test_build_is_deterministic(toy_spec):
    a, b = build(toy_spec, seed=5), build(toy_spec, seed=5)
    for name in a.params:
        np.testing.assert_array_equal(a.params.value(name), b.params.value(name))
    c = build(toy_spec, seed=6)
    assert not np.array_equal(a.params.value("conv1/kernel"), c.params.value("conv1/kernel"))

def test_initialization_conventions(toy_model):
    U = toy_model.params.value("gru/recurrent_kernel").astype(np.float64)
    np.testing.assert_allclose(U @ U.T, np.eye(128), atol=1e-5)
    assert not np.any(toy_model.params.value("gru/bias"))
    assert not np.any(toy_model.params.value("estimator/bias"))

def test_forward_contract(toy_model, rng):
    x = rng.normal(size=(4, 2, 16)).astype(np.float32)
    probs, phi, transformed = toy_model.forward(x)
    assert probs.shape == (4, 3) and phi.shape == (4,) and transformed.shape == (4, 2, 16)
    np.testing.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-6)
    assert toy_model.predict(x).shape == (4,)

def test_forward_is_deterministic(toy_model, rng):
    x = rng.normal(size=(3, 2, 16)).astype(np.float32)
    np.testing.assert_array_equal(toy_model.forward(x)[0], toy_model.forward(x)[0])

@pytest.mark.parametrize("theta", [0.3, -1.2, np.pi / 2, 2.5])
def test_forward_invariant_to_global_rotation_when_estimator_returns_the_angle(toy_model64, rng, theta):
    x = rng.normal(size=(4, 2, 16))
    # rotate every frame by +theta
    x_rot = transform_phase_batch(x, np.full(4, -theta))
    params = toy_model64.params
    params.value("estimator/kernel")[...] = 0.0
    params.value("estimator/bias")[...] = 0.0
    reference, _, _ = toy_model64.forward(x)

    params.value("estimator/bias")[...] = theta
    probs, phi, transformed = toy_model64.forward(x_rot)
    np.testing.assert_allclose(phi, theta)
    np.testing.assert_allclose(transformed, x, atol=1e-12)
    assert np.max(0.5 * np.abs(probs - reference).sum(axis=1)) < 1e-4


def test_part3_only_has_no_phase(rng):
    model = build(ModelSpec.toy(16, 3, "part3_only"), seed=1)
    x = rng.normal(size=(2, 2, 16)).astype(np.float32)
    _, phi, transformed = model.forward(x)
    np.testing.assert_array_equal(phi, np.zeros(2))
    np.testing.assert_array_equal(transformed, x)
    assert "estimator/kernel" not in model.params

def test_variant_factory_aliases():
    factory = ModelVariantFactory()
    assert factory.create_model("part3", 16, 3, seed=0, toy=True).spec.variant == "part3_only"
    assert factory.create_model("full", 128, 11, seed=0).params.size() == 71871

def test_end_to_end_gradcheck_64bit(toy_model64, rng):
    x = rng.normal(size=(2, 2, 16))
    labels = one_hot([0, 2], 3, np.float64)
    toy_model64.backward(x, labels)
    report = gradcheck_report(lambda: toy_model64.loss(x, labels), toy_model64.params, h=1e-6,
                              samples_per_tensor=12, floor=1e-6)
    assert set(report) == set(toy_model64.params.names())
    assert max(report.values()) < 1e-4

def test_end_to_end_gradcheck_32bit(toy_model, rng):
    x = rng.normal(size=(2, 2, 16)).astype(np.float32)
    labels = one_hot([1, 0], 3)
    toy_model.backward(x, labels)
    analytic = {name: toy_model.params.grad(name).copy() for name in toy_model.params}
    reference = toy_model.astype(np.float64)
    x64, labels64 = x.astype(np.float64), labels.astype(np.float64)
    report = gradcheck_report(lambda: reference.loss(x64, labels64), reference.params, h=1e-6,
                              analytic=analytic, samples_per_tensor=12, floor=1e-4)
    assert max(report.values()) < 1e-2

def test_estimator_gradient_is_nonzero(toy_model, rng):
    x = rng.normal(size=(2, 2, 16)).astype(np.float32)
    toy_model.params.zero_grad()
    toy_model.backward(x, one_hot([0, 1], 3))
    assert np.any(toy_model.params.grad("estimator/kernel") != 0)
    assert np.all(np.isfinite(toy_model.params.grad("estimator/kernel")))

def test_zero_upstream_gives_zero_gradients(toy_model64, rng):
    x = rng.normal(size=(2, 2, 16))
    _, _, _, cache = toy_model64._forward(x, keep_cache=True)
    toy_model64.params.zero_grad()
    toy_model64.backward_from_logits(cache, np.zeros_like(cache.logits))
    for name in toy_model64.params:
        np.testing.assert_allclose(toy_model64.params.grad(name), 0.0, atol=1e-12)

def test_saturated_logits_give_near_zero_gradients(toy_model64, rng):
    x = rng.normal(size=(3, 2, 16))
    toy_model64.params.value("dense/bias")[0] = 1000.0
    toy_model64.params.zero_grad()
    loss = toy_model64.backward(x, one_hot([0, 0, 0], 3, np.float64))
    assert loss == pytest.approx(0.0, abs=1e-9)
    for name in toy_model64.params:
        np.testing.assert_allclose(toy_model64.params.grad(name), 0.0, atol=1e-9)

# Negative Test Cases

@pytest.mark.parametrize("length", [64, 256])
def test__neg_unsupported_frame_length(length):
    with pytest.raises(InvalidConfigurationException):
        ModelSpec(length, 11)

def test__neg_toy_frame_too_short():
    with pytest.raises(InvalidConfigurationException):
        ModelSpec.toy(11, 3)

def test__neg_unknown_variant():
    with pytest.raises(InvalidConfigurationException):
        ModelVariantFactory().create_model("part2", 128, 11, seed=0)

def test__neg_wrong_frame_length_in_batch(toy_model):
    with pytest.raises(DimensionMismatchException):
        toy_model.forward(np.zeros((1, 2, 20), dtype=np.float32))

@pytest.mark.parametrize("link, shape", [("conv1", (1, 121, 74)), ("conv2", (1, 118, 25)), ("gru", (64,)), ("dense", (10,))])
def test__neg_build_rejects_inconsistent_shape_chain(mocker, link, shape):
    spec = ModelSpec(128, 11)
    chain = [(name, shape if name == link else s) for name, s in shape_chain(spec)]
    mocker.patch("bl.model.network.shape_chain", return_value=chain)
    with pytest.raises(InvalidConfigurationException):
        build(spec, seed=0)

def test__neg_parameter_store_not_matching_layout(toy_spec):
    with pytest.raises(InvalidConfigurationException):
        PetCgdnn(toy_spec, ParamStore())
