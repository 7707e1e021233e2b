# Copyright (c) 2024 by Jonathan AW

"""
Unit Testing of the phase estimator and the phase transformer:

Key Tests to Include:
- Estimator dot-product oracles and configuration errors.
- Rotation identity, quarter / half turns, isometry, composition and inversion.
- Analytic gradients wrt the frame and the phase against central differences.
- Channel / transform duality: undoing a noiseless phase offset recovers the clean signal.
"""
# test_phase_transform.py

import numpy as np
import pytest

from bl.modulations.channel import ChannelParams, apply_channel, to_iq
from bl.modulations.dataset_synth import modulate
from bl.pet.phase_estimator import estimate_phase, estimate_phase_batch, estimator_backward_batch
from bl.pet.phase_transformer import pet_backward, transform_phase, transform_phase_batch
from exceptions import DimensionMismatchException, InvalidConfigurationException


def random_frame(rng, length=8, dtype=np.float64):
    return rng.normal(size=(2, length)).astype(dtype)

# Positive Test Cases

def test_estimate_phase_bias_only(rng):
    y = random_frame(rng)
    assert estimate_phase(y, np.zeros((16, 1)), np.array([0.7])) == pytest.approx(0.7)
    assert estimate_phase(np.zeros((2, 8)), rng.normal(size=(16, 1)), np.array([0.7])) == pytest.approx(0.7)

def test_estimate_phase_unit_frame(rng):
    W = rng.normal(size=(16, 1))
    y = np.zeros((2, 8))
    y[1, 3] = 1.0  # flat index 1 * 8 + 3
    assert estimate_phase(y, W, np.array([0.2])) == pytest.approx(W[11, 0] + 0.2)

def test_estimate_phase_batch_matches_single(rng):
    x = rng.normal(size=(3, 2, 8))
    W, b = rng.normal(size=(16, 1)), rng.normal(size=1)
    np.testing.assert_allclose(estimate_phase_batch(x, W, b), [estimate_phase(f, W, b) for f in x])

def test_transform_phase_identity(rng):
    y = random_frame(rng, dtype=np.float32)
    out = transform_phase(y, 0.0)
    np.testing.assert_array_equal(out, y)
    assert out is not y

def test_transform_phase_quarter_and_half_turn():
    np.testing.assert_allclose(transform_phase(np.array([[1.0], [0.0]]), np.pi / 2), [[0.0], [-1.0]], atol=1e-12)
    np.testing.assert_allclose(transform_phase(np.array([[0.6], [0.8]]), np.pi), [[-0.6], [-0.8]], atol=1e-12)

def test_transform_phase_isometry(rng):
    y = random_frame(rng, 16, np.float32)
    out = transform_phase(y, 2.3)
    np.testing.assert_allclose(np.sum(out ** 2, axis=0), np.sum(y ** 2, axis=0), rtol=1e-5)

def test_transform_phase_composition_and_inversion(rng):
    y = random_frame(rng, 16, np.float32)
    a, b = 0.9, -2.4
    np.testing.assert_allclose(transform_phase(transform_phase(y, a), b), transform_phase(y, a + b), atol=1e-5)
    np.testing.assert_allclose(transform_phase(transform_phase(y, a), -a), y, atol=1e-5)

def test_transform_phase_batch_matches_single(rng):
    x = rng.normal(size=(3, 2, 8))
    phi = np.array([0.1, -1.0, 4.0])
    np.testing.assert_allclose(transform_phase_batch(x, phi), [transform_phase(f, p) for f, p in zip(x, phi)])

def test_pet_backward_zero_upstream(rng):
    grad_y, grad_phi = pet_backward(random_frame(rng), 0.4, np.zeros((2, 8)))
    np.testing.assert_array_equal(grad_y, np.zeros((2, 8)))
    assert grad_phi == 0.0

def test_pet_backward_single_sample():
    _, grad_phi = pet_backward(np.array([[1.0], [0.0]]), 0.0, np.array([[0.0], [1.0]]))
    assert grad_phi == pytest.approx(-1.0)

def test_pet_backward_matches_finite_differences(rng):
    y = random_frame(rng, 16)
    upstream = rng.normal(size=(2, 16))
    phi, h = 0.7, 1e-6
    grad_y, grad_phi = pet_backward(y, phi, upstream)

    def f(frame, angle):
        return float(np.sum(upstream * transform_phase(frame, angle)))

    numeric_phi = (f(y, phi + h) - f(y, phi - h)) / (2 * h)
    assert abs(grad_phi - numeric_phi) / max(abs(numeric_phi), 1e-8) < 1e-3
    numeric_y = np.zeros_like(y)
    for idx in np.ndindex(*y.shape):
        plus, minus = y.copy(), y.copy()
        plus[idx] += h
        minus[idx] -= h
        numeric_y[idx] = (f(plus, phi) - f(minus, phi)) / (2 * h)
    np.testing.assert_allclose(grad_y, numeric_y, rtol=1e-3, atol=1e-8)

def test_estimator_backward_batch_shapes(rng):
    x = rng.normal(size=(3, 2, 4))
    grad_x, grad_W, grad_b = estimator_backward_batch(x, rng.normal(size=(8, 1)), np.ones(3))
    assert grad_x.shape == (3, 2, 4)
    np.testing.assert_allclose(grad_W[:, 0], x.reshape(3, -1).sum(axis=0))
    np.testing.assert_allclose(grad_b, [3.0])

@pytest.mark.parametrize("phi", [0.3, -2.0, 3.1])
def test_channel_phase_offset_is_undone_by_transform(phi):
    symbols = np.arange(32) % 4
    clean = modulate("QPSK", symbols, samples_per_symbol=1)
    received = apply_channel(clean, ChannelParams(phi=phi))
    np.testing.assert_allclose(transform_phase(received, phi), to_iq(clean), atol=1e-5)

# Negative Test Cases

def test__neg_estimator_with_two_columns(rng):
    with pytest.raises(InvalidConfigurationException):
        estimate_phase(random_frame(rng), np.zeros((16, 2)), np.zeros(1))

def test__neg_estimator_row_count(rng):
    with pytest.raises(DimensionMismatchException):
        estimate_phase(random_frame(rng), np.zeros((10, 1)), np.zeros(1))

def test__neg_pet_backward_shape_mismatch(rng):
    with pytest.raises(DimensionMismatchException):
        pet_backward(random_frame(rng), 0.1, np.zeros((2, 7)))

def test__neg_frame_with_three_rows():
    with pytest.raises(DimensionMismatchException):
        transform_phase(np.zeros((3, 8)), 0.5)
