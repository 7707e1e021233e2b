# Copyright (c) 2024 by Jonathan AW
# layers.py
# Summary: Forward and backward passes of the dense and 2-D convolution layers and their activations.
"""
All tensors are numpy arrays; the dtype of the inputs is preserved (float32 by default, float64 in the
gradient-check mode). Convolutions are cross-correlations with valid padding, channels-last
([batch, H, W, C] inputs, [kh, kw, cin, cout] kernels).
"""

from typing import Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from exceptions import DimensionMismatchException, InvalidConfigurationException

ACTIVATIONS = ('linear', 'relu', 'softmax')


# ===============================
# Activations
# ===============================

def relu(z: np.ndarray) -> np.ndarray:
    return np.maximum(z, 0)


def softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - np.max(z, axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / np.sum(e, axis=-1, keepdims=True)


def activate(z: np.ndarray, activation: str) -> np.ndarray:
    if activation == 'linear':
        return z
    if activation == 'relu':
        return relu(z)
    if activation == 'softmax':
        return softmax(z)
    raise InvalidConfigurationException(f"Unknown activation '{activation}'.")


def activation_backward(y: np.ndarray, grad_y: np.ndarray, activation: str) -> np.ndarray:
    """Gradient wrt the pre-activation given the activation output y."""
    if activation == 'linear':
        return grad_y
    if activation == 'relu':
        return grad_y * (y > 0)
    if activation == 'softmax':
        return y * (grad_y - np.sum(grad_y * y, axis=-1, keepdims=True))
    raise InvalidConfigurationException(f"Unknown activation '{activation}'.")


# ===============================
# Dense
# ===============================

def dense_forward(x: np.ndarray, W: np.ndarray, b: np.ndarray, activation: str = 'linear') -> np.ndarray:
    """
    y = act(xW + b) for x [batch, in], W [in, out], b [out].
    """
    if x.ndim != 2 or W.ndim != 2 or b.ndim != 1:
        raise DimensionMismatchException(f"dense expects x [batch, in], W [in, out], b [out]; got {x.shape}, {W.shape}, {b.shape}.")
    if x.shape[1] != W.shape[0] or W.shape[1] != b.shape[0]:
        raise DimensionMismatchException(f"dense shapes do not conform: x {x.shape}, W {W.shape}, b {b.shape}.")
    return activate(x @ W + b, activation)


def dense_backward(x: np.ndarray, W: np.ndarray, y: np.ndarray, grad_y: np.ndarray, activation: str = 'linear') -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Returns (grad_x, grad_W, grad_b) for the dense layer that produced y from x.
    """
    if grad_y.shape != y.shape:
        raise DimensionMismatchException(f"dense upstream gradient {grad_y.shape} does not match output {y.shape}.")
    grad_z = activation_backward(y, grad_y, activation)
    return grad_z @ W.T, x.T @ grad_z, grad_z.sum(axis=0)


# ===============================
# Conv2D (valid cross-correlation)
# ===============================

def _check_conv_shapes(x: np.ndarray, k: np.ndarray, b: np.ndarray) -> None:
    if x.ndim != 4 or k.ndim != 4 or b.ndim != 1:
        raise DimensionMismatchException(f"conv2d expects x [batch, H, W, Cin], k [kh, kw, Cin, Cout], b [Cout]; got {x.shape}, {k.shape}, {b.shape}.")
    kh, kw, cin, cout = k.shape
    if x.shape[3] != cin or b.shape[0] != cout:
        raise DimensionMismatchException(f"conv2d channels do not conform: x {x.shape}, k {k.shape}, b {b.shape}.")
    if kh > x.shape[1] or kw > x.shape[2]:
        raise DimensionMismatchException(f"conv2d kernel {kh}x{kw} is larger than the input {x.shape[1]}x{x.shape[2]}.")


def _patches(x: np.ndarray, kh: int, kw: int) -> np.ndarray:
    # [batch, Ho, Wo, Cin, kh, kw]
    return sliding_window_view(x, (kh, kw), axis=(1, 2))


def conv2d_forward(x: np.ndarray, k: np.ndarray, b: np.ndarray, activation: str = 'linear') -> np.ndarray:
    """
    Valid-padding cross-correlation plus bias: output [batch, H-kh+1, W-kw+1, Cout].
    """
    _check_conv_shapes(x, k, b)
    kh, kw = k.shape[:2]
    patches = _patches(x, kh, kw)
    z = np.tensordot(patches, k.transpose(2, 0, 1, 3), axes=([3, 4, 5], [0, 1, 2]))
    return activate(z + b, activation)


def conv2d_backward(x: np.ndarray, k: np.ndarray, y: np.ndarray, grad_y: np.ndarray, activation: str = 'linear') -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Returns (grad_x, grad_k, grad_b) for the convolution that produced y from x.
    """
    if grad_y.shape != y.shape:
        raise DimensionMismatchException(f"conv2d upstream gradient {grad_y.shape} does not match output {y.shape}.")
    kh, kw = k.shape[:2]
    grad_z = activation_backward(y, grad_y, activation)
    patches = _patches(x, kh, kw)
    grad_k = np.tensordot(patches, grad_z, axes=([0, 1, 2], [0, 1, 2])).transpose(1, 2, 0, 3)
    grad_b = grad_z.sum(axis=(0, 1, 2))

    grad_x = np.zeros_like(x)
    ho, wo = grad_z.shape[1:3]
    for i in range(kh):
        for j in range(kw):
            grad_x[:, i:i + ho, j:j + wo, :] += grad_z @ k[i, j].T
    return grad_x, grad_k.astype(k.dtype, copy=False), grad_b
