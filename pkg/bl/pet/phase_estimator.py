# Copyright (c) 2024 by Jonathan AW
# phase_estimator.py
# Summary: Linear dense estimator producing one phase parameter per I/Q frame.
"""
phi_hat = flatten(y) . W + b, with flatten in row-major order (I row then Q row, index row * L + l).
No activation: phi_hat is any real value.
"""

from typing import Tuple

import numpy as np

from exceptions import DimensionMismatchException, InvalidConfigurationException


def check_iq_frame(y: np.ndarray) -> None:
    if y.ndim != 2 or y.shape[0] != 2:
        raise DimensionMismatchException(f"An I/Q frame must have shape [2, L], got {y.shape}.")


def check_iq_batch(x: np.ndarray) -> None:
    if x.ndim != 3 or x.shape[1] != 2:
        raise DimensionMismatchException(f"An I/Q batch must have shape [batch, 2, L], got {x.shape}.")


def _check_estimator(W: np.ndarray, b: np.ndarray, length: int) -> None:
    if W.ndim != 2 or W.shape[1] != 1:
        raise InvalidConfigurationException(f"The phase estimator kernel must have exactly one column, got {W.shape}.")
    if b.shape != (1,):
        raise InvalidConfigurationException(f"The phase estimator bias must have shape [1], got {b.shape}.")
    if W.shape[0] != 2 * length:
        raise DimensionMismatchException(f"The phase estimator kernel needs {2 * length} rows for L={length}, got {W.shape[0]}.")


def estimate_phase(y: np.ndarray, W: np.ndarray, b: np.ndarray) -> float:
    check_iq_frame(y)
    _check_estimator(W, b, y.shape[1])
    return float(y.reshape(-1) @ W[:, 0] + b[0])


def estimate_phase_batch(x: np.ndarray, W: np.ndarray, b: np.ndarray) -> np.ndarray:
    """phi_hat for every frame of x [batch, 2, L] -> [batch]."""
    check_iq_batch(x)
    _check_estimator(W, b, x.shape[2])
    return x.reshape(x.shape[0], -1) @ W[:, 0] + b[0]


def estimator_backward_batch(x: np.ndarray, W: np.ndarray, grad_phi: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Returns (grad_x [batch, 2, L], grad_W [2L, 1], grad_b [1]) given grad_phi [batch].
    """
    if grad_phi.shape != (x.shape[0],):
        raise DimensionMismatchException(f"grad_phi must have shape [{x.shape[0]}], got {grad_phi.shape}.")
    flat = x.reshape(x.shape[0], -1)
    grad_W = flat.T @ grad_phi[:, None]
    grad_b = np.array([grad_phi.sum()], dtype=x.dtype)
    grad_x = (grad_phi[:, None] * W[:, 0][None, :]).reshape(x.shape)
    return grad_x, grad_W, grad_b
