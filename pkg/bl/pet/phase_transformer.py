# Copyright (c) 2024 by Jonathan AW
# phase_transformer.py
# Summary: Parameter-free inverse phase rotation of I/Q frames and its analytic gradients.
"""
Per sample l:
    Re' = Re cos(phi) + Im sin(phi)
    Im' = Im cos(phi) - Re sin(phi)
i.e. y'[l] = y[l] * exp(-j phi). The rotation is an isometry and is periodic in phi, so phi is never wrapped.
"""

from typing import Tuple

import numpy as np

from bl.pet.phase_estimator import check_iq_batch, check_iq_frame
from exceptions import DimensionMismatchException


def transform_phase(y: np.ndarray, phi: float) -> np.ndarray:
    check_iq_frame(y)
    if phi == 0.0:
        return y.copy()
    c = y.dtype.type(np.cos(phi))
    s = y.dtype.type(np.sin(phi))
    re, im = y[0], y[1]
    return np.stack([re * c + im * s, im * c - re * s])


def pet_backward(y: np.ndarray, phi: float, upstream_grad: np.ndarray) -> Tuple[np.ndarray, float]:
    """
    Returns (grad_y [2, L], grad_phi) for the rotation of y by -phi.
    """
    check_iq_frame(y)
    if upstream_grad.shape != y.shape:
        raise DimensionMismatchException(f"Upstream gradient {upstream_grad.shape} does not match frame {y.shape}.")
    grad_y, grad_phi = pet_backward_batch(y[None], np.array([phi], dtype=np.float64), upstream_grad[None])
    return grad_y[0], float(grad_phi[0])


def transform_phase_batch(x: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Rotate every frame of x [batch, 2, L] by -phi[i]."""
    check_iq_batch(x)
    if phi.shape != (x.shape[0],):
        raise DimensionMismatchException(f"phi must have shape [{x.shape[0]}], got {phi.shape}.")
    c = np.cos(phi).astype(x.dtype)[:, None]
    s = np.sin(phi).astype(x.dtype)[:, None]
    re, im = x[:, 0], x[:, 1]
    return np.stack([re * c + im * s, im * c - re * s], axis=1)


def pet_backward_batch(x: np.ndarray, phi: np.ndarray, upstream_grad: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Returns (grad_x [batch, 2, L], grad_phi [batch]).
    grad_x is the transpose rotation of the upstream gradient.
    """
    check_iq_batch(x)
    if upstream_grad.shape != x.shape:
        raise DimensionMismatchException(f"Upstream gradient {upstream_grad.shape} does not match batch {x.shape}.")
    c = np.cos(phi).astype(x.dtype)[:, None]
    s = np.sin(phi).astype(x.dtype)[:, None]
    re, im = x[:, 0], x[:, 1]
    g_re, g_im = upstream_grad[:, 0], upstream_grad[:, 1]

    grad_x = np.stack([g_re * c - g_im * s, g_re * s + g_im * c], axis=1)
    grad_phi = np.sum(g_re * (im * c - re * s) + g_im * (-im * s - re * c), axis=1)
    return grad_x, grad_phi
