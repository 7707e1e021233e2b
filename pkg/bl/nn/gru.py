# Copyright (c) 2024 by Jonathan AW
# gru.py
# Summary: Reset-after GRU layer returning the final hidden state, with backpropagation through time.
"""
Gate equations (gate order inside every 3*units block: update z, reset r, candidate h~):

    z_t  = sigmoid(x_t Wz + bz_in + h_{t-1} Uz + bz_rec)
    r_t  = sigmoid(x_t Wr + br_in + h_{t-1} Ur + br_rec)
    h~_t = tanh(x_t Wh + bh_in + r_t * (h_{t-1} Uh + bh_rec))
    h_t  = z_t * h_{t-1} + (1 - z_t) * h~_t,     h_0 = 0

Parameters under a prefix: '<prefix>/kernel' [in, 3u], '<prefix>/recurrent_kernel' [u, 3u],
'<prefix>/bias' [2, 3u] (row 0 input-side, row 1 recurrent-side).
"""

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from bl.nn.param_store import ParamStore
from exceptions import DimensionMismatchException, InvalidConfigurationException


@dataclass
class GruCache:
    x: np.ndarray
    h_prev: List[np.ndarray]
    z: List[np.ndarray]
    r: List[np.ndarray]
    h_cand: List[np.ndarray]
    rec_cand: List[np.ndarray]  # h_{t-1} Uh + bh_rec, needed by the reset gate gradient


def _sigmoid(a: np.ndarray) -> np.ndarray:
    # split form keeps exp() from overflowing for large |a|
    out = np.empty_like(a)
    pos = a >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-a[pos]))
    e = np.exp(a[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def gru_param_names(prefix: str = 'gru') -> Tuple[str, str, str]:
    return f"{prefix}/kernel", f"{prefix}/recurrent_kernel", f"{prefix}/bias"


def _gru_params(params: ParamStore, units: int, prefix: str) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    kernel_name, recurrent_name, bias_name = gru_param_names(prefix)
    for name in (kernel_name, recurrent_name, bias_name):
        if name not in params:
            raise InvalidConfigurationException(f"GRU parameter '{name}' is missing.")
    W, U, b = params.value(kernel_name), params.value(recurrent_name), params.value(bias_name)
    if U.shape != (units, 3 * units) or W.shape[1] != 3 * units or b.shape != (2, 3 * units):
        raise InvalidConfigurationException(f"GRU parameters do not match {units} units: W {W.shape}, U {U.shape}, b {b.shape}.")
    return W, U, b


def gru_forward(x: np.ndarray, params: ParamStore, units: int, prefix: str = 'gru', return_cache: bool = False):
    """
    Run the GRU over x [batch, T, in] and return the final hidden state [batch, units]
    (and the cache for gru_backward when return_cache is set).
    """
    W, U, b = _gru_params(params, units, prefix)
    if x.ndim != 3 or x.shape[2] != W.shape[0]:
        raise DimensionMismatchException(f"GRU expects input [batch, T, {W.shape[0]}], got {x.shape}.")

    batch, steps, _ = x.shape
    u = units
    x_proj = x @ W + b[0]  # [batch, T, 3u]
    h = np.zeros((batch, u), dtype=x.dtype)
    cache = GruCache(x=x, h_prev=[], z=[], r=[], h_cand=[], rec_cand=[])

    for t in range(steps):
        rec = h @ U + b[1]
        xp = x_proj[:, t]
        z = _sigmoid(xp[:, :u] + rec[:, :u])
        r = _sigmoid(xp[:, u:2 * u] + rec[:, u:2 * u])
        rec_cand = rec[:, 2 * u:]
        h_cand = np.tanh(xp[:, 2 * u:] + r * rec_cand)
        if return_cache:
            cache.h_prev.append(h)
            cache.z.append(z)
            cache.r.append(r)
            cache.h_cand.append(h_cand)
            cache.rec_cand.append(rec_cand)
        h = z * h + (1.0 - z) * h_cand

    if return_cache:
        return h, cache
    return h


def gru_backward(cache: GruCache, params: ParamStore, units: int, grad_h: np.ndarray, prefix: str = 'gru') -> np.ndarray:
    """
    Backpropagate grad_h (gradient wrt the final hidden state) through time.
    Accumulates parameter gradients into params and returns the gradient wrt the input sequence.
    """
    W, U, _ = _gru_params(params, units, prefix)
    x = cache.x
    batch, steps, _ = x.shape
    u = units
    if grad_h.shape != (batch, u):
        raise DimensionMismatchException(f"GRU upstream gradient must be [{batch}, {u}], got {grad_h.shape}.")

    grad_x_proj = np.zeros((batch, steps, 3 * u), dtype=x.dtype)
    grad_U = np.zeros_like(U)
    grad_b_rec = np.zeros(3 * u, dtype=x.dtype)
    dh = grad_h

    for t in reversed(range(steps)):
        h_prev, z, r = cache.h_prev[t], cache.z[t], cache.r[t]
        h_cand, rec_cand = cache.h_cand[t], cache.rec_cand[t]

        dz = dh * (h_prev - h_cand)
        da_cand = dh * (1.0 - z) * (1.0 - h_cand * h_cand)
        da_z = dz * z * (1.0 - z)
        da_r = da_cand * rec_cand * r * (1.0 - r)

        grad_x_proj[:, t, :u] = da_z
        grad_x_proj[:, t, u:2 * u] = da_r
        grad_x_proj[:, t, 2 * u:] = da_cand

        grad_rec = np.concatenate([da_z, da_r, da_cand * r], axis=1)
        grad_U += h_prev.T @ grad_rec
        grad_b_rec += grad_rec.sum(axis=0)
        dh = dh * z + grad_rec @ U.T

    flat_x = x.reshape(batch * steps, -1)
    flat_grad = grad_x_proj.reshape(batch * steps, 3 * u)
    kernel_name, recurrent_name, bias_name = gru_param_names(prefix)
    params.accumulate_grad(kernel_name, flat_x.T @ flat_grad)
    params.accumulate_grad(recurrent_name, grad_U)
    params.accumulate_grad(bias_name, np.stack([flat_grad.sum(axis=0), grad_b_rec]))
    return grad_x_proj @ W.T
