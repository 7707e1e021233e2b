# Copyright (c) 2024 by Jonathan AW
"""
Weight initializers: uniform Glorot for dense / conv / GRU input kernels, orthogonal for the
GRU recurrent kernel, zeros for biases.
"""

from typing import Sequence, Tuple

import numpy as np


def _fans(shape: Sequence[int]) -> Tuple[int, int]:
    if len(shape) == 2:
        return shape[0], shape[1]
    # conv kernels [kh, kw, cin, cout]
    receptive = int(np.prod(shape[:-2]))
    return receptive * shape[-2], receptive * shape[-1]


def glorot_uniform(shape: Sequence[int], rng: np.random.Generator, dtype=np.float32) -> np.ndarray:
    fan_in, fan_out = _fans(shape)
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=tuple(shape)).astype(dtype)


def orthogonal(shape: Sequence[int], rng: np.random.Generator, dtype=np.float32) -> np.ndarray:
    """Orthogonal matrix of shape [rows, cols]; rows are orthonormal when rows <= cols."""
    rows, cols = shape
    a = rng.normal(0.0, 1.0, size=(max(rows, cols), min(rows, cols)))
    q, r = np.linalg.qr(a)
    q *= np.sign(np.diag(r))
    if rows < cols:
        q = q.T
    return q[:rows, :cols].astype(dtype)


def zeros(shape: Sequence[int], dtype=np.float32) -> np.ndarray:
    return np.zeros(tuple(shape), dtype=dtype)
