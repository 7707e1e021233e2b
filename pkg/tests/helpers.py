# Copyright (c) 2024 by Jonathan AW
# helpers.py
# Summary: Small dataset builders and naive reference implementations shared by the test packages.

import numpy as np

from bl.modulations.dataset_synth import Dataset, Frame

TOY_LENGTH = 16


def make_separable_dataset(frames_per_class: int = 40, length: int = TOY_LENGTH, seed: int = 0) -> Dataset:
    """Two classes: I row near +1 (class 0) or near -1 (class 1), Q row near 0."""
    rng = np.random.default_rng(seed)
    frames = []
    for class_id, level in enumerate((1.0, -1.0)):
        for _ in range(frames_per_class):
            iq = rng.normal(0.0, 0.05, size=(2, length))
            iq[0] += level
            frames.append(Frame(iq=iq.astype(np.float32), class_id=class_id, snr_db=10))
    manifest = {"schemes": ["BPSK", "QPSK"], "length": length, "snrs": [10], "frames_per_cell": frames_per_class}
    return Dataset(manifest=manifest, frames=frames)


def naive_conv2d(x: np.ndarray, k: np.ndarray, b: np.ndarray) -> np.ndarray:
    batch, h, w, cin = x.shape
    kh, kw, _, cout = k.shape
    out = np.zeros((batch, h - kh + 1, w - kw + 1, cout), dtype=np.float64)
    for n in range(batch):
        for i in range(h - kh + 1):
            for j in range(w - kw + 1):
                for o in range(cout):
                    out[n, i, j, o] = np.sum(x[n, i:i + kh, j:j + kw, :] * k[:, :, :, o]) + b[o]
    return out


def _sigmoid(a: float) -> float:
    return 1.0 / (1.0 + np.exp(-a))


def naive_gru(x: np.ndarray, W: np.ndarray, U: np.ndarray, b: np.ndarray, units: int) -> np.ndarray:
    """Per-sample, per-unit scalar evaluation of the reset-after gate equations."""
    batch, steps, inputs = x.shape
    out = np.zeros((batch, units))
    for n in range(batch):
        h = np.zeros(units)
        for t in range(steps):
            new_h = np.zeros(units)
            for j in range(units):
                def pre(gate, source, weights, bias_row):
                    col = gate * units + j
                    return sum(source[i] * weights[i, col] for i in range(len(source))) + b[bias_row, col]
                z = _sigmoid(pre(0, x[n, t], W, 0) + pre(0, h, U, 1))
                r = _sigmoid(pre(1, x[n, t], W, 0) + pre(1, h, U, 1))
                cand = np.tanh(pre(2, x[n, t], W, 0) + r * pre(2, h, U, 1))
                new_h[j] = z * h[j] + (1.0 - z) * cand
            h = new_h
        out[n] = h
    return out
