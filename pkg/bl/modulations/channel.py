# Copyright (c) 2024 by Jonathan AW
# channel.py
# Summary: Baseband channel: gain, carrier frequency / phase offset and complex white Gaussian noise.
"""
    y[l] = A * exp(j (omega * l + phi)) * x[l] + n[l],   l = 0 .. L-1

The noise power is set against the empirical power of the faded signal of the frame:
    E|n|^2 = mean(|A x|^2) * 10^(-snr_db / 10)
snr_db = None means a noiseless channel.
"""

from dataclasses import asdict, dataclass
from typing import Optional, Union

import numpy as np

from exceptions import InvalidConfigurationException
from utils.data_validation import validate_channel_params_data


@dataclass(frozen=True)
class ChannelParams:
    gain: float = 1.0
    omega: float = 0.0
    phi: float = 0.0
    snr_db: Optional[float] = None

    def __post_init__(self):
        is_valid, message = validate_channel_params_data(asdict(self))
        if not is_valid:
            raise InvalidConfigurationException(message)


def to_iq(x: np.ndarray) -> np.ndarray:
    """Complex sequence -> [2, L] float32 frame (I row, Q row)."""
    return np.stack([x.real, x.imag]).astype(np.float32)


def apply_channel(x: np.ndarray, ch: ChannelParams,
                  rng_seed: Union[int, np.random.Generator, None] = None) -> np.ndarray:
    """
    Pass the complex baseband sequence x through the channel; returns the [2, L] frame.
    """
    x = np.asarray(x, dtype=np.complex128)
    l = np.arange(x.shape[0])
    faded = ch.gain * x
    y = np.exp(1j * (ch.omega * l + ch.phi)) * faded

    if ch.snr_db is not None:
        rng = np.random.default_rng(rng_seed)
        signal_power = np.mean(np.abs(faded) ** 2)
        noise_power = signal_power * 10.0 ** (-ch.snr_db / 10.0)
        noise = np.sqrt(noise_power / 2.0) * (rng.standard_normal(x.shape[0]) + 1j * rng.standard_normal(x.shape[0]))
        y = y + noise

    return to_iq(y)
