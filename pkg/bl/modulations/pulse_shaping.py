# Copyright (c) 2024 by Jonathan AW
# pulse_shaping.py
# Summary: Rectangular and root-raised-cosine pulse shaping, and the Gaussian frequency pulse of GFSK.

import numpy as np
from commpy.filters import rrcosfilter
from commpy.utilities import upsample
from scipy.signal.windows import gaussian

from exceptions import InvalidConfigurationException

RRC_SPAN_SYMBOLS = 8
GAUSSIAN_SPAN_SYMBOLS = 4


def rectangular_shape(points: np.ndarray, samples_per_symbol: int) -> np.ndarray:
    return np.repeat(points, samples_per_symbol)


def rrc_taps(samples_per_symbol: int, rolloff: float) -> np.ndarray:
    """Root-raised-cosine taps scaled so unit-power symbols give unit-power samples."""
    _, taps = rrcosfilter(RRC_SPAN_SYMBOLS * samples_per_symbol, rolloff, 1.0, samples_per_symbol)
    return taps * np.sqrt(samples_per_symbol / np.sum(taps ** 2))


def rrc_shape(points: np.ndarray, samples_per_symbol: int, rolloff: float) -> np.ndarray:
    taps = rrc_taps(samples_per_symbol, rolloff)
    impulses = upsample(np.asarray(points, dtype=np.complex128), samples_per_symbol)
    delay = len(taps) // 2
    return np.convolve(impulses, taps)[delay:delay + len(impulses)]


def shape(points: np.ndarray, samples_per_symbol: int, pulse: str = 'rect', rolloff: float = 0.35) -> np.ndarray:
    if samples_per_symbol < 1:
        raise InvalidConfigurationException("samples_per_symbol must be >= 1")
    if pulse == 'rect':
        return rectangular_shape(points, samples_per_symbol)
    if pulse == 'rrc':
        return rrc_shape(points, samples_per_symbol, rolloff)
    raise InvalidConfigurationException(f"Unknown pulse shape '{pulse}'.")


def gaussian_frequency_taps(samples_per_symbol: int, bt: float) -> np.ndarray:
    """Gaussian filter of bandwidth-time product bt, normalized to unit DC gain."""
    std = samples_per_symbol * np.sqrt(np.log(2.0)) / (2.0 * np.pi * bt)
    taps = gaussian(GAUSSIAN_SPAN_SYMBOLS * samples_per_symbol + 1, std)
    return taps / np.sum(taps)
