# Copyright (c) 2024 by Jonathan AW
# fsk_modulation.py
# Summary: Binary continuous-phase FSK schemes (CPFSK and GFSK) with modulation index 0.5.
"""
Symbol s in {0, 1} maps to a = 2s - 1. The phase advances by pi * h * a over one symbol; CPFSK spreads
the advance uniformly over the symbol (rectangular frequency pulse), GFSK smooths the frequency
trajectory with a Gaussian filter of bandwidth-time product BT. |x| = 1 for every sample.

The pulse / rolloff arguments of modulate() do not apply to these schemes and are ignored.
"""

import numpy as np

from bl.modulations.base_modulation import BaseModulation
from bl.modulations.pulse_shaping import gaussian_frequency_taps


class ContinuousPhaseModulation(BaseModulation):
    order = 2
    modulation_index = 0.5

    def frequency_trajectory(self, amplitudes: np.ndarray, samples_per_symbol: int) -> np.ndarray:
        return np.repeat(amplitudes, samples_per_symbol)

    def modulate(self, symbols, samples_per_symbol: int = 1, pulse: str = 'rect', rolloff: float = 0.35) -> np.ndarray:
        symbols = self.check_symbols(symbols)
        amplitudes = 2.0 * symbols - 1.0
        frequency = self.frequency_trajectory(amplitudes, samples_per_symbol)
        phase = np.cumsum(np.pi * self.modulation_index * frequency / samples_per_symbol)
        return np.exp(1j * phase)


class CpfskModulation(ContinuousPhaseModulation):
    name = "CPFSK"


class GfskModulation(ContinuousPhaseModulation):
    name = "GFSK"
    bandwidth_time = 0.35

    def frequency_trajectory(self, amplitudes: np.ndarray, samples_per_symbol: int) -> np.ndarray:
        taps = gaussian_frequency_taps(samples_per_symbol, self.bandwidth_time)
        return np.convolve(np.repeat(amplitudes, samples_per_symbol), taps, mode='same')
