# Copyright (c) 2024 by Jonathan AW
# linear_modulation.py
# Summary: Constellation-based schemes (BPSK, QPSK, 8PSK, PAM4, QAM16, QAM64), Gray-mapped and normalized to unit mean power.

import numpy as np

from bl.modulations.base_modulation import BaseModulation
from bl.modulations.pulse_shaping import shape


def gray(n):
    return n ^ (n >> 1)


def normalize_power(points: np.ndarray) -> np.ndarray:
    return points / np.sqrt(np.mean(np.abs(points) ** 2))


def gray_pam_levels(m: int) -> np.ndarray:
    """Amplitude of every symbol value of an m-level Gray-coded PAM (unnormalized odd integers)."""
    levels = np.empty(m)
    for position in range(m):
        levels[gray(position)] = 2 * position - (m - 1)
    return levels


class LinearModulation(BaseModulation):
    """
    Symbols are mapped onto constellation points and pulse shaped.
    """

    def __init__(self):
        self.constellation = self.build_constellation().astype(np.complex128)
        self.order = len(self.constellation)

    def build_constellation(self) -> np.ndarray:
        raise NotImplementedError

    def modulate(self, symbols, samples_per_symbol: int = 1, pulse: str = 'rect', rolloff: float = 0.35) -> np.ndarray:
        symbols = self.check_symbols(symbols)
        return shape(self.constellation[symbols], samples_per_symbol, pulse, rolloff)


class BpskModulation(LinearModulation):
    name = "BPSK"

    def build_constellation(self) -> np.ndarray:
        return np.array([1.0, -1.0])


class QpskModulation(LinearModulation):
    name = "QPSK"

    def build_constellation(self) -> np.ndarray:
        # bit 0 -> sign of I, bit 1 -> sign of Q
        return np.array([1 + 1j, -1 + 1j, 1 - 1j, -1 - 1j]) / np.sqrt(2.0)


class Psk8Modulation(LinearModulation):
    name = "8PSK"

    def build_constellation(self) -> np.ndarray:
        points = np.empty(8, dtype=np.complex128)
        for position in range(8):
            points[gray(position)] = np.exp(2j * np.pi * position / 8)
        return points


class Pam4Modulation(LinearModulation):
    name = "PAM4"

    def build_constellation(self) -> np.ndarray:
        return normalize_power(gray_pam_levels(4).astype(np.complex128))


class QamModulation(LinearModulation):
    """Square M-QAM: upper bits select the I level, lower bits the Q level, each Gray-coded."""

    side = 4

    def build_constellation(self) -> np.ndarray:
        levels = gray_pam_levels(self.side)
        symbols = np.arange(self.side * self.side)
        points = levels[symbols // self.side] + 1j * levels[symbols % self.side]
        return normalize_power(points)


class Qam16Modulation(QamModulation):
    name = "QAM16"
    side = 4


class Qam64Modulation(QamModulation):
    name = "QAM64"
    side = 8
