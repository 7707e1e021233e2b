# Copyright (c) 2024 by Jonathan AW
# base_modulation.py
# Summary: Abstract base class of every digital modulation scheme the generator can synthesize.
"""
Design Pattern: Strategy

- BaseModulation declares the interface shared by the linear (constellation) schemes and the
  continuous-phase (FSK) schemes. The generator only talks to this interface; ModulationFactory
  picks the concrete strategy by name.
"""

from abc import ABC, abstractmethod

import numpy as np

from exceptions import InvalidInputDataException


class BaseModulation(ABC):
    """
    A modulation scheme: maps integer symbols in [0, order) to a complex baseband sequence
    with unit average power.
    """

    name: str = ""
    order: int = 2

    @property
    def cluster_count(self) -> int:
        """Number of clusters expected in a scatter plot of the symbols (used by constellation tightness)."""
        return self.order

    def check_symbols(self, symbols) -> np.ndarray:
        symbols = np.asarray(symbols, dtype=np.int64)
        if symbols.ndim != 1 or symbols.size == 0:
            raise InvalidInputDataException(f"{self.name}: symbols must be a non-empty 1-D sequence.")
        if np.any(symbols < 0) or np.any(symbols >= self.order):
            raise InvalidInputDataException(f"{self.name}: symbol values must lie in [0, {self.order}).")
        return symbols

    def random_symbols(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return rng.integers(0, self.order, size=count)

    @abstractmethod
    def modulate(self, symbols, samples_per_symbol: int = 1, pulse: str = 'rect', rolloff: float = 0.35) -> np.ndarray:
        """
        Complex baseband samples, samples_per_symbol per symbol.
        """
        pass
