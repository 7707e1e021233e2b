# Copyright (c) 2024 by Jonathan AW
# modulation_factory.py
# Summary: Resolves a modulation scheme name to its strategy object.
"""
Design Pattern: Factory Method with a lambda mapping (one entry per scheme). Unknown names are a
configuration error; there is no fallback scheme.
"""

from typing import Callable, Dict, Tuple

from bl.modulations.base_modulation import BaseModulation
from bl.modulations.fsk_modulation import CpfskModulation, GfskModulation
from bl.modulations.linear_modulation import (
    BpskModulation,
    Pam4Modulation,
    Psk8Modulation,
    Qam16Modulation,
    Qam64Modulation,
    QpskModulation,
)
from exceptions import InvalidConfigurationException


class ModulationFactory:
    """
    Creates BaseModulation strategies by scheme name.
    """

    modulation_mapping: Dict[str, Callable[[], BaseModulation]] = {
        "BPSK": lambda: BpskModulation(),
        "QPSK": lambda: QpskModulation(),
        "8PSK": lambda: Psk8Modulation(),
        "PAM4": lambda: Pam4Modulation(),
        "QAM16": lambda: Qam16Modulation(),
        "QAM64": lambda: Qam64Modulation(),
        "GFSK": lambda: GfskModulation(),
        "CPFSK": lambda: CpfskModulation(),
    }

    @classmethod
    def scheme_names(cls) -> Tuple[str, ...]:
        return tuple(cls.modulation_mapping)

    @classmethod
    def get_modulation(cls, name: str) -> BaseModulation:
        modulation_factory = cls.modulation_mapping.get(name)
        if not modulation_factory:
            raise InvalidConfigurationException(f"Unknown modulation scheme '{name}'.")
        return modulation_factory()
