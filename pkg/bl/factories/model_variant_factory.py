# Copyright (c) 2024 by Jonathan AW
# model_variant_factory.py
# Summary: Maps model variant names (and their command-line aliases) onto model builders.
"""
Design Pattern: Factory Method

- 'full' builds the complete network (phase estimator + transformer + classifier).
- 'part3_only' (alias 'part3') builds the classifier alone, the ablation variant.
"""

from typing import Callable, Dict

import numpy as np

from bl.model.model_spec import VARIANT_FULL, VARIANT_PART3_ONLY, ModelSpec
from bl.model.network import PetCgdnn, build
from exceptions import InvalidConfigurationException

VARIANT_ALIASES = {
    "full": VARIANT_FULL,
    "part3_only": VARIANT_PART3_ONLY,
    "part3": VARIANT_PART3_ONLY,
}


class ModelVariantFactory:
    """
    Creates PetCgdnn instances for a variant name.
    """

    def __init__(self, dtype=np.float32):
        self.dtype = dtype

    @staticmethod
    def resolve_variant(name: str) -> str:
        variant = VARIANT_ALIASES.get(name)
        if variant is None:
            raise InvalidConfigurationException(f"Unknown model variant '{name}'; expected one of {sorted(VARIANT_ALIASES)}.")
        return variant

    def create_model(self, name: str, length: int, classes: int, seed: int, toy: bool = False) -> PetCgdnn:
        variant = self.resolve_variant(name)
        builders: Dict[str, Callable[[], PetCgdnn]] = {
            VARIANT_FULL: lambda: build(ModelSpec(length, classes, VARIANT_FULL, toy), seed, self.dtype),
            VARIANT_PART3_ONLY: lambda: build(ModelSpec(length, classes, VARIANT_PART3_ONLY, toy), seed, self.dtype),
        }
        return builders[variant]()
