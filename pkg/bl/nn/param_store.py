# Copyright (c) 2024 by Jonathan AW
# param_store.py
# Summary: Named, ordered collection of parameter tensors with their gradients and prunable flags.
"""
Design Pattern: Repository (in-memory)

- ParamStore is the single owner of every trainable tensor of a model. Layers, the optimizer,
  the pruning masks and the checkpoint store all address tensors by name through it.
- Iteration order is insertion order; names are unique.
"""

from collections import OrderedDict
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from exceptions import DimensionMismatchException, InvalidConfigurationException


@dataclass
class ParamEntry:
    value: np.ndarray
    grad: np.ndarray
    prunable: bool = False


class ParamStore:
    """
    Ordered map name -> (value, gradient, prunable flag).
    """

    def __init__(self, dtype=np.float32):
        self.dtype = np.dtype(dtype)
        self.__entries: "OrderedDict[str, ParamEntry]" = OrderedDict()

    # ===============================
    # Construction and lookup
    # ===============================

    def add(self, name: str, value: np.ndarray, prunable: bool = False) -> ParamEntry:
        """
        Register a new tensor. The value is copied and cast to the store's dtype.
        """
        if name in self.__entries:
            raise InvalidConfigurationException(f"Parameter '{name}' is already registered.")
        value = np.array(value, dtype=self.dtype, copy=True)
        entry = ParamEntry(value=value, grad=np.zeros_like(value), prunable=prunable)
        self.__entries[name] = entry
        return entry

    def entry(self, name: str) -> ParamEntry:
        try:
            return self.__entries[name]
        except KeyError:
            raise InvalidConfigurationException(f"Missing parameter entry: '{name}'.")

    def value(self, name: str) -> np.ndarray:
        return self.entry(name).value

    def grad(self, name: str) -> np.ndarray:
        return self.entry(name).grad

    def set_value(self, name: str, value: np.ndarray) -> None:
        entry = self.entry(name)
        value = np.asarray(value)
        if value.shape != entry.value.shape:
            raise DimensionMismatchException(f"Parameter '{name}' expects shape {entry.value.shape}, got {value.shape}.")
        entry.value[...] = value

    def accumulate_grad(self, name: str, grad: np.ndarray) -> None:
        entry = self.entry(name)
        if grad.shape != entry.grad.shape:
            raise DimensionMismatchException(f"Gradient for '{name}' expects shape {entry.grad.shape}, got {grad.shape}.")
        entry.grad += grad

    def __contains__(self, name: str) -> bool:
        return name in self.__entries

    def __len__(self) -> int:
        return len(self.__entries)

    def __iter__(self) -> Iterator[str]:
        return iter(self.__entries)

    def names(self) -> List[str]:
        return list(self.__entries)

    def items(self) -> Iterator[Tuple[str, ParamEntry]]:
        return iter(self.__entries.items())

    # ===============================
    # Bulk operations
    # ===============================

    def zero_grad(self) -> None:
        for entry in self.__entries.values():
            entry.grad.fill(0)

    def size(self) -> int:
        """Total number of scalars over all tensors."""
        return int(sum(entry.value.size for entry in self.__entries.values()))

    def snapshot(self) -> Dict[str, np.ndarray]:
        """Deep copy of all values (used for best-epoch weights)."""
        return {name: entry.value.copy() for name, entry in self.__entries.items()}

    def restore(self, snapshot: Dict[str, np.ndarray]) -> None:
        for name, value in snapshot.items():
            self.set_value(name, value)

    def astype(self, dtype) -> "ParamStore":
        """Copy of the store in another precision (gradients are reset)."""
        other = ParamStore(dtype)
        for name, entry in self.__entries.items():
            other.add(name, entry.value, entry.prunable)
        return other

    def all_finite(self, names: Optional[List[str]] = None) -> bool:
        names = self.names() if names is None else names
        return all(np.all(np.isfinite(self.value(n))) and np.all(np.isfinite(self.grad(n))) for n in names)
