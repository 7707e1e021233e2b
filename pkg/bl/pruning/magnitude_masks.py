# Copyright (c) 2024 by Jonathan AW
# magnitude_masks.py
# Summary: Per-tensor binary pruning masks, layer-wise magnitude pruning and NNZ accounting.

from collections import OrderedDict
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from bl.nn.param_store import ParamStore
from exceptions import DimensionMismatchException, InvalidInputDataException


def pruned_count(sparsity: float, size: int) -> int:
    """floor(s * N); the epsilon absorbs binary rounding of s * N (0.29 * 100 = 28.999...)."""
    return int(np.floor(sparsity * size + 1e-9))


class MaskSet:
    """
    Binary masks (uint8, 0 or 1) with the shape of the tensors they prune.
    """

    def __init__(self, masks: Optional[Dict[str, np.ndarray]] = None):
        self.masks: "OrderedDict[str, np.ndarray]" = OrderedDict()
        for name, mask in (masks or {}).items():
            self.set_mask(name, mask)

    @classmethod
    def for_params(cls, params: ParamStore, include_biases: bool = False) -> "MaskSet":
        """All-ones masks for every prunable tensor (every tensor when include_biases is set)."""
        return cls({name: np.ones(entry.value.shape, dtype=np.uint8)
                    for name, entry in params.items() if entry.prunable or include_biases})

    def set_mask(self, name: str, mask: np.ndarray) -> None:
        mask = np.asarray(mask)
        if not np.all((mask == 0) | (mask == 1)):
            raise InvalidInputDataException(f"Mask '{name}' is not binary.")
        self.masks[name] = mask.astype(np.uint8)

    def __contains__(self, name: str) -> bool:
        return name in self.masks

    def __getitem__(self, name: str) -> np.ndarray:
        return self.masks[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self.masks)

    def __len__(self) -> int:
        return len(self.masks)

    def items(self):
        return self.masks.items()

    def check_shapes(self, params: ParamStore) -> None:
        for name, mask in self.masks.items():
            if mask.shape != params.value(name).shape:
                raise DimensionMismatchException(f"Mask '{name}' has shape {mask.shape}, weights are {params.value(name).shape}.")

    def apply(self, params: ParamStore) -> None:
        """Multiply the weights by their masks in place."""
        for name, mask in self.masks.items():
            params.value(name)[...] *= mask

    def grad_masks(self) -> Dict[str, np.ndarray]:
        return dict(self.masks)


def apply_magnitude_masks(params: ParamStore, masks: MaskSet, s: float) -> MaskSet:
    """
    For each masked tensor independently, zero the mask of the floor(s * N) smallest |w|
    (ties: entries the previous mask already pruned first, then lower flat index), then multiply the weights
    by the mask. A zero weight that is still unmasked never displaces a pruned one, so masks only shrink
    along a non-decreasing schedule.
    """
    if not 0.0 <= s < 1.0:
        raise InvalidInputDataException(f"Sparsity must lie in [0, 1), got {s}.")
    masks.check_shapes(params)
    for name in masks:
        weights = params.value(name)
        k = pruned_count(s, weights.size)
        # lexsort: last key is primary, stable on full ties
        order = np.lexsort((masks[name].reshape(-1), np.abs(weights).reshape(-1)))
        mask = np.ones(weights.size, dtype=np.uint8)
        mask[order[:k]] = 0
        masks.set_mask(name, mask.reshape(weights.shape))
    masks.apply(params)
    return masks


def count_nnz(params: ParamStore, masks: MaskSet) -> int:
    """Scalars with a nonzero mask plus every scalar of an unmasked tensor."""
    return sum(int(masks[name].sum()) if name in masks else entry.value.size for name, entry in params.items())


def nnz_report(params: ParamStore, masks: MaskSet) -> List[Tuple[str, int, int, float]]:
    """Rows (name, size, nnz, sparsity) per tensor followed by a 'total' row."""
    rows = []
    for name, entry in params.items():
        size = entry.value.size
        nnz = int(masks[name].sum()) if name in masks else size
        rows.append((name, size, nnz, 1.0 - nnz / size))
    total_size = params.size()
    total_nnz = count_nnz(params, masks)
    rows.append(("total", total_size, total_nnz, 1.0 - total_nnz / total_size if total_size else 0.0))
    return rows
