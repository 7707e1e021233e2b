# Copyright (c) 2024 by Jonathan AW
# split_service.py
# Summary: Stratified train / validation / test split of a dataset per (class, SNR) cell.

import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from bl.modulations.dataset_synth import Dataset
from exceptions import InvalidConfigurationException
from utils.data_validation import validate_split_spec_data
from utils.rng_utils import substream

logger = logging.getLogger(__name__)

MIN_CELL_FRAMES = 5


@dataclass(frozen=True)
class SplitSpec:
    ratios: Tuple[float, float, float] = (0.6, 0.2, 0.2)
    seed: int = 0

    def __post_init__(self):
        is_valid, message = validate_split_spec_data({"ratios": list(self.ratios), "seed": self.seed})
        if not is_valid:
            raise InvalidConfigurationException(message)


def allocate(n: int, ratios: Sequence[float]) -> List[int]:
    """floor(r * n) per part; the remainder goes one frame at a time to train, val, test, train, ..."""
    counts = [int(np.floor(r * n + 1e-9)) for r in ratios]
    remainder = n - sum(counts)
    for i in range(remainder):
        counts[i % len(counts)] += 1
    return counts


def split_dataset(d: Dataset, spec: SplitSpec) -> Tuple[Dataset, Dataset, Dataset]:
    """
    Random, seed-determined split of every (class, snr) cell. The three parts are disjoint and together
    hold every frame; within a part frames keep their original order.
    """
    cells = defaultdict(list)
    for index, frame in enumerate(d.frames):
        cells[(frame.class_id, frame.snr_db)].append(index)

    rng = substream(spec.seed, "split")
    parts: List[List[int]] = [[], [], []]
    for cell in sorted(cells):
        indices = np.array(cells[cell])
        if len(indices) < MIN_CELL_FRAMES:
            raise InvalidConfigurationException(
                f"Cell (class {cell[0]}, snr {cell[1]} dB) has {len(indices)} frames; at least {MIN_CELL_FRAMES} are required.")
        shuffled = indices[rng.permutation(len(indices))]
        start = 0
        for part, count in zip(parts, allocate(len(indices), spec.ratios)):
            part.extend(shuffled[start:start + count].tolist())
            start += count

    train, val, test = (d.subset(sorted(p), name) for p, name in zip(parts, ("train", "val", "test")))
    logger.info("Split %d frames into train %d / val %d / test %d", len(d), len(train), len(val), len(test))
    return train, val, test
