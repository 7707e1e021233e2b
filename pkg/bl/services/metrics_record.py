# Copyright (c) 2024 by Jonathan AW
# metrics_record.py
# Summary: Per-epoch training records and per-SNR evaluation results.

from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional

import numpy as np


@dataclass
class EpochRecord:
    epoch: int
    lr: float
    train_loss: float
    train_acc: float
    val_loss: float
    val_acc: float

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class SnrBucket:
    snr_db: int
    n: int
    correct: int
    confusion: np.ndarray  # [C, C], rows = true class, columns = predicted class

    @property
    def accuracy(self) -> float:
        return self.correct / self.n


@dataclass
class MetricsRecord:
    epochs: List[EpochRecord] = field(default_factory=list)
    buckets: Dict[int, SnrBucket] = field(default_factory=dict)
    empty_buckets: List[int] = field(default_factory=list)

    def accuracy_by_snr(self) -> Dict[int, float]:
        return {snr: bucket.accuracy for snr, bucket in sorted(self.buckets.items())}

    @property
    def highest_accuracy(self) -> Optional[float]:
        return max(self.accuracy_by_snr().values()) if self.buckets else None

    @property
    def average_accuracy(self) -> Optional[float]:
        """Unweighted mean over the non-empty SNR buckets."""
        return float(np.mean(list(self.accuracy_by_snr().values()))) if self.buckets else None

    def accuracy_at_or_above(self, snr_db: int) -> Optional[float]:
        """Pooled accuracy over every frame whose SNR is at least snr_db."""
        selected = [b for snr, b in self.buckets.items() if snr >= snr_db]
        total = sum(b.n for b in selected)
        return sum(b.correct for b in selected) / total if total else None

    def best_epoch(self) -> Optional[EpochRecord]:
        return min(self.epochs, key=lambda r: r.val_loss) if self.epochs else None
