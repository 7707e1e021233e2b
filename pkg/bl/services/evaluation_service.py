# Copyright (c) 2024 by Jonathan AW
# evaluation_service.py
# Summary: Per-SNR accuracy, confusion matrices and batched loss evaluation of a model.
"""
Batches may be predicted on several worker threads (AMR_THREADS); results are gathered in batch order,
so every reduction runs in the same order whatever the worker count.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, List, Optional, Tuple

import numpy as np

from bl.model.network import PetCgdnn
from bl.modulations.dataset_synth import Dataset
from bl.nn.losses import one_hot
from bl.services.metrics_record import MetricsRecord, SnrBucket
from exceptions import InvalidDatasetException
from utils.config_utils import get_configuration_value

logger = logging.getLogger(__name__)


def batch_slices(count: int, batch_size: int) -> List[slice]:
    return [slice(start, min(start + batch_size, count)) for start in range(0, count, batch_size)]


def evaluate_predictions(labels: np.ndarray, predictions: np.ndarray, snrs: np.ndarray, classes: int,
                         expected_snrs: Optional[Iterable[int]] = None) -> MetricsRecord:
    """
    Accuracy and confusion matrix per SNR bucket for any predictor. SNRs listed in expected_snrs that
    have no frames are excluded from the averages and reported in empty_buckets.
    """
    labels, predictions, snrs = np.asarray(labels), np.asarray(predictions), np.asarray(snrs)
    if labels.size == 0:
        raise InvalidDatasetException("Cannot evaluate an empty test set.")

    record = MetricsRecord()
    for snr in sorted(set(snrs.tolist())):
        selected = snrs == snr
        confusion = np.zeros((classes, classes), dtype=np.int64)
        np.add.at(confusion, (labels[selected], predictions[selected]), 1)
        record.buckets[int(snr)] = SnrBucket(snr_db=int(snr), n=int(selected.sum()),
                                             correct=int(np.trace(confusion)), confusion=confusion)

    if expected_snrs is not None:
        record.empty_buckets = sorted(int(s) for s in expected_snrs if int(s) not in record.buckets)
        if record.empty_buckets:
            logger.warning("SNR buckets without test frames: %s", record.empty_buckets)
    return record


def predict_dataset(model: PetCgdnn, x: np.ndarray, batch_size: int = 128, threads: Optional[int] = None) -> np.ndarray:
    threads = threads or get_configuration_value('AMR_THREADS', 1)
    slices = batch_slices(x.shape[0], batch_size)
    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        parts = list(executor.map(lambda s: model.predict(x[s]), slices))
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def evaluate_per_snr(m: PetCgdnn, test: Dataset, batch_size: int = 128, threads: Optional[int] = None) -> MetricsRecord:
    if len(test) == 0:
        raise InvalidDatasetException("Cannot evaluate an empty test set.")
    x, labels, snrs = test.arrays()
    predictions = predict_dataset(m, x, batch_size, threads)
    record = evaluate_predictions(labels, predictions, snrs, m.spec.classes, test.manifest.get("snrs"))
    logger.info("Evaluated %d frames: highest %.4f, average %.4f", len(test), record.highest_accuracy, record.average_accuracy)
    return record


def evaluate_loss(m: PetCgdnn, data: Dataset, batch_size: int = 128) -> Tuple[float, float]:
    """(mean cross-entropy, accuracy) over the whole dataset."""
    x, labels, _ = data.arrays()
    if x.shape[0] == 0:
        raise InvalidDatasetException("Cannot evaluate an empty dataset.")
    targets = one_hot(labels, m.spec.classes)
    total_loss, correct = 0.0, 0
    for s in batch_slices(x.shape[0], batch_size):
        batch_loss, probs = m.loss_and_probs(x[s], targets[s])
        total_loss += batch_loss * (s.stop - s.start)
        correct += int(np.sum(np.argmax(probs, axis=1) == labels[s]))
    return total_loss / x.shape[0], correct / x.shape[0]
