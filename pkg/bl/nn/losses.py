# Copyright (c) 2024 by Jonathan AW
# losses.py
# Summary: Categorical cross-entropy on softmax outputs.

from typing import Tuple

import numpy as np

from bl.nn.layers import softmax
from exceptions import DimensionMismatchException, InvalidInputDataException


def check_one_hot(labels: np.ndarray) -> None:
    if labels.ndim != 2:
        raise DimensionMismatchException(f"labels must be [batch, C], got {labels.shape}.")
    is_binary = np.all((labels == 0) | (labels == 1))
    if not is_binary or not np.all(labels.sum(axis=1) == 1):
        raise InvalidInputDataException("Every label row must be one-hot.")


def one_hot(class_ids: np.ndarray, classes: int, dtype=np.float32) -> np.ndarray:
    class_ids = np.asarray(class_ids, dtype=np.int64)
    if np.any(class_ids < 0) or np.any(class_ids >= classes):
        raise InvalidInputDataException(f"Class ids must lie in [0, {classes}).")
    out = np.zeros((class_ids.shape[0], classes), dtype=dtype)
    out[np.arange(class_ids.shape[0]), class_ids] = 1
    return out


def softmax_cross_entropy(logits: np.ndarray, labels: np.ndarray) -> Tuple[float, np.ndarray]:
    """
    Mean over the batch of -log p[true class], and its gradient (softmax(logits) - labels) / batch
    wrt the logits.
    """
    if logits.shape != labels.shape:
        raise DimensionMismatchException(f"logits {logits.shape} and labels {labels.shape} differ in shape.")
    check_one_hot(labels)
    batch = logits.shape[0]
    shifted = logits - np.max(logits, axis=1, keepdims=True)
    log_probs = shifted - np.log(np.sum(np.exp(shifted), axis=1, keepdims=True))
    loss = float(-np.sum(log_probs * labels) / batch)
    grad = (softmax(logits) - labels) / batch
    return loss, grad.astype(logits.dtype, copy=False)
