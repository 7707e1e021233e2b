# Copyright (c) 2024 by Jonathan AW
# training_service.py
# Summary: Epoch loop with shuffled minibatches, Adam, plateau learning-rate decay, early stopping and best-epoch weights.
"""
Design Patterns:

1. Dependency Injection:
- TrainingService receives its TrainConfig and optional checkpoint paths; the pruning service reuses
  run_epoch() with a mask set and a per-step hook.

2. Callbacks:
- ReduceLROnPlateau and EarlyStopping watch the validation loss after every epoch. Their counters are
  part of TrainingState so an interrupted run resumes exactly where it stopped.

The returned model carries the weights of the epoch with the lowest validation loss.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from bl.model.network import PetCgdnn
from bl.modulations.dataset_synth import Dataset
from bl.nn.adam import AdamState, adam_step
from bl.nn.losses import one_hot
from bl.pruning.magnitude_masks import MaskSet
from bl.services.evaluation_service import batch_slices, evaluate_loss
from bl.services.metrics_record import EpochRecord, MetricsRecord
from dal.checkpoint_store import save_checkpoint
from exceptions import DimensionMismatchException, InvalidConfigurationException, InvalidDatasetException, TrainingDivergenceException
from utils.config_utils import get_configuration_value
from utils.data_validation import validate_train_config_data
from utils.error_handling import handle_error
from utils.rng_utils import substream

logger = logging.getLogger(__name__)


@dataclass
class TrainConfig:
    batch_size: int = 128
    max_epochs: int = 200
    lr: float = 1e-3
    lr_factor: float = 0.5
    lr_patience: int = 5
    min_lr: float = 1e-6
    early_stop_patience: int = 50
    min_delta: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        is_valid, message = validate_train_config_data(asdict(self))
        if not is_valid:
            raise InvalidConfigurationException(message)

    @classmethod
    def from_configuration(cls, **overrides) -> "TrainConfig":
        """Defaults from the active configuration class (AMR_* environment keys), then the overrides."""
        values = {
            "batch_size": get_configuration_value('AMR_BATCH_SIZE', 128),
            "max_epochs": get_configuration_value('AMR_MAX_EPOCHS', 200),
            "lr": get_configuration_value('AMR_LR', 1e-3),
            "lr_factor": get_configuration_value('AMR_LR_FACTOR', 0.5),
            "lr_patience": get_configuration_value('AMR_LR_PATIENCE', 5),
            "min_lr": get_configuration_value('AMR_MIN_LR', 1e-6),
            "early_stop_patience": get_configuration_value('AMR_EARLY_STOP_PATIENCE', 50),
            "min_delta": get_configuration_value('AMR_MIN_DELTA', 1e-6),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


# ===============================
# Callbacks
# ===============================

class ReduceLROnPlateau:
    """Multiply the learning rate by factor once the monitored loss has not improved for patience epochs."""

    def __init__(self, factor: float, patience: int, min_lr: float, min_delta: float):
        self.factor = factor
        self.patience = patience
        self.min_lr = min_lr
        self.min_delta = min_delta
        self.best = math.inf
        self.wait = 0

    def on_epoch_end(self, loss: float, lr: float) -> float:
        if loss < self.best - self.min_delta:
            self.best = loss
            self.wait = 0
            return lr
        self.wait += 1
        if self.wait >= self.patience and lr > self.min_lr:
            new_lr = max(lr * self.factor, self.min_lr)
            logger.info("Validation loss plateaued for %d epochs: learning rate %.3g -> %.3g", self.wait, lr, new_lr)
            self.wait = 0
            return new_lr
        return lr

    def state_dict(self) -> dict:
        return {"best": self.best, "wait": self.wait}

    def load_state(self, state: dict) -> None:
        self.best, self.wait = state["best"], state["wait"]


class EarlyStopping:
    """Signal a stop once the monitored loss has not improved for patience epochs."""

    def __init__(self, patience: int, min_delta: float):
        self.patience = patience
        self.min_delta = min_delta
        self.best = math.inf
        self.wait = 0

    def on_epoch_end(self, loss: float) -> bool:
        if loss < self.best - self.min_delta:
            self.best = loss
            self.wait = 0
            return False
        self.wait += 1
        return self.wait >= self.patience

    def state_dict(self) -> dict:
        return {"best": self.best, "wait": self.wait}

    def load_state(self, state: dict) -> None:
        self.best, self.wait = state["best"], state["wait"]


@dataclass
class TrainingState:
    """Everything besides weights and Adam moments needed to resume a run after `epoch` epochs."""
    epoch: int = 0
    global_step: int = 0
    lr: float = 1e-3
    best_val_loss: float = math.inf
    best_epoch: int = -1
    plateau: dict = field(default_factory=dict)
    early_stopping: dict = field(default_factory=dict)
    epochs: List[dict] = field(default_factory=list)
    stopped: bool = False

    def to_dict(self) -> dict:
        data = asdict(self)
        # JSON has no infinity
        data["best_val_loss"] = None if math.isinf(self.best_val_loss) else self.best_val_loss
        for key in ("plateau", "early_stopping"):
            if data[key] and math.isinf(data[key]["best"]):
                data[key] = dict(data[key], best=None)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "TrainingState":
        data = dict(data)
        data["best_val_loss"] = math.inf if data["best_val_loss"] is None else data["best_val_loss"]
        for key in ("plateau", "early_stopping"):
            if data[key] and data[key]["best"] is None:
                data[key] = dict(data[key], best=math.inf)
        return cls(**data)


class TrainingService:
    """
    Trains a PetCgdnn on a train split while monitoring a validation split.
    """

    def __init__(self, config: TrainConfig, checkpoint_path: Optional[str] = None, last_path: Optional[str] = None,
                 checkpoint_saver: Callable = save_checkpoint):
        self.config = config
        self.checkpoint_path = checkpoint_path
        self.last_path = last_path
        self.checkpoint_saver = checkpoint_saver

    # ===============================
    # One epoch
    # ===============================

    def run_epoch(self, model: PetCgdnn, x: np.ndarray, labels: np.ndarray, epoch: int, optimizer: AdamState,
                  global_step: int, masks: Optional[MaskSet] = None,
                  step_hook: Optional[Callable[[int], None]] = None) -> Tuple[float, float, int]:
        """
        One pass over (x, labels) in the order drawn from the (seed, "shuffle", epoch) substream.
        Returns (mean train loss, train accuracy, global step after the epoch).

        With masks, pruned gradients are discarded before each Adam step and the masks are re-applied after it.
        step_hook(global_step) runs before every step.
        """
        order = substream(self.config.seed, "shuffle", epoch).permutation(x.shape[0])
        targets = one_hot(labels, model.spec.classes, dtype=model.dtype)
        total_loss, correct = 0.0, 0

        for s in batch_slices(x.shape[0], self.config.batch_size):
            if step_hook is not None:
                step_hook(global_step)
            idx = order[s]
            grad_masks = masks.grad_masks() if masks is not None else None
            loss, probs = model.backward(x[idx], targets[idx], return_probs=True)
            if not math.isfinite(loss) or not model.params.all_finite():
                handle_error(TrainingDivergenceException("Training loss diverged", epoch=epoch, step=global_step),
                             "Non-finite loss or weights")
            adam_step(model.params, optimizer, grad_masks)
            if masks is not None:
                masks.apply(model.params)
            total_loss += loss * len(idx)
            correct += int(np.sum(np.argmax(probs, axis=1) == labels[idx]))
            global_step += 1

        return total_loss / x.shape[0], correct / x.shape[0], global_step

    # ===============================
    # Full protocol
    # ===============================

    def _check_inputs(self, model: PetCgdnn, train: Dataset, val: Dataset) -> None:
        if len(train) == 0 or len(val) == 0:
            raise InvalidDatasetException("Training and validation splits must be non-empty.")
        for name, data in (("train", train), ("validation", val)):
            if data.length != model.spec.length:
                raise InvalidConfigurationException(f"The {name} frames have L={data.length}, the model expects L={model.spec.length}.")
            if data.classes != model.spec.classes:
                raise DimensionMismatchException(f"The {name} data has {data.classes} classes, the model has {model.spec.classes}.")

    def train(self, model: PetCgdnn, train: Dataset, val: Dataset, optimizer: Optional[AdamState] = None,
              state: Optional[TrainingState] = None, best_weights: Optional[dict] = None) -> Tuple[PetCgdnn, MetricsRecord]:
        """
        Train until early stopping fires or max_epochs is reached; return the model with the weights of the
        lowest validation loss and the per-epoch records. Passing optimizer / state / best_weights resumes a run.
        """
        self._check_inputs(model, train, val)
        cfg = self.config
        x, labels, _ = train.arrays()

        optimizer = optimizer or AdamState(lr=cfg.lr)
        state = state or TrainingState(lr=cfg.lr)
        plateau = ReduceLROnPlateau(cfg.lr_factor, cfg.lr_patience, cfg.min_lr, cfg.min_delta)
        early_stopping = EarlyStopping(cfg.early_stop_patience, cfg.min_delta)
        if state.plateau:
            plateau.load_state(state.plateau)
        if state.early_stopping:
            early_stopping.load_state(state.early_stopping)
        if best_weights is None and state.best_epoch >= 0:
            logger.warning("No weights for best epoch %d: the best epoch is chosen again from the remaining epochs",
                           state.best_epoch)
            state.best_val_loss, state.best_epoch = math.inf, -1
        best = best_weights if best_weights is not None else model.params.snapshot()

        while not state.stopped and state.epoch < cfg.max_epochs:
            epoch = state.epoch
            optimizer.lr = state.lr
            train_loss, train_acc, state.global_step = self.run_epoch(model, x, labels, epoch, optimizer, state.global_step)
            val_loss, val_acc = evaluate_loss(model, val, cfg.batch_size)
            if not math.isfinite(val_loss):
                handle_error(TrainingDivergenceException("Validation loss diverged", epoch=epoch, step=state.global_step),
                             "Non-finite validation loss")

            record = EpochRecord(epoch=epoch, lr=state.lr, train_loss=train_loss, train_acc=train_acc, val_loss=val_loss, val_acc=val_acc)
            state.epochs.append(record.to_dict())
            logger.info("epoch %d lr %.3g train_loss %.5f train_acc %.4f val_loss %.5f val_acc %.4f",
                        epoch, state.lr, train_loss, train_acc, val_loss, val_acc)

            if val_loss < state.best_val_loss:
                state.best_val_loss, state.best_epoch = val_loss, epoch
                best = model.params.snapshot()
                if self.checkpoint_path:
                    self.checkpoint_saver(self.checkpoint_path, model, None, None, None)

            state.lr = plateau.on_epoch_end(val_loss, state.lr)
            state.stopped = early_stopping.on_epoch_end(val_loss)
            if state.stopped:
                logger.info("Early stopping after epoch %d (best epoch %d)", epoch, state.best_epoch)
            state.plateau, state.early_stopping = plateau.state_dict(), early_stopping.state_dict()
            state.epoch = epoch + 1
            if self.last_path:
                self.checkpoint_saver(self.last_path, model, None, optimizer, state.to_dict())

        model.params.restore(best)
        return model, MetricsRecord(epochs=[EpochRecord(**e) for e in state.epochs])
