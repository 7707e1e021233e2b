# Copyright (c) 2024 by Jonathan AW
# pruning_service.py
# Summary: Gradual magnitude pruning with mask-preserving fine-tuning of a trained model.

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from bl.model.network import PetCgdnn
from bl.modulations.dataset_synth import Dataset
from bl.nn.adam import AdamState
from bl.pruning.magnitude_masks import MaskSet, apply_magnitude_masks, count_nnz, nnz_report
from bl.pruning.sparsity_schedule import SparsitySchedule, steps_per_epoch
from bl.services.training_service import TrainConfig, TrainingService
from exceptions import InvalidConfigurationException, InvalidDatasetException

logger = logging.getLogger(__name__)


@dataclass
class PruneResult:
    model: PetCgdnn
    masks: MaskSet
    schedule: SparsitySchedule
    total_steps: int
    nnz: int

    def report(self) -> List[Tuple[str, int, int, float]]:
        return nnz_report(self.model.params, self.masks)


class PruningService:
    """
    Fine-tunes a trained model for config.max_epochs epochs (no early stopping) while its sparsity follows the schedule.
    """

    def __init__(self, config: TrainConfig, include_biases: bool = False):
        self.config = config
        self.epochs = config.max_epochs
        self.include_biases = include_biases

    def total_steps(self, frames: int) -> int:
        return self.epochs * steps_per_epoch(frames, self.config.batch_size)

    def prune_finetune(self, m: PetCgdnn, data: Dataset, sched: SparsitySchedule,
                       masks: Optional[MaskSet] = None) -> PruneResult:
        """
        At every schedule step t the masks are recomputed at sparsity_at(t); after every Adam step the masks
        are re-applied so pruned weights stay exactly zero and their gradients are discarded.
        """
        if len(data) == 0:
            raise InvalidDatasetException("Fine-tuning data is empty.")
        if sched.final_sparsity >= 1.0:
            raise InvalidConfigurationException("Final sparsity must be below 1.")
        total_steps = self.total_steps(len(data))
        if sched.end_step > total_steps - 1:
            raise InvalidConfigurationException(
                f"Schedule ends at step {sched.end_step} but fine-tuning runs only {total_steps} steps.")

        masks = masks or MaskSet.for_params(m.params, self.include_biases)

        def prune_on_schedule(step: int) -> None:
            if sched.is_pruning_step(step):
                sparsity = sched.sparsity_at(step)
                apply_magnitude_masks(m.params, masks, sparsity)
                logger.info("step %d sparsity %.4f nnz %d", step, sparsity, count_nnz(m.params, masks))

        trainer = TrainingService(self.config)
        x, labels, _ = data.arrays()
        optimizer = AdamState(lr=self.config.lr)
        global_step = 0
        for epoch in range(self.epochs):
            loss, acc, global_step = trainer.run_epoch(m, x, labels, epoch, optimizer, global_step, masks, prune_on_schedule)
            logger.info("fine-tune epoch %d loss %.5f acc %.4f", epoch, loss, acc)

        nnz = count_nnz(m.params, masks)
        logger.info("Pruning finished after %d steps: final sparsity %.4f, nnz %d", global_step, sched.final_sparsity, nnz)
        return PruneResult(model=m, masks=masks, schedule=sched, total_steps=global_step, nnz=nnz)


def prune_finetune(m: PetCgdnn, data: Dataset, sched: SparsitySchedule, cfg: TrainConfig,
                   include_biases: bool = False) -> PruneResult:
    return PruningService(cfg, include_biases).prune_finetune(m, data, sched)
