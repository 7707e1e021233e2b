# Copyright (c) 2024 by Jonathan AW
# ablation_service.py
# Summary: Controlled comparison of the full network against the classifier-only variant over several seeds.
"""
For every seed both variants see the same split (split seed = run seed), the same initialization seed
and the same training configuration; only the variant differs.
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from bl.factories.model_variant_factory import ModelVariantFactory
from bl.model.model_spec import VARIANT_FULL, VARIANT_PART3_ONLY
from bl.modulations.dataset_synth import Dataset
from bl.services.evaluation_service import evaluate_per_snr
from bl.services.split_service import SplitSpec, split_dataset
from bl.services.training_service import TrainConfig, TrainingService
from exceptions import InvalidConfigurationException
from utils.data_validation import SUPPORTED_FRAME_LENGTHS

logger = logging.getLogger(__name__)

MIN_ABLATION_SEEDS = 3
VARIANTS = (VARIANT_FULL, VARIANT_PART3_ONLY)


@dataclass
class AblationRow:
    variant: str
    seed: int
    snr_db: int
    accuracy: float
    n: int


@dataclass
class AblationReport:
    rows: List[AblationRow] = field(default_factory=list)
    config: Dict[str, dict] = field(default_factory=dict)  # variant -> echoed run configuration

    def summary(self) -> List[Tuple[str, int, float, float, int]]:
        """(variant, snr_db, mean accuracy, std over seeds, seed count) per variant and SNR."""
        out = []
        for variant in VARIANTS:
            snrs = sorted({r.snr_db for r in self.rows if r.variant == variant})
            for snr in snrs:
                acc = [r.accuracy for r in self.rows if r.variant == variant and r.snr_db == snr]
                out.append((variant, snr, float(np.mean(acc)), float(np.std(acc)), len(acc)))
        return out

    def mean_accuracy(self, variant: str, min_snr: int = 0) -> Optional[float]:
        acc = [r.accuracy for r in self.rows if r.variant == variant and r.snr_db >= min_snr]
        return float(np.mean(acc)) if acc else None

    def high_snr_gap(self, min_snr: int = 0) -> Optional[float]:
        """Mean accuracy of the full variant minus that of the classifier-only variant on SNR >= min_snr."""
        full, part3 = self.mean_accuracy(VARIANT_FULL, min_snr), self.mean_accuracy(VARIANT_PART3_ONLY, min_snr)
        return None if full is None or part3 is None else full - part3


class AblationService:

    def __init__(self, config: TrainConfig, split_ratios: Tuple[float, float, float] = (0.6, 0.2, 0.2)):
        self.config = config
        self.split_ratios = split_ratios

    def run_ablation(self, dataset: Dataset, seeds: Sequence[int]) -> AblationReport:
        if len(seeds) < MIN_ABLATION_SEEDS:
            raise InvalidConfigurationException(f"An ablation needs at least {MIN_ABLATION_SEEDS} seeds, got {len(seeds)}.")

        report = AblationReport()
        factory = ModelVariantFactory()
        for variant in VARIANTS:
            report.config[variant] = dict(asdict(self.config), variant=variant, seeds=list(seeds),
                                          split_ratios=list(self.split_ratios), dataset_hash=dataset.manifest_hash())

        for seed in seeds:
            train, val, test = split_dataset(dataset, SplitSpec(self.split_ratios, seed))
            cfg = TrainConfig(**dict(asdict(self.config), seed=seed))
            for variant in VARIANTS:
                model = factory.create_model(variant, dataset.length, dataset.classes, seed,
                                             toy=dataset.length not in SUPPORTED_FRAME_LENGTHS)
                model, _ = TrainingService(cfg).train(model, train, val)
                record = evaluate_per_snr(model, test, cfg.batch_size)
                for snr, bucket in record.buckets.items():
                    report.rows.append(AblationRow(variant, seed, snr, bucket.accuracy, bucket.n))
                logger.info("ablation seed %d %s: high-SNR accuracy %.4f", seed, variant, record.accuracy_at_or_above(0) or 0.0)

        logger.info("ablation gap on SNR >= 0 dB: %s", report.high_snr_gap())
        return report


def run_ablation(dataset: Dataset, cfg: TrainConfig, seeds: Sequence[int]) -> AblationReport:
    return AblationService(cfg).run_ablation(dataset, seeds)
