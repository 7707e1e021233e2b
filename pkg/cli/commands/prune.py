# Copyright (c) 2024 by Jonathan AW
# cli/commands/prune.py
# Summary: `amr prune` prunes a trained checkpoint to a target sparsity while fine-tuning it.

import argparse
import logging
import os

from bl.pruning.sparsity_schedule import default_schedule
from bl.services.evaluation_service import evaluate_per_snr
from bl.services.pruning_service import PruningService
from cli.commands.common import (add_seed_argument, add_training_arguments, load_dataset, load_model_checkpoint,
                                 open_unit_interval, positive_int, record_run, split, train_config)
from dal.checkpoint_store import save_checkpoint
from dal.metrics_writer import MetricsWriter
from exceptions import InvalidUsageException
from utils.config_utils import get_configuration_value

logger = logging.getLogger(__name__)

PRUNED_CHECKPOINT = "pruned.pcgd"


def register(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("prune", help="gradual magnitude pruning with fine-tuning")
    parser.add_argument("--checkpoint", help="trained .pcgd checkpoint")
    parser.add_argument("--data", help="dataset the checkpoint was trained on")
    parser.add_argument("--sparsity", type=open_unit_interval, help="final sparsity in (0, 1), e.g. 0.5 0.8 0.9 0.95")
    parser.add_argument("--prune-freq", type=positive_int, default=get_configuration_value('AMR_PRUNE_FREQUENCY', 100),
                        help="steps between mask updates")
    parser.add_argument("--prune-biases", action="store_true", help="mask bias tensors as well")
    parser.add_argument("--out-dir", help="output directory")
    add_training_arguments(parser, epochs_default=get_configuration_value('AMR_PRUNE_EPOCHS', 5))
    add_seed_argument(parser)
    parser.set_defaults(handler=run)
    return parser


def run(args: argparse.Namespace) -> int:
    if not args.out_dir:
        raise InvalidUsageException("--out-dir is required")
    if args.sparsity is None or not 0.0 < args.sparsity < 1.0:
        raise InvalidUsageException("--sparsity must be given and lie in (0, 1)")
    data = load_dataset(args.data)
    checkpoint = load_model_checkpoint(args.checkpoint, data)
    train, _, test = split(data, args.seed)

    service = PruningService(train_config(args), include_biases=args.prune_biases)
    total_steps = service.total_steps(len(train))
    schedule = default_schedule(total_steps, args.sparsity, args.prune_freq)
    logger.info("Pruning to sparsity %.4f over %d steps (%d mask updates)", args.sparsity, total_steps, schedule.increments + 1)
    result = service.prune_finetune(checkpoint.model, train, schedule)

    out_path = os.path.join(args.out_dir, PRUNED_CHECKPOINT)
    writer = MetricsWriter(args.out_dir)
    save_checkpoint(out_path, result.model, result.masks)
    writer.write_nnz_report(result.report())
    writer.write_evaluation(evaluate_per_snr(result.model, test, args.batch_size))

    record_run(args, args.out_dir, {"checkpoint": args.checkpoint, "data": args.data, "out": out_path}, data)
    return 0
