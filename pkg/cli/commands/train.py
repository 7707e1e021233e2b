# Copyright (c) 2024 by Jonathan AW
# cli/commands/train.py
# Summary: `amr train` trains a model variant and writes its best checkpoint and metrics.
"""
Files written to --out-dir:

    best.pcgd           weights of the epoch with the lowest validation loss
    last.pcgd           weights, Adam state and training state after the latest epoch (for --resume)
    epochs.csv          per-epoch learning rate, losses and accuracies
    snr_accuracy.csv    per-SNR test accuracy of the best weights, plus confusion_<snr>.csv files
    run_manifest.json
"""

import argparse
import logging
import os

from bl.factories.model_variant_factory import VARIANT_ALIASES, ModelVariantFactory
from bl.services.evaluation_service import evaluate_per_snr
from bl.services.training_service import TrainingService, TrainingState
from cli.commands.common import add_seed_argument, add_training_arguments, load_dataset, record_run, split, train_config
from dal.checkpoint_store import load_checkpoint
from dal.metrics_writer import MetricsWriter
from exceptions import InvalidUsageException
from utils.data_validation import SUPPORTED_FRAME_LENGTHS

logger = logging.getLogger(__name__)

BEST_CHECKPOINT = "best.pcgd"
LAST_CHECKPOINT = "last.pcgd"


def register(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("train", help="train a model on a dataset")
    parser.add_argument("--data", help="input .amrd dataset")
    parser.add_argument("--variant", choices=sorted(VARIANT_ALIASES), default="full")
    parser.add_argument("--out-dir", help="output directory")
    parser.add_argument("--resume", action="store_true", help=f"continue from {LAST_CHECKPOINT} in --out-dir")
    add_training_arguments(parser)
    add_seed_argument(parser)
    parser.set_defaults(handler=run)
    return parser


def run(args: argparse.Namespace) -> int:
    if not args.out_dir:
        raise InvalidUsageException("--out-dir is required")
    data = load_dataset(args.data)
    train, val, test = split(data, args.seed)
    cfg = train_config(args)

    best_path = os.path.join(args.out_dir, BEST_CHECKPOINT)
    last_path = os.path.join(args.out_dir, LAST_CHECKPOINT)
    writer = MetricsWriter(args.out_dir)

    model = ModelVariantFactory().create_model(args.variant, data.length, data.classes, args.seed,
                                               toy=data.length not in SUPPORTED_FRAME_LENGTHS)
    optimizer, state, best_weights = None, None, None
    if args.resume:
        if not os.path.isfile(last_path):
            raise InvalidUsageException(f"--resume needs {last_path}")
        last = load_checkpoint(last_path, expected_spec=model.spec)
        if last.optimizer is None or last.training_state is None:
            raise InvalidUsageException(f"{last_path} carries no optimizer or training state")
        model, optimizer, state = last.model, last.optimizer, TrainingState.from_dict(last.training_state)
        if os.path.isfile(best_path):
            best_weights = load_checkpoint(best_path, expected_spec=model.spec).model.params.snapshot()
        logger.info("Resuming %s after epoch %d (step %d)", args.variant, state.epoch, state.global_step)

    trainer = TrainingService(cfg, checkpoint_path=best_path, last_path=last_path)
    model, record = trainer.train(model, train, val, optimizer=optimizer, state=state, best_weights=best_weights)
    writer.write_epochs(record)

    evaluation = evaluate_per_snr(model, test, cfg.batch_size)
    writer.write_evaluation(evaluation)
    logger.info("Test accuracy: highest %.4f, average %.4f", evaluation.highest_accuracy, evaluation.average_accuracy)

    record_run(args, args.out_dir, {"data": args.data, "out_dir": args.out_dir, "checkpoint": best_path}, data)
    return 0
