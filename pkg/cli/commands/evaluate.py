# Copyright (c) 2024 by Jonathan AW
# cli/commands/evaluate.py
# Summary: `amr eval` writes per-SNR accuracy and confusion matrices of a checkpoint.

import argparse
import logging

from bl.services.evaluation_service import evaluate_per_snr
from cli.commands.common import add_seed_argument, load_dataset, load_model_checkpoint, positive_int, record_run, split
from dal.metrics_writer import MetricsWriter
from exceptions import InvalidUsageException
from utils.config_utils import get_configuration_value

logger = logging.getLogger(__name__)


def register(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("eval", help="evaluate a checkpoint per SNR")
    parser.add_argument("--checkpoint", help=".pcgd checkpoint")
    parser.add_argument("--data", help="input .amrd dataset")
    parser.add_argument("--split", choices=("test", "all"), default="test",
                        help="evaluate the test split (seeded by --seed) or every frame")
    parser.add_argument("--batch-size", "--batch", dest="batch_size", type=positive_int,
                        default=get_configuration_value('AMR_BATCH_SIZE', 128))
    parser.add_argument("--threads", type=positive_int, default=None, help="prediction workers (default AMR_THREADS)")
    parser.add_argument("--out-dir", help="output directory")
    add_seed_argument(parser)
    parser.set_defaults(handler=run)
    return parser


def run(args: argparse.Namespace) -> int:
    if not args.out_dir:
        raise InvalidUsageException("--out-dir is required")
    data = load_dataset(args.data)
    model = load_model_checkpoint(args.checkpoint, data).model
    test = split(data, args.seed)[2] if args.split == "test" else data

    record = evaluate_per_snr(model, test, args.batch_size, args.threads)
    MetricsWriter(args.out_dir).write_evaluation(record)
    print(f"highest accuracy {record.highest_accuracy:.4f}, average accuracy {record.average_accuracy:.4f}")

    record_run(args, args.out_dir, {"checkpoint": args.checkpoint, "data": args.data, "out_dir": args.out_dir}, data)
    return 0
