# Copyright (c) 2024 by Jonathan AW
# cli/commands/ablate.py
# Summary: `amr ablate` compares the full network against the classifier-only variant over several seeds.

import argparse
import logging

from bl.services.ablation_service import MIN_ABLATION_SEEDS, AblationService
from cli.commands.common import add_seed_argument, add_training_arguments, load_dataset, positive_int, record_run, train_config
from dal.metrics_writer import MetricsWriter
from exceptions import InvalidUsageException

logger = logging.getLogger(__name__)


def register(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("ablate", help="full vs part3_only comparison")
    parser.add_argument("--data", help="input .amrd dataset")
    parser.add_argument("--seeds", type=positive_int, default=MIN_ABLATION_SEEDS,
                        help="number of seeds; runs use seeds --seed, --seed + 1, ...")
    parser.add_argument("--out-dir", help="output directory")
    add_training_arguments(parser)
    add_seed_argument(parser)
    parser.set_defaults(handler=run)
    return parser


def run(args: argparse.Namespace) -> int:
    if not args.out_dir:
        raise InvalidUsageException("--out-dir is required")
    if args.seeds < MIN_ABLATION_SEEDS:
        raise InvalidUsageException(f"--seeds must be at least {MIN_ABLATION_SEEDS}")
    data = load_dataset(args.data)
    seeds = [args.seed + i for i in range(args.seeds)]

    report = AblationService(train_config(args)).run_ablation(data, seeds)
    MetricsWriter(args.out_dir).write_ablation(report)
    gap = report.high_snr_gap()
    if gap is not None:
        print(f"mean accuracy gap (full - part3_only) on SNR >= 0 dB: {gap:+.4f}")

    record_run(args, args.out_dir, {"data": args.data, "out_dir": args.out_dir}, data)
    return 0
