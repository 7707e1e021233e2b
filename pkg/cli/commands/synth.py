# Copyright (c) 2024 by Jonathan AW
# cli/commands/synth.py
# Summary: `amr synth` generates a synthetic .amrd dataset.

import argparse
import json
import logging
import os

from bl.factories.modulation_factory import ModulationFactory
from bl.modulations.dataset_synth import DEFAULT_SCHEMES, SynthConfig, synth_dataset
from cli.commands.common import add_seed_argument, positive_int, record_run
from dal.dataset_store import write_dataset
from exceptions import InvalidUsageException
from utils.config_utils import get_configuration_value
from utils.data_validation import SUPPORTED_FRAME_LENGTHS

logger = logging.getLogger(__name__)


def register(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("synth", help="generate a synthetic I/Q dataset")
    parser.add_argument("--out", help="output .amrd file")
    parser.add_argument("--schemes", nargs="+", default=list(DEFAULT_SCHEMES),
                        help=f"modulation schemes, any of {' '.join(ModulationFactory.scheme_names())}")
    parser.add_argument("--frames-per-cell", type=positive_int, default=200)
    parser.add_argument("--snr-min", type=int, default=-20)
    parser.add_argument("--snr-max", type=int, default=18)
    parser.add_argument("--snr-step", type=positive_int, default=2)
    parser.add_argument("--length", type=int, default=128, help="frame length L (128 or 1024)")
    parser.add_argument("--reduced", action="store_true", help="allow any frame length (toy datasets for tests)")
    parser.add_argument("--samples-per-symbol", type=positive_int, default=8)
    parser.add_argument("--pulse", choices=("rect", "rrc"), default="rect")
    parser.add_argument("--rolloff", type=float, default=0.35)
    parser.add_argument("--omega-max", type=float, default=get_configuration_value('AMR_OMEGA_MAX', 0.01))
    parser.add_argument("--rayleigh", action="store_true", help="per-frame Rayleigh gain")
    add_seed_argument(parser)
    parser.set_defaults(handler=run)
    return parser


def run(args: argparse.Namespace) -> int:
    if not args.out:
        raise InvalidUsageException("--out is required")
    if args.snr_min > args.snr_max:
        raise InvalidUsageException(f"--snr-min {args.snr_min} is above --snr-max {args.snr_max}")
    if args.length not in SUPPORTED_FRAME_LENGTHS and not args.reduced:
        raise InvalidUsageException(f"--length must be one of {SUPPORTED_FRAME_LENGTHS} (or pass --reduced)")

    config = SynthConfig(
        schemes=args.schemes,
        length=args.length,
        snrs=list(range(args.snr_min, args.snr_max + 1, args.snr_step)),
        frames_per_cell=args.frames_per_cell,
        samples_per_symbol=args.samples_per_symbol,
        pulse=args.pulse,
        rolloff=args.rolloff,
        omega_max=args.omega_max,
        rayleigh=args.rayleigh,
        reduced=args.reduced,
    )
    dataset = synth_dataset(config, args.seed)
    write_dataset(dataset, args.out)
    print(json.dumps(dict(dataset.manifest, frame_count=len(dataset)), sort_keys=True))

    record_run(args, os.path.dirname(os.path.abspath(args.out)), {"out": args.out}, dataset)
    return 0
