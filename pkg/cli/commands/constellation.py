# Copyright (c) 2024 by Jonathan AW
# cli/commands/constellation.py
# Summary: `amr constellation` exports phase transformer inputs/outputs and cluster tightness.

import argparse
import logging

from bl.services.constellation_service import ConstellationService
from cli.commands.common import add_seed_argument, load_dataset, load_model_checkpoint, positive_int, record_run
from dal.metrics_writer import MetricsWriter
from exceptions import InvalidUsageException

logger = logging.getLogger(__name__)


def register(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("constellation", help="export the constellation before and after phase transformation")
    parser.add_argument("--checkpoint", help="full-variant .pcgd checkpoint")
    parser.add_argument("--data", help="input .amrd dataset")
    parser.add_argument("--scheme", default=None, help="only frames of this scheme")
    parser.add_argument("--snr", type=int, default=None, help="only frames of this SNR (dB)")
    parser.add_argument("--max-frames", type=positive_int, default=None)
    parser.add_argument("--out-dir", help="output directory")
    add_seed_argument(parser)
    parser.set_defaults(handler=run)
    return parser


def run(args: argparse.Namespace) -> int:
    if not args.out_dir:
        raise InvalidUsageException("--out-dir is required")
    data = load_dataset(args.data)
    model = load_model_checkpoint(args.checkpoint, data).model
    schemes = data.manifest["schemes"]
    if args.scheme is not None and args.scheme not in schemes:
        raise InvalidUsageException(f"--scheme {args.scheme} is not in the dataset ({', '.join(schemes)})")

    frames = [f for f in data.frames
              if (args.scheme is None or schemes[f.class_id] == args.scheme) and (args.snr is None or f.snr_db == args.snr)]
    if args.max_frames is not None:
        frames = frames[:args.max_frames]
    if not frames:
        raise InvalidUsageException("No frames match --scheme / --snr")

    export = ConstellationService(schemes, args.seed).export_constellation(model, frames)
    MetricsWriter(args.out_dir).write_constellation(export)
    mean = export.mean_frame_tightness()
    print(f"mean per-frame tightness: in {mean['in']:.6f}, out {mean['out']:.6f}")

    record_run(args, args.out_dir, {"checkpoint": args.checkpoint, "data": args.data, "out_dir": args.out_dir}, data)
    return 0
