# Copyright (c) 2024 by Jonathan AW
# cli/commands/replay.py
# Summary: `amr replay` re-runs a subcommand from its run_manifest.json.

import argparse
import logging

from config import CODE_VERSION
from dal.run_manifest import load_run_manifest
from exceptions import InvalidUsageException

logger = logging.getLogger(__name__)


def register(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("replay", help="re-run a command from its run_manifest.json")
    parser.add_argument("manifest", help="path to run_manifest.json")
    parser.set_defaults(handler=run)
    return parser


def run(args: argparse.Namespace) -> int:
    from cli import create_parser

    manifest = load_run_manifest(args.manifest)
    if manifest.subcommand == "replay":
        raise InvalidUsageException("A replay manifest cannot be replayed")
    if manifest.code_version != CODE_VERSION:
        logger.warning("Manifest was written by version %s, running %s", manifest.code_version, CODE_VERSION)

    replayed = create_parser().parse_args([manifest.subcommand])
    unknown = sorted(set(manifest.flags) - set(vars(replayed)))
    if unknown:
        raise InvalidUsageException(f"Unknown flags for '{manifest.subcommand}' in manifest: {', '.join(unknown)}")
    for key, value in manifest.flags.items():
        setattr(replayed, key, value)

    logger.info("Replaying '%s' from %s", manifest.subcommand, args.manifest)
    return replayed.handler(replayed)
