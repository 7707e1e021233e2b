# Copyright (c) 2024 by Jonathan AW
# cli/__init__.py

import argparse

from cli.commands import ablate, constellation, evaluate, prune, replay, synth, train
from utils.config_utils import get_configuration_value

COMMAND_MODULES = (synth, train, prune, evaluate, ablate, constellation, replay)


def create_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="amr", description="Phase-estimating CNN-GRU modulation recognition toolkit")
    parser.add_argument("--log-level", default=get_configuration_value('AMR_LOG_LEVEL', 'INFO'))

    # Register subcommands
    subparsers = parser.add_subparsers(dest="command", required=True)
    for module in COMMAND_MODULES:
        module.register(subparsers)

    return parser
