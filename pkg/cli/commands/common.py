# Copyright (c) 2024 by Jonathan AW
# cli/commands/common.py
# Summary: Flag types and input/output helpers shared by the subcommands.

import argparse
import logging
import os
from typing import Dict, Optional

from bl.modulations.dataset_synth import Dataset
from bl.services.split_service import SplitSpec, split_dataset
from bl.services.training_service import TrainConfig
from dal.checkpoint_store import Checkpoint, load_checkpoint
from dal.dataset_store import read_dataset
from dal.run_manifest import RunManifest, save_run_manifest
from exceptions import InvalidConfigurationException, InvalidUsageException
from utils.config_utils import get_configuration_value

logger = logging.getLogger(__name__)

# parser bookkeeping that is not part of a run's flag set
_NON_FLAG_KEYS = ("command", "handler")


def open_unit_interval(value: str) -> float:
    """argparse type for a real strictly between 0 and 1."""
    try:
        number = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{value}' is not a number")
    if not 0.0 < number < 1.0:
        raise argparse.ArgumentTypeError(f"{number} is outside (0, 1)")
    return number


def positive_int(value: str) -> int:
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{value}' is not an integer")
    if number < 1:
        raise argparse.ArgumentTypeError(f"{number} must be at least 1")
    return number


def add_seed_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="root seed of every random stream (default 0)")


def add_training_arguments(parser: argparse.ArgumentParser, epochs_default=None) -> None:
    parser.add_argument("--epochs", "--prune-epochs", dest="epochs", type=positive_int, default=epochs_default,
                        help="maximum number of epochs")
    parser.add_argument("--batch-size", "--batch", dest="batch_size", type=positive_int,
                        default=get_configuration_value('AMR_BATCH_SIZE', 128))
    parser.add_argument("--lr", type=float, default=None, help="initial Adam learning rate")


def train_config(args: argparse.Namespace, **overrides) -> TrainConfig:
    values = dict(batch_size=args.batch_size, max_epochs=args.epochs, lr=args.lr, seed=args.seed)
    values.update(overrides)
    return TrainConfig.from_configuration(**values)


def require_file(path: Optional[str], flag: str) -> str:
    if not path:
        raise InvalidUsageException(f"{flag} is required")
    if not os.path.isfile(path):
        raise InvalidUsageException(f"{flag} '{path}' does not exist")
    return path


def load_dataset(path: str) -> Dataset:
    return read_dataset(require_file(path, "--data"))


def load_model_checkpoint(path: str, data: Optional[Dataset] = None) -> Checkpoint:
    """Load a checkpoint; when data is given, its frame length and class count must match the model."""
    checkpoint = load_checkpoint(require_file(path, "--checkpoint"))
    spec = checkpoint.model.spec
    if data is not None and (spec.length != data.length or spec.classes != data.classes):
        raise InvalidConfigurationException(
            f"Checkpoint expects L={spec.length}, C={spec.classes}; the dataset has L={data.length}, C={data.classes}.")
    return checkpoint


def split(data: Dataset, seed: int):
    return split_dataset(data, SplitSpec(seed=seed))


def flag_set(args: argparse.Namespace) -> Dict[str, object]:
    return {key: value for key, value in sorted(vars(args).items()) if key not in _NON_FLAG_KEYS}


def record_run(args: argparse.Namespace, out_dir: str, paths: Dict[str, Optional[str]],
               dataset: Optional[Dataset] = None) -> str:
    manifest = RunManifest(
        subcommand=args.command,
        flags=flag_set(args),
        seeds={"seed": args.seed},
        paths=paths,
        dataset_hash=dataset.manifest_hash() if dataset is not None else None,
    )
    return save_run_manifest(manifest, out_dir)
