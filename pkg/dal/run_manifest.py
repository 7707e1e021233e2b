# Copyright (c) 2024 by Jonathan AW
# run_manifest.py
# Summary: run_manifest.json, the record from which any command can be replayed.
"""
The manifest holds the subcommand, every parsed flag, the seeds, the input/output paths, the code
version and the hash of the input dataset manifest. No timestamp: replaying a run rewrites an
identical file.
"""

import json
import logging
import os
from dataclasses import asdict, dataclass, field
from typing import Dict, Optional

from marshmallow import ValidationError

from config import CODE_VERSION
from dal.manifest_schemas import RunManifestSchema
from exceptions import InvalidUsageException

logger = logging.getLogger(__name__)

RUN_MANIFEST_FILE = "run_manifest.json"


@dataclass
class RunManifest:
    subcommand: str
    flags: Dict[str, object]
    seeds: Dict[str, int] = field(default_factory=dict)
    paths: Dict[str, Optional[str]] = field(default_factory=dict)
    code_version: str = CODE_VERSION
    dataset_hash: Optional[str] = None


def save_run_manifest(manifest: RunManifest, out_dir: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, RUN_MANIFEST_FILE)
    data = RunManifestSchema().dump(asdict(manifest))
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, sort_keys=True, indent=2)
        f.write("\n")
    logger.info("Run manifest written to %s", path)
    return path


def load_run_manifest(path: str) -> RunManifest:
    try:
        with open(path, encoding="utf-8") as f:
            data = RunManifestSchema().load(json.load(f))
    except (OSError, json.JSONDecodeError, ValidationError) as e:
        raise InvalidUsageException(f"Cannot read run manifest '{path}': {e}")
    return RunManifest(**data)
