# Copyright (c) 2024 by Jonathan AW
# checkpoint_store.py
# Summary: Reader and writer of the .pcgd model checkpoint format.
"""
Layout:

    offset 0   magic      b"PCGD"
    offset 4   u32 LE     format version
    offset 8   u32 LE     byte length n of the JSON manifest
    offset 12  n bytes    UTF-8 JSON manifest
    then                  one blob of little-endian float32 values

The manifest lists the model spec and every tensor as (name, shape, byte offset into the blob, prunable).
Optional sections reuse the same tensor entries: pruning masks (0/1 values), Adam moments and a
training_state dictionary for resuming a run.
"""

import json
import logging
import struct
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
from marshmallow import ValidationError

from bl.model.model_spec import ModelSpec
from bl.model.network import PetCgdnn
from bl.nn.adam import AdamState
from bl.nn.param_store import ParamStore
from bl.pruning.magnitude_masks import MaskSet
from config import CODE_VERSION
from dal.manifest_schemas import CheckpointManifestSchema
from exceptions import CheckpointFormatException, DimensionMismatchException, InvalidConfigurationException

logger = logging.getLogger(__name__)

MAGIC = b"PCGD"
VERSION = 1
HEADER = struct.Struct("<4sII")


@dataclass
class Checkpoint:
    model: PetCgdnn
    masks: Optional[MaskSet] = None
    optimizer: Optional[AdamState] = None
    training_state: Optional[dict] = None


class _BlobWriter:
    def __init__(self):
        self.chunks: List[bytes] = []
        self.offset = 0

    def add(self, name: str, array: np.ndarray, prunable: bool = False) -> dict:
        data = np.ascontiguousarray(array, dtype="<f4").tobytes()
        entry = {"name": name, "shape": list(array.shape), "offset": self.offset, "prunable": prunable}
        self.chunks.append(data)
        self.offset += len(data)
        return entry


def save_checkpoint(path: str, model: PetCgdnn, masks: Optional[MaskSet] = None,
                    optimizer: Optional[AdamState] = None, training_state: Optional[dict] = None) -> None:
    blob = _BlobWriter()
    manifest = {
        "code_version": CODE_VERSION,
        "spec": model.spec.to_dict(),
        "tensors": [blob.add(name, entry.value, entry.prunable) for name, entry in model.params.items()],
        "masks": None,
        "optimizer": None,
        "training_state": training_state,
    }
    if masks is not None:
        manifest["masks"] = [blob.add(name, mask) for name, mask in masks.items()]
    if optimizer is not None:
        manifest["optimizer"] = dict(
            optimizer.hyperparameters(),
            first_moments=[blob.add(name, m) for name, m in optimizer.m.items()],
            second_moments=[blob.add(name, v) for name, v in optimizer.v.items()],
        )
    manifest["blob_length"] = blob.offset

    manifest_bytes = json.dumps(manifest, sort_keys=True, separators=(",", ":")).encode("utf-8")
    with open(path, "wb") as f:
        f.write(HEADER.pack(MAGIC, VERSION, len(manifest_bytes)))
        f.write(manifest_bytes)
        for chunk in blob.chunks:
            f.write(chunk)
    logger.debug("Saved checkpoint %s (%d tensors)", path, len(manifest["tensors"]))


def _read_tensor(blob: bytes, blob_start: int, entry: dict) -> np.ndarray:
    count = int(np.prod(entry["shape"]))
    end = entry["offset"] + 4 * count
    if end > len(blob):
        raise CheckpointFormatException(f"Tensor '{entry['name']}' extends past the end of the file", blob_start + len(blob))
    return np.frombuffer(blob, dtype="<f4", count=count, offset=entry["offset"]).reshape(entry["shape"]).astype(np.float32)


def _read_tensors(blob: bytes, blob_start: int, entries: List[dict]) -> Dict[str, np.ndarray]:
    return {entry["name"]: _read_tensor(blob, blob_start, entry) for entry in entries}


def _parse_header(data: bytes) -> Tuple[dict, int]:
    if len(data) < 4:
        raise CheckpointFormatException("Truncated file: missing magic", 0)
    if data[:4] != MAGIC:
        raise CheckpointFormatException(f"Bad magic {data[:4]!r}, expected {MAGIC!r}", 0)
    if len(data) < HEADER.size:
        raise CheckpointFormatException("Truncated header", 4 if len(data) < 8 else 8)
    _, version, manifest_length = HEADER.unpack_from(data, 0)
    if version != VERSION:
        raise CheckpointFormatException(f"Unsupported format version {version}, expected {VERSION}", 4)
    start = HEADER.size
    if len(data) < start + manifest_length:
        raise CheckpointFormatException("Truncated manifest", start)
    try:
        manifest = CheckpointManifestSchema().load(json.loads(data[start:start + manifest_length].decode("utf-8")))
    except (UnicodeDecodeError, json.JSONDecodeError, ValidationError) as e:
        raise CheckpointFormatException(f"Invalid manifest: {e}", start)
    return manifest, start + manifest_length


def load_checkpoint(path: str, expected_spec: Optional[ModelSpec] = None) -> Checkpoint:
    """
    Load a checkpoint. When expected_spec is given, a different stored spec is a configuration error.
    """
    with open(path, "rb") as f:
        data = f.read()
    manifest, blob_start = _parse_header(data)
    blob = data[blob_start:]
    if len(blob) < manifest["blob_length"]:
        raise CheckpointFormatException("Truncated tensor blob", len(data))
    if len(blob) > manifest["blob_length"]:
        raise CheckpointFormatException("Trailing bytes after the tensor blob", blob_start + manifest["blob_length"])

    try:
        spec = ModelSpec.from_dict(manifest["spec"])
    except InvalidConfigurationException as e:
        raise CheckpointFormatException(f"Invalid model spec: {e}", HEADER.size)
    if expected_spec is not None and spec != expected_spec:
        raise InvalidConfigurationException(f"Checkpoint spec {spec.to_dict()} does not match {expected_spec.to_dict()}.")

    params = ParamStore()
    for entry in manifest["tensors"]:
        params.add(entry["name"], _read_tensor(blob, blob_start, entry), prunable=entry["prunable"])
    try:
        model = PetCgdnn(spec, params)
    except (InvalidConfigurationException, DimensionMismatchException) as e:
        raise CheckpointFormatException(f"Tensor table does not match the model spec: {e}", HEADER.size)

    masks = None
    if manifest["masks"] is not None:
        masks = MaskSet(_read_tensors(blob, blob_start, manifest["masks"]))
        masks.check_shapes(params)

    optimizer = None
    if manifest["optimizer"] is not None:
        opt = manifest["optimizer"]
        optimizer = AdamState.from_hyperparameters(
            opt, _read_tensors(blob, blob_start, opt["first_moments"]), _read_tensors(blob, blob_start, opt["second_moments"]))

    return Checkpoint(model=model, masks=masks, optimizer=optimizer, training_state=manifest["training_state"])
