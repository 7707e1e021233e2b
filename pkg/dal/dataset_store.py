# Copyright (c) 2024 by Jonathan AW
# dataset_store.py
# Summary: Reader and writer of the .amrd dataset file format.
"""
Layout (all integers little-endian):

    offset 0   magic      b"AMRD"
    offset 4   u32        format version
    offset 8   u32        byte length n of the JSON manifest
    offset 12  n bytes    UTF-8 JSON manifest (dataset manifest plus frame_count)
    then per frame        u16 class_id, i16 snr_db, 2*L float32 (I row then Q row)

Every format fault raises DatasetFormatException carrying the byte offset where reading failed.
"""

import json
import logging
import struct

import numpy as np
from marshmallow import ValidationError

from bl.modulations.dataset_synth import Dataset, Frame
from dal.manifest_schemas import DatasetManifestSchema
from exceptions import DatasetFormatException, InvalidDatasetException

logger = logging.getLogger(__name__)

MAGIC = b"AMRD"
VERSION = 1
HEADER = struct.Struct("<4sII")


def frame_dtype(length: int) -> np.dtype:
    return np.dtype([("class_id", "<u2"), ("snr_db", "<i2"), ("iq", "<f4", (2, length))])


def encode_manifest(dataset: Dataset) -> bytes:
    header = dict(dataset.manifest, frame_count=len(dataset))
    try:
        header = DatasetManifestSchema().load(header)
    except ValidationError as e:
        raise InvalidDatasetException(f"Invalid dataset manifest: {e.messages}")
    return json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")


def write_dataset(dataset: Dataset, path: str) -> None:
    """
    Write the dataset; empty or inconsistent datasets are rejected with InvalidDatasetException.
    """
    dataset.check_consistency()
    manifest_bytes = encode_manifest(dataset)

    records = np.zeros(len(dataset), dtype=frame_dtype(dataset.length))
    records["class_id"] = [f.class_id for f in dataset.frames]
    records["snr_db"] = [f.snr_db for f in dataset.frames]
    records["iq"] = np.stack([f.iq for f in dataset.frames])

    with open(path, "wb") as f:
        f.write(HEADER.pack(MAGIC, VERSION, len(manifest_bytes)))
        f.write(manifest_bytes)
        f.write(records.tobytes())
    logger.info("Wrote %d frames to %s", len(dataset), path)


def read_dataset(path: str) -> Dataset:
    with open(path, "rb") as f:
        data = f.read()

    if len(data) < 4:
        raise DatasetFormatException("Truncated file: missing magic", 0)
    if data[:4] != MAGIC:
        raise DatasetFormatException(f"Bad magic {data[:4]!r}, expected {MAGIC!r}", 0)
    if len(data) < HEADER.size:
        raise DatasetFormatException("Truncated header", 4 if len(data) < 8 else 8)
    _, version, manifest_length = HEADER.unpack_from(data, 0)
    if version != VERSION:
        raise DatasetFormatException(f"Unsupported format version {version}, expected {VERSION}", 4)

    start = HEADER.size
    if len(data) < start + manifest_length:
        raise DatasetFormatException("Truncated manifest", start)
    try:
        header = DatasetManifestSchema().load(json.loads(data[start:start + manifest_length].decode("utf-8")))
    except (UnicodeDecodeError, json.JSONDecodeError, ValidationError) as e:
        raise DatasetFormatException(f"Invalid manifest: {e}", start)

    frame_count = header.pop("frame_count")
    dtype = frame_dtype(header["length"])
    offset = start + manifest_length
    available = (len(data) - offset) // dtype.itemsize
    if available < frame_count:
        raise DatasetFormatException(f"Truncated frame {available} of {frame_count}", offset + available * dtype.itemsize)
    if len(data) > offset + frame_count * dtype.itemsize:
        raise DatasetFormatException("Trailing bytes after the last frame", offset + frame_count * dtype.itemsize)

    records = np.frombuffer(data, dtype=dtype, count=frame_count, offset=offset)
    frames = [Frame(iq=np.array(r["iq"], dtype=np.float32), class_id=int(r["class_id"]), snr_db=int(r["snr_db"]))
              for r in records]
    dataset = Dataset(manifest=header, frames=frames)
    try:
        dataset.check_consistency()
    except InvalidDatasetException as e:
        raise DatasetFormatException(f"Frames disagree with the manifest: {e}", offset)
    return dataset
