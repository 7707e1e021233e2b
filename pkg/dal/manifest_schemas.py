# Copyright (c) 2024 by Jonathan AW

# dal/manifest_schemas.py
"""
Explicit marshmallow schemas for every JSON manifest the toolkit writes:

1. DatasetManifestSchema    - header of an .amrd dataset file
2. CheckpointManifestSchema - header of a .pcgd checkpoint file (spec, tensor table, masks, optimizer)
3. RunManifestSchema        - run_manifest.json written next to every command output

Loading a manifest through its schema is the only way the readers accept it; a ValidationError is turned
into the matching format exception by the store that reads the file.
"""
from marshmallow import Schema, fields, validate

from utils.data_validation import MODEL_VARIANTS, PULSE_SHAPES


class DatasetManifestSchema(Schema):
    schemes = fields.List(fields.Str(), required=True, validate=validate.Length(min=1))
    length = fields.Int(required=True, validate=validate.Range(min=1))
    snrs = fields.List(fields.Int(), required=True, validate=validate.Length(min=1))
    frames_per_cell = fields.Int(allow_none=True, validate=validate.Range(min=1))
    samples_per_symbol = fields.Int(validate=validate.Range(min=1))
    pulse = fields.Str(validate=validate.OneOf(PULSE_SHAPES))
    rolloff = fields.Float()
    omega_max = fields.Float()
    rayleigh = fields.Bool()
    seed = fields.Int(allow_none=True)
    subset = fields.Str(allow_none=True)
    frame_count = fields.Int(required=True, validate=validate.Range(min=1))


class ModelSpecSchema(Schema):
    length = fields.Int(required=True)
    classes = fields.Int(required=True, validate=validate.Range(min=2))
    variant = fields.Str(required=True, validate=validate.OneOf(MODEL_VARIANTS))
    reduced = fields.Bool(load_default=False)


class TensorEntrySchema(Schema):
    name = fields.Str(required=True)
    shape = fields.List(fields.Int(validate=validate.Range(min=1)), required=True)
    offset = fields.Int(required=True, validate=validate.Range(min=0))
    prunable = fields.Bool(load_default=False)


class OptimizerSchema(Schema):
    lr = fields.Float(required=True)
    beta1 = fields.Float(required=True)
    beta2 = fields.Float(required=True)
    epsilon = fields.Float(required=True)
    step = fields.Int(required=True, validate=validate.Range(min=0))
    first_moments = fields.List(fields.Nested(TensorEntrySchema), required=True)
    second_moments = fields.List(fields.Nested(TensorEntrySchema), required=True)


class CheckpointManifestSchema(Schema):
    code_version = fields.Str(required=True)
    spec = fields.Nested(ModelSpecSchema, required=True)
    tensors = fields.List(fields.Nested(TensorEntrySchema), required=True)
    masks = fields.List(fields.Nested(TensorEntrySchema), allow_none=True, load_default=None)
    optimizer = fields.Nested(OptimizerSchema, allow_none=True, load_default=None)
    training_state = fields.Dict(allow_none=True, load_default=None)
    blob_length = fields.Int(required=True, validate=validate.Range(min=0))


class RunManifestSchema(Schema):
    subcommand = fields.Str(required=True)
    flags = fields.Dict(keys=fields.Str(), required=True)
    seeds = fields.Dict(keys=fields.Str(), values=fields.Int(), required=True)
    paths = fields.Dict(keys=fields.Str(), values=fields.Str(allow_none=True), required=True)
    code_version = fields.Str(required=True)
    dataset_hash = fields.Str(allow_none=True, load_default=None)
