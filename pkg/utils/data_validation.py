# Copyright (c) 2024 by Jonathan AW

"""
Purpose: Utility functions for validating configuration data before it is processed in the Business Logic Layer (BL).

Design Pattern: Data Validation
- Each function validates a specific type of configuration (model spec, schedule, training config, split, synthesis, channel).
- Each returns (is_valid, message); the BL raises the matching exception with the message.

"""

import math
from typing import Tuple

SUPPORTED_FRAME_LENGTHS = (128, 1024)
MIN_REDUCED_FRAME_LENGTH = 12  # conv1 (width 8) then conv2 (width 5) must leave at least one time step
MODEL_VARIANTS = ('full', 'part3_only')
PULSE_SHAPES = ('rect', 'rrc')

def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)

def _is_real(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def validate_model_spec_data(spec_data: dict) -> Tuple[bool, str]:
    """
    Validate model spec data: frame length, class count and variant.
    Reduced (toy) specs may use any frame length >= 12; production specs only 128 or 1024.
    """
    for field in ['length', 'classes', 'variant']:
        if field not in spec_data or spec_data[field] is None:
            return False, f"Missing or empty field: {field}"

    if not _is_int(spec_data['classes']) or spec_data['classes'] < 2:
        return False, "Invalid value for classes: must be an integer >= 2"

    if spec_data['variant'] not in MODEL_VARIANTS:
        return False, "Invalid value for variant: must be 'full' or 'part3_only'"

    length = spec_data['length']
    if not _is_int(length):
        return False, "Invalid value for length: must be an integer"
    if spec_data.get('reduced', False):
        if length < MIN_REDUCED_FRAME_LENGTH:
            return False, f"Invalid value for length: reduced specs need length >= {MIN_REDUCED_FRAME_LENGTH}"
    elif length not in SUPPORTED_FRAME_LENGTHS:
        return False, "Unsupported frame length: must be 128 or 1024"

    return True, "All fields are valid"


def validate_sparsity_schedule_data(schedule_data: dict) -> Tuple[bool, str]:
    """
    Validate a gradual pruning schedule: 0 <= s_i < s_f <= 1, t0 >= 0, delta_t >= 1, n >= 1.
    """
    for field in ['initial_sparsity', 'final_sparsity', 'start_step', 'frequency', 'increments']:
        if field not in schedule_data or schedule_data[field] is None:
            return False, f"Missing or empty field: {field}"

    s_i = schedule_data['initial_sparsity']
    s_f = schedule_data['final_sparsity']
    if not _is_real(s_i) or not 0.0 <= s_i < 1.0:
        return False, "Invalid value for initial_sparsity: must be in [0, 1)"
    if not _is_real(s_f) or not 0.0 < s_f <= 1.0:
        return False, "Invalid value for final_sparsity: must be in (0, 1]"
    if not s_f > s_i:
        return False, "Invalid value for final_sparsity: must be greater than initial_sparsity"
    if not _is_int(schedule_data['start_step']) or schedule_data['start_step'] < 0:
        return False, "Invalid value for start_step: must be a non-negative integer"
    if not _is_int(schedule_data['frequency']) or schedule_data['frequency'] < 1:
        return False, "Invalid value for frequency: must be an integer >= 1"
    if not _is_int(schedule_data['increments']) or schedule_data['increments'] < 1:
        return False, "Invalid value for increments: must be an integer >= 1"

    return True, "All fields are valid"


def validate_train_config_data(config_data: dict) -> Tuple[bool, str]:
    """
    Validate training hyperparameters. Patience values must be >= 1 and the plateau factor in (0, 1).
    """
    for field in ['batch_size', 'max_epochs', 'lr_patience', 'early_stop_patience']:
        if field in config_data and (not _is_int(config_data[field]) or config_data[field] < 1):
            return False, f"Invalid value for {field}: must be an integer >= 1"

    if 'lr_factor' in config_data and (not _is_real(config_data['lr_factor']) or not 0.0 < config_data['lr_factor'] < 1.0):
        return False, "Invalid value for lr_factor: must be in (0, 1)"

    for field in ['lr', 'min_lr']:
        if field in config_data and (not _is_real(config_data[field]) or config_data[field] <= 0.0):
            return False, f"Invalid value for {field}: must be a positive real"

    if 'min_delta' in config_data and (not _is_real(config_data['min_delta']) or config_data['min_delta'] < 0.0):
        return False, "Invalid value for min_delta: must be a non-negative real"

    if 'seed' in config_data and not _is_int(config_data['seed']):
        return False, "Invalid value for seed: must be an integer"

    return True, "All fields are valid"


def validate_split_spec_data(split_data: dict) -> Tuple[bool, str]:
    """
    Validate a split specification: three non-negative ratios summing to 1.
    """
    ratios = split_data.get('ratios')
    if ratios is None or len(ratios) != 3:
        return False, "Invalid value for ratios: must contain train, validation and test ratios"
    if any(not _is_real(r) or r < 0.0 for r in ratios):
        return False, "Invalid value for ratios: must be non-negative reals"
    if abs(sum(ratios) - 1.0) > 1e-9:
        return False, "Invalid value for ratios: must sum to 1"
    if 'seed' in split_data and not _is_int(split_data['seed']):
        return False, "Invalid value for seed: must be an integer"
    return True, "All fields are valid"


def validate_synth_config_data(synth_data: dict, known_schemes) -> Tuple[bool, str]:
    """
    Validate a synthetic dataset configuration against the registered modulation schemes.
    """
    for field in ['schemes', 'length', 'snrs', 'frames_per_cell']:
        if field not in synth_data or synth_data[field] is None:
            return False, f"Missing or empty field: {field}"

    schemes = synth_data['schemes']
    if not schemes:
        return False, "Invalid value for schemes: at least one scheme is required"
    unknown = [s for s in schemes if s not in known_schemes]
    if unknown:
        return False, f"Unknown modulation scheme(s): {', '.join(unknown)}"
    if len(set(schemes)) != len(schemes):
        return False, "Invalid value for schemes: duplicates are not allowed"

    if synth_data['length'] not in SUPPORTED_FRAME_LENGTHS and not synth_data.get('reduced', False):
        return False, "Unsupported frame length: must be 128 or 1024"
    if not _is_int(synth_data['length']) or synth_data['length'] < 1:
        return False, "Invalid value for length: must be a positive integer"

    if not synth_data['snrs']:
        return False, "Invalid value for snrs: at least one SNR is required"
    if any(not _is_int(s) for s in synth_data['snrs']):
        return False, "Invalid value for snrs: must be integers (dB)"
    if len(set(synth_data['snrs'])) != len(synth_data['snrs']):
        return False, "Invalid value for snrs: duplicates are not allowed"

    if not _is_int(synth_data['frames_per_cell']) or synth_data['frames_per_cell'] < 1:
        return False, "Invalid value for frames_per_cell: zero frames requested"

    if 'samples_per_symbol' in synth_data and (not _is_int(synth_data['samples_per_symbol']) or synth_data['samples_per_symbol'] < 1):
        return False, "Invalid value for samples_per_symbol: must be an integer >= 1"
    if 'pulse' in synth_data and synth_data['pulse'] not in PULSE_SHAPES:
        return False, "Invalid value for pulse: must be 'rect' or 'rrc'"
    if 'rolloff' in synth_data and (not _is_real(synth_data['rolloff']) or not 0.0 < synth_data['rolloff'] <= 1.0):
        return False, "Invalid value for rolloff: must be in (0, 1]"
    if 'omega_max' in synth_data and (not _is_real(synth_data['omega_max']) or synth_data['omega_max'] < 0.0):
        return False, "Invalid value for omega_max: must be a non-negative real"

    return True, "All fields are valid"


def validate_channel_params_data(channel_data: dict) -> Tuple[bool, str]:
    """
    Validate channel parameters: gain > 0, finite offsets, finite SNR (None means noiseless).
    """
    if not _is_real(channel_data.get('gain', 1.0)) or channel_data.get('gain', 1.0) <= 0.0:
        return False, "Invalid value for gain: must be a positive real"
    for field in ['omega', 'phi']:
        if field in channel_data and not _is_real(channel_data[field]):
            return False, f"Invalid value for {field}: must be a finite real"
    if channel_data.get('snr_db') is not None and not _is_real(channel_data['snr_db']):
        return False, "Invalid value for snr_db: must be finite or None"
    return True, "All fields are valid"
