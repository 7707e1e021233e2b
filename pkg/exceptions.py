# Copyright (c) 2024 by Jonathan AW

"""
1. Custom Exceptions:
- The exceptions module contains custom exceptions that are raised in different parts of the application to handle specific error scenarios.
- The CLI maps each family onto an exit code (see cli/main.py).
"""
from typing import Optional


class DimensionMismatchException(Exception):
    """Raised when tensor shapes do not conform for an operation."""
    pass

class InvalidConfigurationException(Exception):
    """Raised when a model, schedule, split or run configuration is invalid or inconsistent."""
    pass

class InvalidInputDataException(Exception):
    """Raised when invalid data is provided to a numeric operation (e.g. non one-hot labels)."""
    pass

class ScheduleRangeException(Exception):
    """Raised when a pruning step lies outside the sparsity schedule grid."""
    pass

class InvalidDatasetException(Exception):
    """Raised when a dataset is empty or disagrees with its manifest."""
    pass

class InvalidUsageException(Exception):
    """Raised when command-line flags are combined in an unsupported way."""
    pass

class DatasetFormatException(Exception):
    """Raised when an .amrd dataset file is malformed. Carries the byte offset of the fault."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset

class CheckpointFormatException(Exception):
    """Raised when a .pcgd checkpoint file is malformed. Carries the byte offset of the fault."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset

class TrainingDivergenceException(Exception):
    """Raised when the training loss becomes NaN or infinite."""

    def __init__(self, message: str, epoch: int, step: Optional[int] = None):
        super().__init__(f"{message} (epoch {epoch}, step {step})")
        self.epoch = epoch
        self.step = step
