# Copyright (c) 2024 by Jonathan AW
"""
Purpose: Standardized error logging and the mapping of exception families onto process exit codes.

Exit codes: 0 success, 2 usage / configuration, 3 data format, 4 numeric / training failure.
"""

import logging

from exceptions import (
    CheckpointFormatException,
    DatasetFormatException,
    DimensionMismatchException,
    InvalidConfigurationException,
    InvalidDatasetException,
    InvalidInputDataException,
    InvalidUsageException,
    ScheduleRangeException,
    TrainingDivergenceException,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA_FORMAT = 3
EXIT_NUMERIC = 4

_EXIT_CODES = (
    ((InvalidUsageException, InvalidConfigurationException, ScheduleRangeException), EXIT_USAGE),
    ((DatasetFormatException, CheckpointFormatException, InvalidDatasetException), EXIT_DATA_FORMAT),
    ((TrainingDivergenceException, FloatingPointError, DimensionMismatchException, InvalidInputDataException), EXIT_NUMERIC),
)

def log_error(message: str):
    """
    Log an error message using Python's logging framework.
    """
    logging.error(message)

def handle_error(exception: Exception, custom_message: str = ""):
    """
    Standardized error handling function that logs the error and raises an exception.
    """
    log_error(f"{custom_message}: {str(exception)}")
    raise exception

def exit_code_for(exception: BaseException) -> int:
    """
    Map an exception raised by a subcommand onto the documented exit code.
    Unknown exceptions are treated as numeric / runtime failures.
    """
    for families, code in _EXIT_CODES:
        if isinstance(exception, families):
            return code
    return EXIT_NUMERIC
