# Copyright (c) 2024 by Jonathan AW

"""
Purpose: Utility functions for retrieving configuration values from the active configuration class.

"""

from config import get_active_config

def get_configuration_value(key: str, default=None):
    """
    Retrieve a configuration value from the active configuration class (selected by AMR_ENV).
    """
    return getattr(get_active_config(), key, default)
