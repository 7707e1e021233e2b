# Copyright (c) 2024 by Jonathan AW
# config.py
# Purpose: Holds the configuration settings for the toolkit, like worker counts, logging and the training / pruning defaults.

# config.py

from environs import Env
from dotenv import load_dotenv

load_dotenv()

CODE_VERSION = "0.1.0"

class Config:
    AMR_THREADS = Env().int('AMR_THREADS', 1)  # caps evaluation / synthesis parallelism
    AMR_LOG_LEVEL = Env().str('AMR_LOG_LEVEL', 'INFO')
    AMR_LOG_DIR = Env().str('AMR_LOG_DIR', '')
    AMR_BATCH_SIZE = Env().int('AMR_BATCH_SIZE', 128)
    AMR_MAX_EPOCHS = Env().int('AMR_MAX_EPOCHS', 200)
    AMR_LR = Env().float('AMR_LR', 1e-3)
    AMR_LR_FACTOR = Env().float('AMR_LR_FACTOR', 0.5)
    AMR_LR_PATIENCE = Env().int('AMR_LR_PATIENCE', 5)
    AMR_MIN_LR = Env().float('AMR_MIN_LR', 1e-6)
    AMR_EARLY_STOP_PATIENCE = Env().int('AMR_EARLY_STOP_PATIENCE', 50)
    AMR_MIN_DELTA = Env().float('AMR_MIN_DELTA', 1e-6)
    AMR_PRUNE_FREQUENCY = Env().int('AMR_PRUNE_FREQUENCY', 100)
    AMR_PRUNE_EPOCHS = Env().int('AMR_PRUNE_EPOCHS', 5)
    AMR_OMEGA_MAX = Env().float('AMR_OMEGA_MAX', 0.01)

class DevelopmentConfig(Config):
    DEBUG = True

class TestingConfig(Config):
    TESTING = True
    AMR_THREADS = 1
    AMR_LOG_DIR = ''

class ProductionConfig(Config):
    DEBUG = False
    AMR_LOG_LEVEL = Env().str('AMR_LOG_LEVEL', 'WARNING')

CONFIGS = {
    "development": DevelopmentConfig,
    "testing": TestingConfig,
    "production": ProductionConfig,
}

def get_active_config() -> type:
    """Return the configuration class selected by AMR_ENV (development by default)."""
    return CONFIGS.get(Env().str('AMR_ENV', 'development'), DevelopmentConfig)
