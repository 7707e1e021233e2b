# Copyright (c) 2024 by Jonathan AW
# conftest.py

"""
Shared fixtures for testing.

Design Patterns:

1. Fixture:
- Fixtures provide fixed, seeded baselines (random generators, toy models, small datasets, scratch
  directories) so every test runs repeatably.

2. Dependency Injection:
- Tests receive models, datasets and training configurations through fixtures instead of building them
  inline, so the expensive ones (datasets) are built once per session.
"""

import numpy as np
import pytest

from bl.model.model_spec import ModelSpec
from bl.model.network import build
from bl.modulations.dataset_synth import SynthConfig, synth_dataset
from bl.services.training_service import TrainConfig
from tests.helpers import TOY_LENGTH, make_separable_dataset


@pytest.fixture(autouse=True)
def testing_environment(monkeypatch):
    """Every test runs against the testing configuration class."""
    monkeypatch.setenv("AMR_ENV", "testing")


@pytest.fixture(scope="function")
def rng():
    yield np.random.default_rng(1234)


@pytest.fixture(scope="function")
def toy_spec():
    yield ModelSpec.toy(TOY_LENGTH, 3)


@pytest.fixture(scope="function")
def toy_model(toy_spec):
    """Full-variant toy model (L=16, C=3) in 32-bit."""
    yield build(toy_spec, seed=7)


@pytest.fixture(scope="function")
def toy_model64(toy_spec):
    """Full-variant toy model (L=16, C=3) in 64-bit, for tight gradient checks."""
    yield build(toy_spec, seed=7, dtype=np.float64)


@pytest.fixture(scope="session")
def toy_synth_config():
    return SynthConfig(schemes=["BPSK", "QPSK", "QAM16"], length=TOY_LENGTH, snrs=[0, 10],
                       frames_per_cell=10, samples_per_symbol=2, reduced=True)


@pytest.fixture(scope="session")
def toy_dataset(toy_synth_config):
    """3 schemes x 2 SNRs x 10 frames of length 16."""
    return synth_dataset(toy_synth_config, seed=11)


@pytest.fixture(scope="function")
def separable_dataset():
    yield make_separable_dataset()


@pytest.fixture(scope="function")
def fast_train_config():
    yield TrainConfig(batch_size=16, max_epochs=3, lr=1e-3, lr_patience=5, early_stop_patience=50, seed=3)
