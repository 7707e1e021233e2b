# Copyright (c) 2024 by Jonathan AW

"""
Unit Testing of the training service:

Key Tests to Include:
- Plateau learning-rate decay and early stopping callbacks.
- Minibatch epochs: step counting and seed determinism.
- The full protocol learns a separable problem, stops early and returns the best-epoch weights.
- Checkpoint hooks, resumption from the last checkpoint (with or without best-epoch weights) and
  divergence detection.
"""
# test_training_service.py

import copy
import math
from dataclasses import replace

import numpy as np
import pytest

from bl.model.model_spec import ModelSpec
from bl.model.network import build
from bl.nn.adam import AdamState
from bl.services.evaluation_service import evaluate_loss
from bl.services.split_service import SplitSpec, split_dataset
from bl.services.training_service import EarlyStopping, ReduceLROnPlateau, TrainConfig, TrainingService, TrainingState
from exceptions import (DimensionMismatchException, InvalidConfigurationException, InvalidDatasetException,
                        TrainingDivergenceException)
from tests.helpers import TOY_LENGTH


@pytest.fixture(scope="function")
def separable_splits(separable_dataset):
    yield split_dataset(separable_dataset, SplitSpec(seed=0))


@pytest.fixture(scope="function")
def binary_model():
    yield build(ModelSpec.toy(TOY_LENGTH, 2), seed=0)

# Positive Test Cases

def test_plateau_keeps_lr_while_improving():
    plateau = ReduceLROnPlateau(factor=0.5, patience=2, min_lr=1e-6, min_delta=0.0)
    lr = 1e-3
    for loss in (1.0, 0.9, 0.8, 0.7):
        lr = plateau.on_epoch_end(loss, lr)
    assert lr == 1e-3

def test_plateau_halves_lr_after_patience():
    plateau = ReduceLROnPlateau(factor=0.5, patience=2, min_lr=1e-6, min_delta=0.0)
    lrs = []
    lr = 1e-3
    for loss in (1.0, 1.0, 1.0, 1.0, 1.0):
        lr = plateau.on_epoch_end(loss, lr)
        lrs.append(lr)
    assert lrs == [1e-3, 1e-3, 5e-4, 5e-4, 2.5e-4]

def test_plateau_respects_min_lr():
    plateau = ReduceLROnPlateau(factor=0.05, patience=1, min_lr=1e-4, min_delta=0.0)
    plateau.on_epoch_end(1.0, 1e-3)
    assert plateau.on_epoch_end(1.0, 1e-3) == 1e-4
    assert plateau.on_epoch_end(1.0, 1e-4) == 1e-4

def test_early_stopping_patience_and_min_delta():
    stopper = EarlyStopping(patience=2, min_delta=0.1)
    assert [stopper.on_epoch_end(loss) for loss in (1.0, 0.95, 0.5, 0.45, 0.44)] == [False, False, False, False, True]

def test_training_state_round_trip():
    state = TrainingState(epoch=3, global_step=30, lr=5e-4, plateau={"best": math.inf, "wait": 1},
                          early_stopping={"best": 0.4, "wait": 0})
    data = state.to_dict()
    assert data["best_val_loss"] is None and data["plateau"]["best"] is None
    assert TrainingState.from_dict(data) == state

def test_from_configuration_ignores_none_overrides():
    cfg = TrainConfig.from_configuration(batch_size=None, lr=5e-3, seed=9)
    assert cfg.lr == 5e-3 and cfg.seed == 9
    assert cfg.batch_size >= 1

def test_run_epoch_counts_steps(binary_model, separable_splits, fast_train_config):
    train, _, _ = separable_splits
    x, labels, _ = train.arrays()
    service = TrainingService(fast_train_config)
    optimizer = AdamState(lr=fast_train_config.lr)
    _, _, step = service.run_epoch(binary_model, x, labels, 0, optimizer, 10)
    assert step == 10 + math.ceil(len(train) / fast_train_config.batch_size)
    assert optimizer.step == step - 10

def test_run_epoch_is_deterministic(separable_splits, fast_train_config):
    train, _, _ = separable_splits
    x, labels, _ = train.arrays()
    models = [build(ModelSpec.toy(TOY_LENGTH, 2), seed=0) for _ in range(2)]
    for model in models:
        TrainingService(fast_train_config).run_epoch(model, x, labels, 0, AdamState(), 0)
    for name in models[0].params:
        np.testing.assert_array_equal(models[0].params.value(name), models[1].params.value(name))

def test_run_epoch_step_hook(binary_model, separable_splits, fast_train_config, mocker):
    train, _, _ = separable_splits
    x, labels, _ = train.arrays()
    hook = mocker.Mock()
    TrainingService(fast_train_config).run_epoch(binary_model, x, labels, 0, AdamState(), 0, step_hook=hook)
    assert [c.args[0] for c in hook.call_args_list] == [0, 1, 2]

def test_train_learns_separable_data_and_stops_early(binary_model, separable_splits):
    train, val, _ = separable_splits
    cfg = TrainConfig(batch_size=16, max_epochs=40, lr=1e-2, lr_patience=2, early_stop_patience=3, min_delta=1e-2, seed=0)
    model, record = TrainingService(cfg).train(binary_model, train, val)
    best = record.best_epoch()
    assert best.val_acc == 1.0
    assert len(record.epochs) < 40

def test_train_returns_lowest_validation_loss_weights(binary_model, separable_splits, fast_train_config):
    train, val, _ = separable_splits
    model, record = TrainingService(fast_train_config).train(binary_model, train, val)
    assert len(record.epochs) == fast_train_config.max_epochs
    val_loss, _ = evaluate_loss(model, val, fast_train_config.batch_size)
    assert val_loss == pytest.approx(record.best_epoch().val_loss, rel=1e-6)

def test_train_saves_best_and_last_checkpoints(binary_model, separable_splits, fast_train_config, mocker):
    train, val, _ = separable_splits
    saver = mocker.Mock()
    TrainingService(fast_train_config, checkpoint_path="best.pcgd", last_path="last.pcgd",
                    checkpoint_saver=saver).train(binary_model, train, val)
    paths = [c.args[0] for c in saver.call_args_list]
    assert paths.count("last.pcgd") == fast_train_config.max_epochs
    assert paths.count("best.pcgd") >= 1
    last_state = saver.call_args_list[-1].args[4]
    assert last_state["epoch"] == fast_train_config.max_epochs

def test_resume_matches_uninterrupted_run(separable_splits, fast_train_config):
    train, val, _ = separable_splits
    full_cfg = replace(fast_train_config, max_epochs=4)
    reference, reference_record = TrainingService(full_cfg).train(build(ModelSpec.toy(TOY_LENGTH, 2), seed=0), train, val)

    captured = {}

    def saver(path, model, masks, optimizer, state):
        captured[path] = (model.params.snapshot(), copy.deepcopy(optimizer), state)

    interrupted = build(ModelSpec.toy(TOY_LENGTH, 2), seed=0)
    TrainingService(replace(fast_train_config, max_epochs=2), "best", "last", saver).train(interrupted, train, val)
    weights, optimizer, state = captured["last"]
    interrupted.params.restore(weights)
    resumed, resumed_record = TrainingService(full_cfg).train(
        interrupted, train, val, optimizer, TrainingState.from_dict(state), captured["best"][0])

    assert [e.val_loss for e in resumed_record.epochs] == [e.val_loss for e in reference_record.epochs]
    for name in reference.params:
        np.testing.assert_array_equal(resumed.params.value(name), reference.params.value(name))

def test_resume_without_best_weights_picks_best_of_remaining_epochs(separable_splits, fast_train_config, mocker):
    train, val, _ = separable_splits
    captured = {}

    def saver(path, model, masks, optimizer, state):
        captured[path] = (model.params.snapshot(), copy.deepcopy(optimizer), state)

    model = build(ModelSpec.toy(TOY_LENGTH, 2), seed=0)
    TrainingService(replace(fast_train_config, max_epochs=2), "best", "last", saver).train(model, train, val)
    weights, optimizer, state = captured["last"]
    state = TrainingState.from_dict(state)
    assert math.isfinite(state.best_val_loss)
    model.params.restore(weights)

    best_saver = mocker.Mock()
    resumed, record = TrainingService(replace(fast_train_config, max_epochs=4), "best", None, best_saver).train(
        model, train, val, optimizer, state)
    assert state.best_epoch >= 2
    assert best_saver.call_count >= 1
    remaining = [e.val_loss for e in record.epochs[2:]]
    val_loss, _ = evaluate_loss(resumed, val, fast_train_config.batch_size)
    assert val_loss == pytest.approx(min(remaining), rel=1e-6)

# Negative Test Cases

def test__neg_divergence_is_reported(binary_model, separable_splits, fast_train_config, mocker):
    train, val, _ = separable_splits
    mocker.patch.object(binary_model, "backward", return_value=(float("nan"), np.full((16, 2), 0.5)))
    with pytest.raises(TrainingDivergenceException) as excinfo:
        TrainingService(fast_train_config).train(binary_model, train, val)
    assert excinfo.value.epoch == 0 and excinfo.value.step == 0

def test__neg_class_count_mismatch(toy_model, separable_splits, fast_train_config):
    train, val, _ = separable_splits
    with pytest.raises(DimensionMismatchException):
        TrainingService(fast_train_config).train(toy_model, train, val)

def test__neg_empty_validation_split(binary_model, separable_splits, separable_dataset, fast_train_config):
    train, _, _ = separable_splits
    with pytest.raises(InvalidDatasetException):
        TrainingService(fast_train_config).train(binary_model, train, separable_dataset.subset([]))

@pytest.mark.parametrize("overrides", [{"batch_size": 0}, {"lr": 0.0}, {"lr_factor": 1.5}, {"early_stop_patience": 0}])
def test__neg_invalid_train_config(overrides):
    with pytest.raises(InvalidConfigurationException):
        TrainConfig(**overrides)
