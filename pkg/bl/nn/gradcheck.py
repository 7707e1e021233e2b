# Copyright (c) 2024 by Jonathan AW
# gradcheck.py
# Summary: Central finite-difference verification of analytic gradients held in a ParamStore.
"""
Usage:
    loss_fn = lambda: model.loss(batch, labels)     # reads the current parameter values
    model.backward(batch, labels)                   # populates the analytic gradients
    worst = finite_difference_gradcheck(loss_fn, model.params, h=1e-3)

Relative error per scalar is |a - n| / max(|a|, |n|, floor). `analytic` lets gradients computed in one
precision be checked against a numeric reference taken on a store of another precision.
"""

import logging
from typing import Callable, Dict, Iterable, Optional

import numpy as np

from bl.nn.param_store import ParamStore
from exceptions import DimensionMismatchException, InvalidInputDataException

logger = logging.getLogger(__name__)


def relative_error(analytic: float, numeric: float, floor: float = 1e-8) -> float:
    return abs(analytic - numeric) / max(abs(analytic), abs(numeric), floor)


def gradcheck_report(f: Callable[[], float], params: ParamStore, h: float,
                     analytic: Optional[Dict[str, np.ndarray]] = None,
                     names: Optional[Iterable[str]] = None,
                     samples_per_tensor: Optional[int] = None,
                     floor: float = 1e-8, seed: int = 0) -> Dict[str, float]:
    """
    Worst relative error per tensor. When samples_per_tensor is set, only that many randomly chosen
    scalars of each tensor are perturbed.
    """
    if not h > 0:
        raise InvalidInputDataException(f"Finite-difference step must be positive, got {h}.")

    rng = np.random.default_rng(seed)
    names = params.names() if names is None else list(names)
    report: Dict[str, float] = {}

    for name in names:
        value = params.value(name)
        reference = params.grad(name) if analytic is None else np.asarray(analytic[name])
        if reference.shape != value.shape:
            raise DimensionMismatchException(f"Analytic gradient for '{name}' has shape {reference.shape}, parameter is {value.shape}.")
        reference = reference.astype(np.float64).reshape(-1)

        indices = np.arange(value.size)
        if samples_per_tensor is not None and samples_per_tensor < value.size:
            indices = np.sort(rng.choice(value.size, size=samples_per_tensor, replace=False))

        worst = 0.0
        for idx in indices:
            original = value.flat[idx]
            value.flat[idx] = original + h
            plus = f()
            value.flat[idx] = original - h
            minus = f()
            value.flat[idx] = original
            numeric = (plus - minus) / (2.0 * h)
            worst = max(worst, relative_error(float(reference[idx]), float(numeric), floor))
        report[name] = worst
        logger.debug("gradcheck %s: worst relative error %.3e over %d entries", name, worst, len(indices))

    return report


def finite_difference_gradcheck(f: Callable[[], float], params: ParamStore, h: float,
                                analytic: Optional[Dict[str, np.ndarray]] = None,
                                names: Optional[Iterable[str]] = None,
                                samples_per_tensor: Optional[int] = None,
                                floor: float = 1e-8, seed: int = 0) -> float:
    """
    Maximum relative error between analytic gradients and central differences (f(w+h) - f(w-h)) / 2h.
    """
    report = gradcheck_report(f, params, h, analytic=analytic, names=names,
                              samples_per_tensor=samples_per_tensor, floor=floor, seed=seed)
    return max(report.values(), default=0.0)
