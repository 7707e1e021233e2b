# Copyright (c) 2024 by Jonathan AW
# adam.py
# Summary: Bias-corrected Adam optimizer over a ParamStore, with state that can be saved to a checkpoint.

from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from bl.nn.param_store import ParamStore
from exceptions import DimensionMismatchException

DEFAULT_LR = 1e-3
DEFAULT_BETA1 = 0.9
DEFAULT_BETA2 = 0.999
DEFAULT_EPSILON = 1e-7


@dataclass
class AdamState:
    lr: float = DEFAULT_LR
    beta1: float = DEFAULT_BETA1
    beta2: float = DEFAULT_BETA2
    epsilon: float = DEFAULT_EPSILON
    step: int = 0
    m: Dict[str, np.ndarray] = field(default_factory=dict)
    v: Dict[str, np.ndarray] = field(default_factory=dict)

    def hyperparameters(self) -> dict:
        return {"lr": self.lr, "beta1": self.beta1, "beta2": self.beta2, "epsilon": self.epsilon, "step": self.step}

    @classmethod
    def from_hyperparameters(cls, data: dict, m: Optional[Dict[str, np.ndarray]] = None,
                             v: Optional[Dict[str, np.ndarray]] = None) -> "AdamState":
        return cls(lr=data["lr"], beta1=data["beta1"], beta2=data["beta2"], epsilon=data["epsilon"],
                   step=data["step"], m=dict(m or {}), v=dict(v or {}))


def adam_step(params: ParamStore, state: AdamState, grad_masks: Optional[Dict[str, np.ndarray]] = None) -> ParamStore:
    """
    One Adam update of every entry of params, then zero the gradients.

    grad_masks (name -> binary mask) discards the gradient of pruned weights before the update.
    """
    state.step += 1
    t = state.step
    correction1 = 1.0 - state.beta1 ** t
    correction2 = 1.0 - state.beta2 ** t

    for name, entry in params.items():
        grad = entry.grad
        if grad_masks is not None and name in grad_masks:
            grad = grad * grad_masks[name]
        m = state.m.get(name)
        v = state.v.get(name)
        if m is None:
            m = np.zeros_like(entry.value)
            v = np.zeros_like(entry.value)
        elif m.shape != entry.value.shape:
            raise DimensionMismatchException(f"Adam moments for '{name}' have shape {m.shape}, parameter is {entry.value.shape}.")

        m = state.beta1 * m + (1.0 - state.beta1) * grad
        v = state.beta2 * v + (1.0 - state.beta2) * grad * grad
        m_hat = m / correction1
        v_hat = v / correction2
        entry.value -= (state.lr * m_hat / (np.sqrt(v_hat) + state.epsilon)).astype(entry.value.dtype, copy=False)
        state.m[name] = m.astype(entry.value.dtype, copy=False)
        state.v[name] = v.astype(entry.value.dtype, copy=False)

    params.zero_grad()
    return params
