# Copyright (c) 2024 by Jonathan AW
# network.py
# Summary: The PET-CGDNN network: phase estimator + phase transformer + CNN-GRU-Dense classifier.
"""
Design Pattern:

1. Builder:
- build() turns a ModelSpec and a seed into an initialized PetCgdnn; the parameter layout comes from
  bl.model.model_spec and every initial value is drawn from the "init" substream of the seed.

2. Encapsulation:
- PetCgdnn owns its ParamStore. forward() is pure given (params, input); backward() only writes gradients.

Dataflow of forward() for a batch [B, 2, L]:
    phi = estimator(x)           (0 for part3_only)
    x'  = rotate(x, -phi)        (x for part3_only)
    conv1 + ReLU -> conv2 + ReLU -> squeeze to [B, L-11, 25] -> GRU -> dense -> softmax
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from bl.model.model_spec import GRU_UNITS, ModelSpec, count_params, param_layout, shape_chain
from bl.nn.gru import GruCache, gru_backward, gru_forward
from bl.nn.initializers import glorot_uniform, orthogonal, zeros
from bl.nn.layers import conv2d_backward, conv2d_forward, dense_backward, dense_forward, softmax
from bl.nn.losses import softmax_cross_entropy
from bl.nn.param_store import ParamStore
from bl.pet.phase_estimator import check_iq_batch, estimate_phase_batch, estimator_backward_batch
from bl.pet.phase_transformer import pet_backward_batch, transform_phase_batch
from exceptions import DimensionMismatchException, InvalidConfigurationException
from utils.rng_utils import substream

logger = logging.getLogger(__name__)


@dataclass
class ForwardCache:
    x: np.ndarray
    phi: np.ndarray
    transformed: np.ndarray
    conv1_in: np.ndarray
    conv1_out: np.ndarray
    conv2_out: np.ndarray
    gru_cache: GruCache
    hidden: np.ndarray
    logits: np.ndarray
    probs: np.ndarray


class PetCgdnn:
    """
    A PET-CGDNN instance: its spec and its parameters.
    """

    def __init__(self, spec: ModelSpec, params: ParamStore):
        self.spec = spec
        self.params = params
        self._check_params()

    def _check_params(self) -> None:
        layout = param_layout(self.spec)
        if self.params.names() != [p.name for p in layout]:
            raise InvalidConfigurationException(
                f"Parameter names {self.params.names()} do not match the {self.spec.variant} layout.")
        for p in layout:
            actual = self.params.value(p.name).shape
            if actual != p.shape:
                raise DimensionMismatchException(f"Parameter '{p.name}' has shape {actual}, expected {p.shape}.")

    @property
    def dtype(self) -> np.dtype:
        return self.params.dtype

    def astype(self, dtype) -> "PetCgdnn":
        return PetCgdnn(self.spec, self.params.astype(dtype))

    # ===============================
    # Forward
    # ===============================

    def _check_batch(self, batch: np.ndarray) -> np.ndarray:
        check_iq_batch(batch)
        if batch.shape[2] != self.spec.length:
            raise DimensionMismatchException(f"Model expects frames of length {self.spec.length}, got {batch.shape[2]}.")
        return batch.astype(self.dtype, copy=False)

    def _forward(self, batch: np.ndarray, keep_cache: bool):
        x = self._check_batch(batch)
        p = self.params
        if self.spec.has_estimator:
            phi = estimate_phase_batch(x, p.value("estimator/kernel"), p.value("estimator/bias"))
            transformed = transform_phase_batch(x, phi)
        else:
            phi = np.zeros(x.shape[0], dtype=self.dtype)
            transformed = x

        conv1_in = transformed[..., None]
        conv1_out = conv2d_forward(conv1_in, p.value("conv1/kernel"), p.value("conv1/bias"), 'relu')
        conv2_out = conv2d_forward(conv1_out, p.value("conv2/kernel"), p.value("conv2/bias"), 'relu')
        sequence = conv2_out[:, 0]
        if keep_cache:
            hidden, gru_cache = gru_forward(sequence, p, GRU_UNITS, prefix="gru", return_cache=True)
        else:
            hidden, gru_cache = gru_forward(sequence, p, GRU_UNITS, prefix="gru"), None
        logits = dense_forward(hidden, p.value("dense/kernel"), p.value("dense/bias"), 'linear')
        probs = softmax(logits)
        cache = ForwardCache(x, phi, transformed, conv1_in, conv1_out, conv2_out, gru_cache, hidden, logits, probs)
        return probs, phi, transformed, cache

    def forward(self, batch: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Returns (probs [B, C], phi [B], transformed [B, 2, L]).
        For part3_only, phi is zero and transformed is the input.
        """
        probs, phi, transformed, _ = self._forward(batch, keep_cache=False)
        return probs, phi, transformed

    def predict(self, batch: np.ndarray) -> np.ndarray:
        probs, _, _ = self.forward(batch)
        return np.argmax(probs, axis=1)

    def loss_and_probs(self, batch: np.ndarray, labels: np.ndarray) -> Tuple[float, np.ndarray]:
        _, _, _, cache = self._forward(batch, keep_cache=False)
        loss, _ = softmax_cross_entropy(cache.logits, labels.astype(self.dtype, copy=False))
        return loss, cache.probs

    def loss(self, batch: np.ndarray, labels: np.ndarray) -> float:
        return self.loss_and_probs(batch, labels)[0]

    # ===============================
    # Backward
    # ===============================

    def backward(self, batch: np.ndarray, labels: np.ndarray, return_probs: bool = False):
        """
        Accumulate the gradient of the mean cross-entropy into every parameter (the estimator included)
        and return the batch loss (and the class probabilities when return_probs is set).
        """
        _, _, _, cache = self._forward(batch, keep_cache=True)
        loss, grad_logits = softmax_cross_entropy(cache.logits, labels.astype(self.dtype, copy=False))
        self.backward_from_logits(cache, grad_logits)
        if return_probs:
            return loss, cache.probs
        return loss

    def backward_from_logits(self, cache: ForwardCache, grad_logits: np.ndarray) -> None:
        p = self.params
        grad_hidden, grad_W, grad_b = dense_backward(cache.hidden, p.value("dense/kernel"), cache.logits, grad_logits, 'linear')
        p.accumulate_grad("dense/kernel", grad_W)
        p.accumulate_grad("dense/bias", grad_b)

        grad_sequence = gru_backward(cache.gru_cache, p, GRU_UNITS, grad_hidden, prefix="gru")

        grad_conv2 = grad_sequence[:, None]
        grad_conv1, grad_k2, grad_b2 = conv2d_backward(cache.conv1_out, p.value("conv2/kernel"), cache.conv2_out, grad_conv2, 'relu')
        p.accumulate_grad("conv2/kernel", grad_k2)
        p.accumulate_grad("conv2/bias", grad_b2)

        grad_in, grad_k1, grad_b1 = conv2d_backward(cache.conv1_in, p.value("conv1/kernel"), cache.conv1_out, grad_conv1, 'relu')
        p.accumulate_grad("conv1/kernel", grad_k1)
        p.accumulate_grad("conv1/bias", grad_b1)

        if self.spec.has_estimator:
            _, grad_phi = pet_backward_batch(cache.x, cache.phi, grad_in[..., 0])
            _, grad_We, grad_be = estimator_backward_batch(cache.x, p.value("estimator/kernel"), grad_phi)
            p.accumulate_grad("estimator/kernel", grad_We.astype(self.dtype, copy=False))
            p.accumulate_grad("estimator/bias", grad_be.astype(self.dtype, copy=False))


_INITIALIZERS = {
    'glorot_uniform': glorot_uniform,
    'orthogonal': orthogonal,
}


def _check_chain(spec: ModelSpec, chain, params: ParamStore) -> None:
    """Every link of the shape chain must follow from the previous link and the tensor that maps it."""
    shapes = dict(chain)

    def conv_out(shape_in, kernel):
        kh, kw, c_in, c_out = kernel.shape
        if shape_in is None or len(shape_in) != 3 or c_in != shape_in[2]:
            return None
        return (shape_in[0] - kh + 1, shape_in[1] - kw + 1, c_out)

    gru_units = params.value("gru/recurrent_kernel").shape[0]
    expected = [
        ("input", (2, spec.length, 1)),
        ("conv1", conv_out(shapes.get("input"), params.value("conv1/kernel"))),
        ("conv2", conv_out(shapes.get("conv1"), params.value("conv2/kernel"))),
        ("gru", (gru_units,)),
        ("dense", (params.value("dense/kernel").shape[1],)),
    ]
    links = [name for name, _ in chain]
    if links != [name for name, _ in expected] or any(shapes[name] != shape for name, shape in expected):
        raise InvalidConfigurationException(f"Shape chain {chain} disagrees with the parameter layout.")
    if shapes["conv2"][0] != 1 or params.value("gru/kernel").shape[0] != shapes["conv2"][2]:
        raise InvalidConfigurationException(f"GRU input {params.value('gru/kernel').shape} does not fit conv2 output {shapes['conv2']}.")
    if params.value("dense/kernel").shape[0] != gru_units or shapes["dense"] != (spec.classes,):
        raise InvalidConfigurationException(f"Dense layer {params.value('dense/kernel').shape} does not map the GRU state to {spec.classes} classes.")
    if spec.has_estimator and params.value("estimator/kernel").shape != (2 * spec.length, 1):
        raise InvalidConfigurationException(f"Estimator kernel {params.value('estimator/kernel').shape} does not match frames of length {spec.length}.")
    if params.size() != count_params(spec):
        raise InvalidConfigurationException(f"Layout holds {params.size()} parameters, closed form gives {count_params(spec)}.")


def build(spec: ModelSpec, seed: int, dtype=np.float32) -> PetCgdnn:
    """
    Initialize a model for spec: uniform Glorot kernels, orthogonal GRU recurrent kernel, zero biases.
    Equal seeds give bit-identical parameter stores.
    """
    chain = shape_chain(spec)
    if any(extent < 1 for _, shape in chain for extent in shape):
        raise InvalidConfigurationException(f"Frame length {spec.length} is too short for the classifier: {chain}.")

    rng = substream(seed, "init")
    params = ParamStore(dtype)
    for p in param_layout(spec):
        if p.initializer == 'zeros':
            value = zeros(p.shape, dtype)
        else:
            value = _INITIALIZERS[p.initializer](p.shape, rng, dtype)
        params.add(p.name, value, prunable=p.prunable)

    _check_chain(spec, chain, params)

    logger.debug("Built %s model L=%d C=%d with %d parameters", spec.variant, spec.length, spec.classes, params.size())
    return PetCgdnn(spec, params)
