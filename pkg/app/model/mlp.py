from typing import List, Literal, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, model_validator

from app.common.exceptions import ConfigurationError, InvalidInputError
from app.core.schema import Logits, Probabilities, TaggedSample
from app.loss import softmax2_batch
from app.objective import Objective, ObjectiveConfig, encode_tagged


class Layer(BaseModel):
    weight: np.ndarray  # (out, in)
    bias: np.ndarray  # (out,)

    class Config:
        arbitrary_types_allowed = True


class MlpParams(BaseModel):
    """Affine layers with rectifier activations between them and two logits out."""

    layers: List[Layer]
    activation: Literal["relu"] = "relu"

    class Config:
        arbitrary_types_allowed = True

    @model_validator(mode="after")
    def check_chain(self) -> "MlpParams":
        if not self.layers:
            raise ValueError("An MLP needs at least one layer")
        for prev, layer in zip(self.layers, self.layers[1:]):
            if layer.weight.shape[1] != prev.weight.shape[0]:
                raise ValueError(
                    f"Layer dimensions do not chain: {prev.weight.shape} -> {layer.weight.shape}"
                )
        for layer in self.layers:
            if layer.bias.shape != (layer.weight.shape[0],):
                raise ValueError(f"Bias shape {layer.bias.shape} does not match weight {layer.weight.shape}")
        if self.layers[-1].weight.shape[0] != 2:
            raise ValueError("The final layer must output exactly 2 logits")
        return self

    @property
    def layer_sizes(self) -> List[int]:
        return [self.layers[0].weight.shape[1]] + [l.weight.shape[0] for l in self.layers]

    @property
    def input_dim(self) -> int:
        return self.layers[0].weight.shape[1]

    def arrays(self) -> List[np.ndarray]:
        """Flat [W0, b0, W1, b1, ...] in layer order."""
        return [a for layer in self.layers for a in (layer.weight, layer.bias)]

    @classmethod
    def from_arrays(cls, arrays: Sequence[np.ndarray]) -> "MlpParams":
        return cls(
            layers=[
                Layer(weight=arrays[i], bias=arrays[i + 1])
                for i in range(0, len(arrays), 2)
            ]
        )

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(a)) for a in self.arrays())


def init_params(layer_sizes: Sequence[int], seed: int) -> MlpParams:
    """Uniform Glorot weights in +-sqrt(6 / (fan_in + fan_out)), zero biases."""
    sizes = list(layer_sizes)
    if len(sizes) < 2 or sizes[-1] != 2 or min(sizes) < 1:
        raise ConfigurationError(
            f"Layer sizes must list at least input and output widths and end in 2, got {sizes}"
        )
    rng = np.random.default_rng(seed)
    layers = []
    for fan_in, fan_out in zip(sizes, sizes[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        layers.append(
            Layer(
                weight=rng.uniform(-limit, limit, size=(fan_out, fan_in)),
                bias=np.zeros(fan_out),
            )
        )
    return MlpParams(layers=layers)


def _check_input(params: MlpParams, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != params.input_dim:
        raise InvalidInputError(
            f"Expected inputs of width {params.input_dim}, got shape {x.shape}"
        )
    return x


def _forward_cached(
    params: MlpParams, x: np.ndarray
) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    activations, pre_activations = [x], []
    last = len(params.layers) - 1
    for i, layer in enumerate(params.layers):
        a = activations[-1] @ layer.weight.T + layer.bias
        pre_activations.append(a)
        if i < last:
            activations.append(np.maximum(a, 0.0))
    return activations, pre_activations


def forward_batch(params: MlpParams, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """(n, 2) logits and (n,) positive-class probabilities."""
    _, pre = _forward_cached(params, _check_input(params, x))
    return pre[-1], softmax2_batch(pre[-1])


def forward(params: MlpParams, x: Sequence[float]) -> Tuple[Logits, Probabilities]:
    z, p_pos = forward_batch(params, np.asarray(x, dtype=np.float64)[None, :])
    return (
        Logits(z_neg=float(z[0, 0]), z_pos=float(z[0, 1])),
        Probabilities.from_positive(float(p_pos[0])),
    )


def backward_arrays(
    params: MlpParams,
    x: np.ndarray,
    labels: np.ndarray,
    kinds: np.ndarray,
    objective: Objective,
) -> Tuple[float, MlpParams]:
    """Mean batch loss and its exact gradient with respect to every parameter."""
    x = _check_input(params, x)
    n = x.shape[0]
    if n == 0:
        raise InvalidInputError("Cannot differentiate an empty batch")
    activations, pre = _forward_cached(params, x)
    p_pos = softmax2_batch(pre[-1])
    loss = objective.mean_value(labels, kinds, p_pos)

    g = objective.logit_grads(labels, kinds, p_pos) / n
    d_out = np.stack([-g, g], axis=1)
    grads: List[Layer] = []
    for i in range(len(params.layers) - 1, -1, -1):
        layer = params.layers[i]
        grads.append(Layer(weight=d_out.T @ activations[i], bias=d_out.sum(axis=0)))
        if i > 0:
            d_out = (d_out @ layer.weight) * (pre[i - 1] > 0)
    return loss, MlpParams(layers=grads[::-1])


def backward(
    params: MlpParams, batch: Sequence[TaggedSample], cfg: ObjectiveConfig
) -> MlpParams:
    if not batch:
        raise InvalidInputError("Cannot differentiate an empty batch")
    x, labels, kinds = encode_tagged(batch)
    _, grads = backward_arrays(params, x, labels, kinds, Objective.from_config(cfg))
    return grads
