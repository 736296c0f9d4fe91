from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, Field

from app.common.exceptions import InvalidInputError
from app.model.mlp import MlpParams


class AdamState(BaseModel):
    """Bias-corrected Adam moments, shaped like the flat parameter list."""

    m: List[np.ndarray]
    v: List[np.ndarray]
    t: int = Field(0, ge=0)
    lr: float = Field(1e-4, gt=0.0)
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    weight_decay: float = Field(0.0, ge=0.0)

    class Config:
        arbitrary_types_allowed = True

    @classmethod
    def zeros_like(cls, params: MlpParams, **hyper) -> "AdamState":
        arrays = params.arrays()
        return cls(
            m=[np.zeros_like(a) for a in arrays],
            v=[np.zeros_like(a) for a in arrays],
            **hyper,
        )

    def hyper(self) -> dict:
        return self.model_dump(exclude={"m", "v", "t"})


def adam_step(
    state: AdamState, params: MlpParams, grads: MlpParams
) -> Tuple[MlpParams, AdamState]:
    """One Adam update; returns new params and state, inputs are untouched."""
    thetas, gs = params.arrays(), grads.arrays()
    if [a.shape for a in thetas] != [g.shape for g in gs] or [
        a.shape for a in thetas
    ] != [m.shape for m in state.m]:
        raise InvalidInputError("Parameter, gradient and moment shapes must agree")

    t = state.t + 1
    b1, b2 = state.beta1, state.beta2
    new_thetas, new_m, new_v = [], [], []
    for theta, g, m, v in zip(thetas, gs, state.m, state.v):
        if state.weight_decay:
            g = g + state.weight_decay * theta
        m = b1 * m + (1.0 - b1) * g
        v = b2 * v + (1.0 - b2) * g * g
        m_hat = m / (1.0 - b1**t)
        v_hat = v / (1.0 - b2**t)
        new_thetas.append(theta - state.lr * m_hat / (np.sqrt(v_hat) + state.eps))
        new_m.append(m)
        new_v.append(v)

    new_state = state.model_copy(update={"m": new_m, "v": new_v, "t": t})
    return MlpParams.from_arrays(new_thetas), new_state
