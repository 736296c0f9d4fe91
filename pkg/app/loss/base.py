from abc import ABC, abstractmethod
from typing import Annotated

import numpy as np
from pydantic import BaseModel, Field

from app.common.exceptions import InvalidInputError
from app.core.schema import Logits, LossKind, Probabilities

# Probabilities are clamped to [EPS_CLAMP, 1] before any log.
EPS_CLAMP = 1e-12

TauParam = Annotated[float, Field(gt=0.0, lt=1.0, description="PCE tangent point")]
GceParam = Annotated[float, Field(gt=0.0, le=1.0, description="GCE exponent")]


def clamp_probability(p: np.ndarray) -> np.ndarray:
    return np.clip(p, EPS_CLAMP, 1.0)


def neg_log(p: np.ndarray) -> np.ndarray:
    """-log p on clamped probabilities; shared by every logarithmic branch."""
    return -np.log(clamp_probability(p))


def softmax2_batch(z: np.ndarray) -> np.ndarray:
    """Positive-class probability for an (n, 2) array of (z_neg, z_pos) rows."""
    z = np.asarray(z, dtype=np.float64)
    if not np.all(np.isfinite(z)):
        raise InvalidInputError("Logits must be finite")
    m = np.max(z, axis=-1, keepdims=True)
    e = np.exp(z - m)
    return e[..., 1] / (e[..., 0] + e[..., 1])


def softmax2(z: Logits) -> Probabilities:
    """Two-class softmax with max subtraction; p_neg is taken as 1 - p_pos."""
    if not z.is_finite():
        raise InvalidInputError(f"Logits must be finite, got ({z.z_neg}, {z.z_pos})")
    p_pos = float(softmax2_batch(np.array([z.z_neg, z.z_pos])))
    return Probabilities.from_positive(p_pos)


def labeled_probability(p_pos: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Probability assigned to the labeled class (p_pos for y=1, p_neg for y=0)."""
    return np.where(np.asarray(y) == 1, p_pos, 1.0 - np.asarray(p_pos))


class BaseLoss(ABC, BaseModel):
    """Per-sample loss on the positive-class probability of a softmax pair.

    Values and gradients are vectorised over numpy arrays of `p_pos` and
    binary labels `y`; gradients are taken with respect to `z_pos`, the
    `z_neg` gradient being its negation.
    """

    kind: LossKind
    description: str

    class Config:
        arbitrary_types_allowed = True

    def __call__(self, p_pos: np.ndarray, y: np.ndarray) -> np.ndarray:
        return self.value(p_pos, y)

    @abstractmethod
    def value(self, p_pos: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Loss value per sample."""

    @abstractmethod
    def logit_grad(self, p_pos: np.ndarray, y: np.ndarray) -> np.ndarray:
        """dL/dz_pos per sample."""


class LabeledLoss(BaseLoss, ABC):
    """A loss that only depends on s, the probability of the labeled class."""

    def value(self, p_pos: np.ndarray, y: np.ndarray) -> np.ndarray:
        return self.value_s(labeled_probability(p_pos, y))

    def logit_grad(self, p_pos: np.ndarray, y: np.ndarray) -> np.ndarray:
        g = self.target_logit_grad(labeled_probability(p_pos, y))
        return np.where(np.asarray(y) == 1, g, -g)

    @abstractmethod
    def value_s(self, s: np.ndarray) -> np.ndarray:
        """Loss as a function of the labeled-class probability."""

    @abstractmethod
    def slope(self, s: np.ndarray) -> np.ndarray:
        """dL/ds."""

    @abstractmethod
    def target_logit_grad(self, s: np.ndarray) -> np.ndarray:
        """dL/dz of the labeled-class logit, i.e. dL/ds * s * (1 - s)."""
