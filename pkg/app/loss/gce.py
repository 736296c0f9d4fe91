import numpy as np

from app.core.schema import LossKind
from app.loss.base import GceParam, LabeledLoss


class GeneralizedCrossEntropyLoss(LabeledLoss):
    """(1 - s^q) / q: cross entropy as q -> 0, linear (1 - s) at q = 1."""

    kind: LossKind = LossKind.GCE
    description: str = "Generalized cross entropy with exponent q."
    q: GceParam = 0.7

    def value_s(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=np.float64)
        return (1.0 - s**self.q) / self.q

    def slope(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=np.float64)
        with np.errstate(divide="ignore"):
            return -(s ** (self.q - 1.0))

    def target_logit_grad(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=np.float64)
        return -(s**self.q) * (1.0 - s)
