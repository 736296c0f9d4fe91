import numpy as np

from app.core.schema import LossKind
from app.loss.base import LabeledLoss, clamp_probability, neg_log


class CrossEntropyLoss(LabeledLoss):
    kind: LossKind = LossKind.CE
    description: str = "Cross entropy, -log of the labeled-class probability."

    def value_s(self, s: np.ndarray) -> np.ndarray:
        return neg_log(s)

    def slope(self, s: np.ndarray) -> np.ndarray:
        return -1.0 / clamp_probability(s)

    def target_logit_grad(self, s: np.ndarray) -> np.ndarray:
        return -(1.0 - np.asarray(s))
