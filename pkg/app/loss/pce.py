import numpy as np

from app.core.schema import LossKind
from app.loss.base import LabeledLoss, TauParam, neg_log


class PartiallyHuberisedLoss(LabeledLoss):
    """Cross entropy with its log branch replaced by the tangent line at `tau`.

    For s <= tau the loss is -(s - tau)/tau - log(tau); above it is exactly
    the cross-entropy branch. The two pieces meet with equal value and slope
    at s = tau, so the loss is bounded by 1 - log(tau) and its slope by 1/tau.
    """

    kind: LossKind = LossKind.PCE
    description: str = "Partially Huberised cross entropy with tangent point tau."
    tau: TauParam = 0.3

    def _linear(self, s: np.ndarray) -> np.ndarray:
        return -(s - self.tau) / self.tau - np.log(self.tau)

    def value_s(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=np.float64)
        return np.where(s <= self.tau, self._linear(s), neg_log(s))

    def slope(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=np.float64)
        # left-branch derivative at the kink itself
        return np.where(s <= self.tau, -1.0 / self.tau, -1.0 / np.maximum(s, self.tau))

    def target_logit_grad(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=np.float64)
        return np.where(s <= self.tau, -s * (1.0 - s) / self.tau, -(1.0 - s))
