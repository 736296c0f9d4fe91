import numpy as np

from app.core.schema import LossKind
from app.loss.base import BaseLoss, neg_log


class UniformityLoss(BaseLoss):
    """-(1/2) log p_neg - (1/2) log p_pos, minimised by the uniform pair.

    The label is ignored; the loss is symmetric in p_pos <-> 1 - p_pos.
    """

    kind: LossKind = LossKind.UC
    description: str = "Pushes the predicted pair toward (0.5, 0.5)."

    def value(self, p_pos: np.ndarray, y: np.ndarray = None) -> np.ndarray:
        p_pos = np.asarray(p_pos, dtype=np.float64)
        return 0.5 * neg_log(1.0 - p_pos) + 0.5 * neg_log(p_pos)

    def logit_grad(self, p_pos: np.ndarray, y: np.ndarray = None) -> np.ndarray:
        return np.asarray(p_pos, dtype=np.float64) - 0.5
