"""Collection of configured losses keyed by kind."""
from typing import Dict, Union

from app.common.exceptions import ConfigurationError
from app.core.schema import LossKind
from app.loss.base import BaseLoss
from app.loss.cross_entropy import CrossEntropyLoss
from app.loss.gce import GeneralizedCrossEntropyLoss
from app.loss.pce import PartiallyHuberisedLoss
from app.loss.uniformity import UniformityLoss


def parse_loss_kind(kind: Union[LossKind, str]) -> LossKind:
    try:
        return LossKind(kind)
    except ValueError as e:
        allowed = ", ".join(k.value for k in LossKind)
        raise ConfigurationError(
            f"Unknown loss kind: {kind}. Allowed kinds are: {allowed}"
        ) from e


class LossCollection:
    """A set of losses sharing one (tau, q) parameterisation."""

    def __init__(self, *losses: BaseLoss):
        self.losses = losses
        self.loss_map: Dict[LossKind, BaseLoss] = {loss.kind: loss for loss in losses}

    @classmethod
    def from_params(cls, tau: float = 0.3, q: float = 0.7) -> "LossCollection":
        return cls(
            CrossEntropyLoss(),
            PartiallyHuberisedLoss(tau=tau),
            GeneralizedCrossEntropyLoss(q=q),
            UniformityLoss(),
        )

    def get_loss(self, kind: Union[LossKind, str]) -> BaseLoss:
        loss = self.loss_map.get(parse_loss_kind(kind))
        if loss is None:
            raise ConfigurationError(f"Loss {kind} is not configured")
        return loss
