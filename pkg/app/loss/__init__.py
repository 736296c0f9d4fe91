from app.loss.base import (
    EPS_CLAMP,
    BaseLoss,
    GceParam,
    LabeledLoss,
    TauParam,
    softmax2,
    softmax2_batch,
)
from app.loss.collection import LossCollection
from app.loss.cross_entropy import CrossEntropyLoss
from app.loss.functional import LossParams, ce_loss, gce_loss, loss_grad, pce_loss, uc_loss
from app.loss.gce import GeneralizedCrossEntropyLoss
from app.loss.pce import PartiallyHuberisedLoss
from app.loss.uniformity import UniformityLoss


__all__ = [
    "EPS_CLAMP",
    "BaseLoss",
    "LabeledLoss",
    "TauParam",
    "GceParam",
    "softmax2",
    "softmax2_batch",
    "LossCollection",
    "LossParams",
    "CrossEntropyLoss",
    "PartiallyHuberisedLoss",
    "GeneralizedCrossEntropyLoss",
    "UniformityLoss",
    "ce_loss",
    "pce_loss",
    "gce_loss",
    "uc_loss",
    "loss_grad",
]
