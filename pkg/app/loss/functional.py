"""Scalar entry points over the vectorised loss classes."""
from typing import Union

import numpy as np
from pydantic import BaseModel

from app.common.exceptions import InvalidInputError
from app.core.schema import Logits, LossGrad, LossKind, Probabilities
from app.loss.base import GceParam, TauParam, softmax2
from app.loss.collection import LossCollection, parse_loss_kind
from app.loss.cross_entropy import CrossEntropyLoss
from app.loss.gce import GeneralizedCrossEntropyLoss
from app.loss.pce import PartiallyHuberisedLoss
from app.loss.uniformity import UniformityLoss


class LossParams(BaseModel):
    tau: TauParam = 0.3
    q: GceParam = 0.7


def _check_label(y: int) -> np.ndarray:
    if y not in (0, 1):
        raise InvalidInputError(f"Binary label must be 0 or 1, got {y}")
    return np.asarray(y)


def ce_loss(p: Probabilities, y: int) -> float:
    return float(CrossEntropyLoss().value(np.asarray(p.p_pos), _check_label(y)))


def pce_loss(p: Probabilities, y: int, tau: float = 0.3) -> float:
    loss = PartiallyHuberisedLoss(tau=tau)
    return float(loss.value(np.asarray(p.p_pos), _check_label(y)))


def gce_loss(p: Probabilities, y: int, q: float = 0.7) -> float:
    loss = GeneralizedCrossEntropyLoss(q=q)
    return float(loss.value(np.asarray(p.p_pos), _check_label(y)))


def uc_loss(p: Probabilities) -> float:
    return float(UniformityLoss().value(np.asarray(p.p_pos)))


def loss_grad(
    kind: Union[LossKind, str],
    z: Logits,
    y: int = 1,
    params: LossParams = LossParams(),
) -> LossGrad:
    """Analytic gradient of `kind` composed with the two-class softmax."""
    loss = LossCollection.from_params(tau=params.tau, q=params.q).get_loss(
        parse_loss_kind(kind)
    )
    p = softmax2(z)
    d_z_pos = float(loss.logit_grad(np.asarray(p.p_pos), _check_label(y)))
    return LossGrad(d_z_neg=-d_z_pos, d_z_pos=d_z_pos)
