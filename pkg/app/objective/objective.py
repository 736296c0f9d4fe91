from typing import Sequence, Tuple

import numpy as np
from pydantic import BaseModel

from app.common.exceptions import InvalidInputError
from app.core.schema import LossKind, Probabilities, Strategy, TaggedSample, Target
from app.loss import LossCollection
from app.objective.config import ObjectiveConfig


def encode_tagged(
    batch: Sequence[TaggedSample],
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split tagged samples into (features, binary labels, loss-kind codes).

    Uniform targets get label 1; the uniformity loss ignores it.
    """
    features = np.array([t.features for t in batch], dtype=np.float64)
    labels = np.array([0 if t.target == Target.ZERO else 1 for t in batch], dtype=np.int8)
    kinds = np.array([t.loss_kind.value for t in batch])
    return features, labels, kinds


class Objective(BaseModel):
    """Dispatches tagged samples to their losses and applies mode weights."""

    config: ObjectiveConfig
    losses: LossCollection

    class Config:
        arbitrary_types_allowed = True

    @classmethod
    def from_config(cls, cfg: ObjectiveConfig) -> "Objective":
        return cls(config=cfg, losses=LossCollection.from_params(tau=cfg.tau, q=cfg.q))

    def weights(self, kinds: np.ndarray) -> np.ndarray:
        # lambda scales the noise-loss terms of the U-Uniform composite only
        if self.config.strategy != Strategy.U_UNIFORM:
            return np.ones(len(kinds))
        return np.where(kinds == LossKind.UC.value, 1.0, self.config.lam)

    def _dispatch(self, method: str, labels, kinds, p_pos) -> np.ndarray:
        out = np.zeros(len(kinds), dtype=np.float64)
        for kind in np.unique(kinds):
            mask = kinds == kind
            loss = self.losses.get_loss(kind)
            out[mask] = getattr(loss, method)(p_pos[mask], labels[mask])
        return out * self.weights(kinds)

    def values(self, labels: np.ndarray, kinds: np.ndarray, p_pos: np.ndarray) -> np.ndarray:
        return self._dispatch("value", labels, kinds, np.asarray(p_pos, dtype=np.float64))

    def logit_grads(
        self, labels: np.ndarray, kinds: np.ndarray, p_pos: np.ndarray
    ) -> np.ndarray:
        """Per-sample dL/dz_pos (unreduced)."""
        return self._dispatch(
            "logit_grad", labels, kinds, np.asarray(p_pos, dtype=np.float64)
        )

    def mean_value(self, labels: np.ndarray, kinds: np.ndarray, p_pos: np.ndarray) -> float:
        if len(kinds) == 0:
            raise InvalidInputError("Cannot reduce an empty batch")
        return float(np.mean(self.values(labels, kinds, p_pos)))


def sample_loss(t: TaggedSample, p: Probabilities, cfg: ObjectiveConfig) -> float:
    _, labels, kinds = encode_tagged([t])
    return float(Objective.from_config(cfg).values(labels, kinds, np.array([p.p_pos]))[0])


def batch_loss(
    batch: Sequence[TaggedSample], probs: Sequence[Probabilities], cfg: ObjectiveConfig
) -> float:
    """Arithmetic mean of the per-sample losses."""
    if not batch:
        raise InvalidInputError("Cannot reduce an empty batch")
    if len(batch) != len(probs):
        raise InvalidInputError(
            f"Batch has {len(batch)} samples but {len(probs)} probability pairs"
        )
    _, labels, kinds = encode_tagged(batch)
    p_pos = np.array([p.p_pos for p in probs], dtype=np.float64)
    return Objective.from_config(cfg).mean_value(labels, kinds, p_pos)
