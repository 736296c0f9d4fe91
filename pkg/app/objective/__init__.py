from app.objective.config import ObjectiveConfig
from app.objective.objective import Objective, batch_loss, encode_tagged, sample_loss
from app.objective.strategy import apply_strategy, tag_sample


__all__ = [
    "ObjectiveConfig",
    "Objective",
    "apply_strategy",
    "tag_sample",
    "encode_tagged",
    "sample_loss",
    "batch_loss",
]
