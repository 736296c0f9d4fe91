from app.model.checkpoint import Checkpoint, load_checkpoint, save_checkpoint
from app.model.mlp import (
    Layer,
    MlpParams,
    backward,
    backward_arrays,
    forward,
    forward_batch,
    init_params,
)
from app.model.optimizer import AdamState, adam_step
from app.model.trainer import (
    TrainConfig,
    Trainer,
    TrainerState,
    TrainResult,
    ValidationData,
    ValidationRecord,
    evaluate,
    fine_subcategory,
    select_best,
    train,
)


__all__ = [
    "Layer",
    "MlpParams",
    "init_params",
    "forward",
    "forward_batch",
    "backward",
    "backward_arrays",
    "AdamState",
    "adam_step",
    "Checkpoint",
    "save_checkpoint",
    "load_checkpoint",
    "TrainConfig",
    "Trainer",
    "TrainerState",
    "TrainResult",
    "ValidationData",
    "ValidationRecord",
    "evaluate",
    "fine_subcategory",
    "select_best",
    "train",
]
