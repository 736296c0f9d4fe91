from contextlib import contextmanager
from enum import Enum
from typing import Any, List, Literal, Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field, model_validator

from app.common.exceptions import CheckpointError, InvalidInputError, UndefinedMetricError
from app.common.logger import logger
from app.core.schema import CoarseLabel, Sample, Subcategory
from app.labeler import label_report
from app.metrics import auc_fg, auc_from_groups, uncertain_spread
from app.model.checkpoint import Checkpoint, config_digest
from app.model.mlp import MlpParams, backward_arrays, forward_batch, init_params
from app.model.optimizer import AdamState, adam_step
from app.objective import Objective, ObjectiveConfig, apply_strategy, encode_tagged

SelectionMetric = Literal["auc_fg", "uncertain_spread"]


class TrainConfig(BaseModel):
    """One training run. Defaults are the desk-scale protocol."""

    layer_sizes: List[int] = Field(default_factory=lambda: [2, 16, 16, 2])
    iterations: int = Field(5000, gt=0)
    batch_size: int = Field(32, gt=0)
    checkpoint_every: int = Field(1000, gt=0)
    seed: int = 0
    lr: float = Field(1e-4, gt=0.0)
    beta1: float = Field(0.9, ge=0.0, lt=1.0)
    beta2: float = Field(0.999, ge=0.0, lt=1.0)
    eps: float = Field(1e-8, gt=0.0)
    weight_decay: float = Field(0.0, ge=0.0)
    selection_metric: SelectionMetric = "auc_fg"
    objective: ObjectiveConfig = Field(default_factory=ObjectiveConfig)

    @model_validator(mode="after")
    def check_schedule(self) -> "TrainConfig":
        if self.iterations % self.checkpoint_every:
            raise ValueError(
                f"checkpoint_every ({self.checkpoint_every}) must divide iterations ({self.iterations})"
            )
        if len(self.layer_sizes) < 2 or self.layer_sizes[-1] != 2:
            raise ValueError(f"layer_sizes must end in 2 outputs, got {self.layer_sizes}")
        return self

    def digest(self) -> str:
        return config_digest(self.model_dump_json())

    def adam_hyper(self) -> dict:
        return dict(
            lr=self.lr,
            beta1=self.beta1,
            beta2=self.beta2,
            eps=self.eps,
            weight_decay=self.weight_decay,
        )


class ValidationRecord(BaseModel):
    iteration: int
    train_loss: float
    auc_fg: Optional[float] = None
    auc: Optional[float] = None
    uncertain_spread: Optional[float] = None


class ValidationData(BaseModel):
    """Validation samples split by ground-truth coarse label."""

    positives: np.ndarray
    subcategories: List[Subcategory]
    negatives: np.ndarray
    uncertain: np.ndarray

    class Config:
        arbitrary_types_allowed = True

    @classmethod
    def from_samples(cls, samples: Sequence[Sample], dim: int) -> "ValidationData":
        def features(label: CoarseLabel) -> np.ndarray:
            rows = [s.features for s in samples if s.coarse == label]
            if not rows:
                return np.empty((0, dim))
            return np.array(rows, dtype=np.float64)

        positives = [s for s in samples if s.coarse == CoarseLabel.POSITIVE]
        return cls(
            positives=features(CoarseLabel.POSITIVE),
            subcategories=[fine_subcategory(s) for s in positives],
            negatives=features(CoarseLabel.NEGATIVE),
            uncertain=features(CoarseLabel.UNCERTAIN),
        )

    def check_metric(self, metric: SelectionMetric) -> None:
        if metric == "uncertain_spread":
            if len(self.uncertain) == 0:
                raise UndefinedMetricError("Validation set has no uncertain samples")
            return
        present = set(self.subcategories)
        if present != {Subcategory.ATYPICAL, Subcategory.TYPICAL}:
            raise UndefinedMetricError(
                "Validation positives must contain both atypical and typical samples"
            )


def fine_subcategory(sample: Sample) -> Subcategory:
    """Stored fine label, else the report labeler's verdict, else typical."""
    if sample.fine is not None:
        return sample.fine
    if sample.report_text:
        return label_report(sample.report_text).subcategory
    return Subcategory.TYPICAL


def evaluate(params: MlpParams, val: ValidationData) -> dict:
    """Every metric the validation split supports."""
    metrics = {}
    if len(val.positives):
        _, p_pos = forward_batch(params, val.positives)
        if len(set(val.subcategories)) == 2:
            metrics["auc_fg"] = auc_fg(list(zip(p_pos.tolist(), val.subcategories)))
        if len(val.negatives):
            _, p_pos_negatives = forward_batch(params, val.negatives)
            metrics["auc"] = auc_from_groups(p_pos_negatives, p_pos)
    if len(val.uncertain):
        _, p_unc = forward_batch(params, val.uncertain)
        metrics["uncertain_spread"] = uncertain_spread(p_unc)
    return metrics


class TrainResult(BaseModel):
    checkpoints: List[Checkpoint]
    best: Checkpoint
    history: List[ValidationRecord]

    class Config:
        arbitrary_types_allowed = True


class TrainerState(str, Enum):
    IDLE = "IDLE"
    RUNNING = "RUNNING"
    FINISHED = "FINISHED"
    ERROR = "ERROR"


class Trainer(BaseModel):
    """Minibatch Adam loop with epoch-wise seeded reshuffling.

    All mutable run state (parameters, moments, sampler permutation and
    cursor, generator state) lives on the trainer and is captured whole by
    `checkpoint()`.
    """

    config: TrainConfig
    objective: Objective
    features: np.ndarray
    labels: np.ndarray
    kinds: np.ndarray
    params: MlpParams
    adam: AdamState
    rng: np.random.Generator
    order: np.ndarray
    cursor: int = 0
    iteration: int = 0
    state: TrainerState = TrainerState.IDLE
    run_id: str = "train"
    log: Any = None

    class Config:
        arbitrary_types_allowed = True

    @classmethod
    def create(
        cls,
        cfg: TrainConfig,
        train_set: Sequence[Sample],
        resume_from: Optional[Checkpoint] = None,
        run_id: str = "train",
    ) -> "Trainer":
        tagged = apply_strategy(train_set, cfg.objective)
        if not tagged:
            raise InvalidInputError(
                f"No training samples left after applying {cfg.objective.strategy.value}"
            )
        features, labels, kinds = encode_tagged(tagged)
        if features.shape[1] != cfg.layer_sizes[0]:
            raise InvalidInputError(
                f"Samples have {features.shape[1]} features but the model expects {cfg.layer_sizes[0]}"
            )
        common = dict(
            config=cfg,
            objective=Objective.from_config(cfg.objective),
            features=features,
            labels=labels,
            kinds=kinds,
            run_id=run_id,
            log=logger.bind(run=run_id),
        )
        if resume_from is not None:
            return cls._resume(resume_from, **common)

        params = init_params(cfg.layer_sizes, cfg.seed)
        rng = np.random.default_rng([cfg.seed, 1])
        return cls(
            params=params,
            adam=AdamState.zeros_like(params, **cfg.adam_hyper()),
            rng=rng,
            order=rng.permutation(len(features)),
            **common,
        )

    @classmethod
    def _resume(cls, ckpt: Checkpoint, **common) -> "Trainer":
        cfg: TrainConfig = common["config"]
        if ckpt.config_hash != cfg.digest():
            raise CheckpointError("Checkpoint was produced by a different training config")
        if len(ckpt.sampler_order) != len(common["features"]):
            raise CheckpointError("Checkpoint sampler does not match the training set size")
        rng = np.random.default_rng()
        rng.bit_generator.state = ckpt.rng_state
        return cls(
            params=ckpt.params,
            adam=ckpt.adam,
            rng=rng,
            order=ckpt.sampler_order.copy(),
            cursor=ckpt.sampler_cursor,
            iteration=ckpt.iteration,
            **common,
        )

    @contextmanager
    def state_context(self, new_state: TrainerState):
        previous_state = self.state
        self.state = new_state
        try:
            yield
        except Exception as e:
            self.state = TrainerState.ERROR
            raise e
        finally:
            # a transition made inside the block (FINISHED, ERROR) sticks
            if self.state == new_state:
                self.state = previous_state

    def next_batch(self) -> np.ndarray:
        n = len(self.order)
        chunks, need = [], self.config.batch_size
        while need:
            if self.cursor == n:
                self.order = self.rng.permutation(n)
                self.cursor = 0
                self.log.debug(f"Reshuffled training order at iteration {self.iteration}")
            chunk = self.order[self.cursor : self.cursor + need]
            self.cursor += len(chunk)
            need -= len(chunk)
            chunks.append(chunk)
        return np.concatenate(chunks)

    def step(self) -> float:
        idx = self.next_batch()
        loss, grads = backward_arrays(
            self.params, self.features[idx], self.labels[idx], self.kinds[idx], self.objective
        )
        self.params, self.adam = adam_step(self.adam, self.params, grads)
        self.iteration += 1
        return loss

    def checkpoint(self) -> Checkpoint:
        return Checkpoint(
            iteration=self.iteration,
            params=self.params,
            adam=self.adam,
            rng_state=self.rng.bit_generator.state,
            sampler_order=self.order.copy(),
            sampler_cursor=self.cursor,
            config_hash=self.config.digest(),
        )

    def run(self, val: ValidationData) -> TrainResult:
        """Train to `config.iterations`, validating at every checkpoint."""
        cfg = self.config
        val.check_metric(cfg.selection_metric)
        if self.state != TrainerState.IDLE:
            raise RuntimeError(f"Cannot run trainer from state: {self.state}")

        checkpoints: List[Checkpoint] = []
        history: List[ValidationRecord] = []
        with self.state_context(TrainerState.RUNNING):
            window: List[float] = []
            while self.iteration < cfg.iterations:
                window.append(self.step())
                if self.iteration % cfg.checkpoint_every:
                    continue
                checkpoints.append(self.checkpoint())
                record = ValidationRecord(
                    iteration=self.iteration,
                    train_loss=float(np.mean(window)),
                    **evaluate(self.params, val),
                )
                history.append(record)
                window = []
                self.log.info(
                    f"Iteration {self.iteration}/{cfg.iterations}: "
                    f"loss={record.train_loss:.6f} "
                    f"{cfg.selection_metric}={getattr(record, cfg.selection_metric):.6f}"
                )
            self.state = TrainerState.FINISHED

        if not checkpoints:
            raise InvalidInputError("Run emitted no checkpoints; it was already complete")
        return TrainResult(
            checkpoints=checkpoints,
            best=select_best(checkpoints, history, cfg.selection_metric),
            history=history,
        )


def select_best(
    checkpoints: Sequence[Checkpoint],
    history: Sequence[ValidationRecord],
    metric: SelectionMetric,
) -> Checkpoint:
    """Best validation score; ties resolve to the earliest checkpoint."""
    sign = -1.0 if metric == "uncertain_spread" else 1.0
    best_idx = 0
    for i, record in enumerate(history):
        if sign * getattr(record, metric) > sign * getattr(history[best_idx], metric):
            best_idx = i
    return checkpoints[best_idx]


def train(
    cfg: TrainConfig,
    train_set: Sequence[Sample],
    val_set: Sequence[Sample],
    resume_from: Optional[Checkpoint] = None,
    run_id: str = "train",
) -> TrainResult:
    val = ValidationData.from_samples(val_set, cfg.layer_sizes[0])
    val.check_metric(cfg.selection_metric)
    trainer = Trainer.create(cfg, train_set, resume_from=resume_from, run_id=run_id)
    return trainer.run(val)
