from pathlib import Path
from typing import List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

from app.common.config import config, load_toml, parse_model, resolve_path
from app.data import SynthConfig
from app.model import TrainConfig
from app.objective import ObjectiveConfig

MetricName = Literal["auc_fg", "auc", "uncertain_spread"]


class MethodSpec(ObjectiveConfig):
    """A named objective, one row group of the results table."""

    name: str = Field(..., min_length=1)

    @property
    def objective(self) -> ObjectiveConfig:
        return ObjectiveConfig(**self.model_dump(exclude={"name"}))


class DataSection(BaseModel):
    """Either a pair of dataset files or an inline synthetic geometry.

    With `synth`, the training set carries the configured label noise and the
    validation set is a clean draw seeded `synth.seed + val_seed_offset`.
    """

    train_path: Optional[Path] = None
    val_path: Optional[Path] = None
    synth: Optional[SynthConfig] = None
    val_seed_offset: int = 1000

    @model_validator(mode="after")
    def check_source(self) -> "DataSection":
        has_files = self.train_path is not None or self.val_path is not None
        if has_files == (self.synth is not None):
            raise ValueError("Give either train_path + val_path or a [data.synth] table")
        if has_files and (self.train_path is None or self.val_path is None):
            raise ValueError("train_path and val_path must be given together")
        return self


class ExperimentConfig(BaseModel):
    name: str = "experiment"
    data: DataSection = Field(default_factory=lambda: DataSection(synth=SynthConfig()))
    methods: List[MethodSpec] = Field(..., min_length=1)
    train: TrainConfig = Field(default_factory=TrainConfig)
    seeds: List[int] = Field(default_factory=lambda: [0, 1, 2], min_length=1)
    metrics: List[MetricName] = Field(default_factory=lambda: ["auc_fg"], min_length=1)
    output_dir: Optional[Path] = None
    workers: int = Field(1, ge=1)

    @model_validator(mode="after")
    def check_unique(self) -> "ExperimentConfig":
        names = [m.name for m in self.methods]
        duplicates = sorted({n for n in names if names.count(n) > 1})
        if duplicates:
            raise ValueError(f"Method names must be unique, repeated: {duplicates}")
        if len(set(self.seeds)) != len(self.seeds):
            raise ValueError(f"Seeds must be unique, got {self.seeds}")
        return self

    @property
    def out_dir(self) -> Path:
        if self.output_dir is None:
            return config.paths.workspace_root / self.name
        return resolve_path(self.output_dir)

    def train_config(self, method: MethodSpec, seed: int) -> TrainConfig:
        return self.train.model_copy(update={"objective": method.objective, "seed": seed})


def load_experiment(
    path: Path,
    output_dir: Optional[Path] = None,
    seed_override: Optional[int] = None,
) -> ExperimentConfig:
    """Parse an experiment TOML file, applying CLI overrides."""
    path = Path(path)
    raw = load_toml(path)
    raw.setdefault("name", path.stem)
    if output_dir is not None:
        raw["output_dir"] = str(output_dir)
    if seed_override is not None:
        raw["seeds"] = [seed_override]
    data = raw.get("data", {})
    for key in ("train_path", "val_path"):
        if data.get(key):
            data[key] = str(resolve_path(data[key]))
    return parse_model(ExperimentConfig, raw, str(path))
