"""Tables behind the loss-curve, decision-boundary and tau-sweep plots."""
import asyncio
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field, ValidationError

from app.common.config import format_validation_error, parse_model
from app.common.exceptions import ConfigurationError, InvalidInputError, UnsupportedError
from app.common.logger import logger
from app.core.schema import NoiseLoss, Strategy
from app.harness.config import ExperimentConfig, MethodSpec
from app.harness.experiment import execute_experiment
from app.harness.results import ResultsTable, atomic_write_text, fmt, render_csv, write_results
from app.loss import CrossEntropyLoss, PartiallyHuberisedLoss
from app.model import Checkpoint, forward_batch

BASELINE_NAME = "U-Ones"


class CurveTable(BaseModel):
    header: List[str]
    rows: List[List[float]]

    def column(self, name: str) -> np.ndarray:
        j = self.header.index(name)
        return np.array([row[j] for row in self.rows])

    def to_csv(self) -> str:
        return render_csv(
            self.header, ([f"{row[0]:.12g}"] + [fmt(v) for v in row[1:]] for row in self.rows)
        )


def loss_grid(step: float) -> np.ndarray:
    """s = k * step on (0, 1], rounded to 12 decimals; 1.0 is always included."""
    if not 0.0 < step <= 1.0:
        raise InvalidInputError(f"Grid step must lie in (0, 1], got {step}")
    n = int(np.floor(1.0 / step + 1e-9))
    s = np.round(np.arange(1, n + 1) * step, 12)
    if s[-1] < 1.0:
        s = np.append(s, 1.0)
    return s


def emit_loss_curves(taus: Sequence[float], step: float = 0.01) -> CurveTable:
    """CE and one PCE column per tau, all evaluated for a positive label."""
    s = loss_grid(step)
    ones = np.ones_like(s, dtype=np.int64)
    columns = [s, CrossEntropyLoss().value(s, ones)]
    header = ["s", "CE"]
    for tau in taus:
        try:
            pce = PartiallyHuberisedLoss(tau=tau)
        except ValidationError as e:
            raise ConfigurationError(f"tau={tau}: {format_validation_error(e)}") from e
        columns.append(pce.value(s, ones))
        header.append(f"PCE@{tau:g}")
    return CurveTable(header=header, rows=np.stack(columns, axis=1).tolist())


class Bounds(BaseModel):
    x_min: float = -4.0
    x_max: float = 4.0
    y_min: float = -3.0
    y_max: float = 3.0

    def axes(self, resolution: int) -> Tuple[np.ndarray, np.ndarray]:
        return (
            np.linspace(self.x_min, self.x_max, resolution),
            np.linspace(self.y_min, self.y_max, resolution),
        )


class BoundaryGrid(BaseModel):
    x: List[float]
    y: List[float]
    p_pos: List[float]

    def to_csv(self) -> str:
        return render_csv(
            ("x", "y", "p_pos"),
            (
                (f"{x:.12g}", f"{y:.12g}", fmt(p))
                for x, y, p in zip(self.x, self.y, self.p_pos)
            ),
        )


def emit_boundary_grid(
    checkpoint: Checkpoint,
    bounds: Bounds = Bounds(),
    resolution: int = 101,
) -> BoundaryGrid:
    """p_pos on a resolution x resolution lattice, x varying fastest."""
    if checkpoint.params.input_dim != 2:
        raise UnsupportedError(
            f"Boundary grids need a 2-D input model, got {checkpoint.params.input_dim}-D"
        )
    if resolution < 2:
        raise InvalidInputError(f"Resolution must be at least 2, got {resolution}")
    xs, ys = bounds.axes(resolution)
    gx, gy = np.meshgrid(xs, ys)
    points = np.stack([gx.ravel(), gy.ravel()], axis=1)
    _, p_pos = forward_batch(checkpoint.params, points)
    return BoundaryGrid(x=points[:, 0].tolist(), y=points[:, 1].tolist(), p_pos=p_pos.tolist())


class TauSweep(BaseModel):
    taus: List[float] = Field(..., min_length=1)
    noise_loss: NoiseLoss = NoiseLoss.PCE


def tau_sweep_methods(
    taus: Sequence[float], noise_loss: NoiseLoss = NoiseLoss.PCE
) -> List[MethodSpec]:
    """The CE baseline (U-Ones) followed by one PU-RM method per tau."""
    methods = [MethodSpec(name=BASELINE_NAME, strategy=Strategy.U_ONES)]
    methods += [
        MethodSpec(
            name=f"PU-RM@tau={tau:g}", strategy=Strategy.PU_RM, tau=tau, noise_loss=noise_loss
        )
        for tau in taus
    ]
    return methods


def emit_tau_sweep(
    cfg: ExperimentConfig,
    taus: Sequence[float],
    output_dir: Optional[Path] = None,
    noise_loss: NoiseLoss = NoiseLoss.PCE,
) -> ResultsTable:
    """Replace the config's methods with the tau sweep and rank by AUC^FG only."""
    sweep = parse_model(TauSweep, {"taus": list(taus), "noise_loss": noise_loss}, "tau sweep")
    try:
        methods = tau_sweep_methods(sweep.taus, sweep.noise_loss)
    except ValidationError as e:
        raise ConfigurationError(f"tau sweep: {format_validation_error(e)}") from e
    data = cfg.model_dump()
    data["methods"] = [m.model_dump() for m in methods]
    data["metrics"] = ["auc_fg"]
    data["train"]["selection_metric"] = "auc_fg"
    if output_dir is not None:
        data["output_dir"] = output_dir
    sweep_cfg = parse_model(ExperimentConfig, data, "tau sweep")

    table = asyncio.run(execute_experiment(sweep_cfg))
    path = write_results(table, sweep_cfg.out_dir / "tau_sweep.csv")
    logger.info(f"Wrote tau sweep over {sweep.taus} to {path}")
    return table


def write_table(text: str, path: Path) -> Path:
    atomic_write_text(path, text)
    return path
