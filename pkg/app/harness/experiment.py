import asyncio
import re
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from pydantic import BaseModel

from app.common.exceptions import ExperimentError, UndefinedMetricError
from app.common.logger import add_run_sink, logger
from app.core.schema import Sample
from app.data import generate, read_dataset, synthesize
from app.harness.config import ExperimentConfig, MethodSpec, load_experiment
from app.harness.results import (
    ResultRow,
    ResultsTable,
    atomic_write_text,
    fmt,
    render_csv,
    write_results,
)
from app.metrics import aggregate_runs
from app.model import TrainResult, ValidationRecord, save_checkpoint, train

HISTORY_HEADER = ("iteration", "train_loss", "auc_fg", "auc", "uncertain_spread")


class RunOutcome(BaseModel):
    """Best-checkpoint metrics of one (method, seed) run."""

    method: str
    seed: int
    best_iteration: int
    metrics: Dict[str, float]


def load_datasets(cfg: ExperimentConfig) -> Tuple[List[Sample], List[Sample]]:
    data = cfg.data
    if data.synth is None:
        return read_dataset(data.train_path), read_dataset(data.val_path)
    val_cfg = data.synth.model_copy(
        update={"seed": data.synth.seed + data.val_seed_offset, "noise_rate": 0.0}
    )
    return synthesize(data.synth), generate(val_cfg)


def slug(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9._+=@-]", "_", name)


def run_dir(cfg: ExperimentConfig, method: str, seed: int) -> Path:
    return cfg.out_dir / "runs" / slug(method) / f"seed{seed}"


def _history_csv(history: List[ValidationRecord]) -> str:
    def cell(value: Optional[float]) -> str:
        return "" if value is None else fmt(value)

    return render_csv(
        HISTORY_HEADER,
        (
            (str(r.iteration), cell(r.train_loss), cell(r.auc_fg), cell(r.auc), cell(r.uncertain_spread))
            for r in history
        ),
    )


def _save_artifacts(directory: Path, result: TrainResult) -> None:
    for ckpt in result.checkpoints:
        save_checkpoint(ckpt, directory / f"iter{ckpt.iteration:07d}.ckpt")
    save_checkpoint(result.best, directory / "best.ckpt")
    atomic_write_text(directory / "history.csv", _history_csv(result.history))


def run_single(
    cfg: ExperimentConfig,
    method: MethodSpec,
    seed: int,
    train_set: List[Sample],
    val_set: List[Sample],
) -> RunOutcome:
    """Train one (method, seed) pair and persist its checkpoints and history."""
    directory = run_dir(cfg, method.name, seed)
    run_id = f"{method.name}/seed{seed}"
    sink = add_run_sink(directory / "run.log", run_id)
    log = logger.bind(run=run_id)
    try:
        log.info(f"Training {method.name} ({method.strategy.value}) with seed {seed}")
        result = train(
            cfg.train_config(method, seed), train_set, val_set, run_id=run_id
        )
        _save_artifacts(directory, result)
        best = next(r for r in result.history if r.iteration == result.best.iteration)
        metrics = {}
        for name in cfg.metrics:
            value = getattr(best, name)
            if value is None:
                raise UndefinedMetricError(f"Metric '{name}' is undefined on this validation set")
            metrics[name] = value
        log.info(f"Best checkpoint at iteration {best.iteration}: {metrics}")
        return RunOutcome(
            method=method.name, seed=seed, best_iteration=best.iteration, metrics=metrics
        )
    except Exception as e:
        log.error(f"Run failed: {e}")
        raise ExperimentError(method.name, seed, e) from e
    finally:
        logger.remove(sink)


def collect(cfg: ExperimentConfig, outcomes: List[RunOutcome]) -> ResultsTable:
    """Deterministic reduce: rows follow config method order, values seed order."""
    by_key = {(o.method, o.seed): o for o in outcomes}
    rows = []
    for method in cfg.methods:
        runs = [by_key[(method.name, seed)] for seed in sorted(cfg.seeds)]
        for metric in cfg.metrics:
            report = aggregate_runs([r.metrics[metric] for r in runs], name=metric)
            rows.append(ResultRow(method=method.name, report=report))
    return ResultsTable(rows=rows)


async def execute_experiment(cfg: ExperimentConfig) -> ResultsTable:
    """Fan (method, seed) runs out to worker threads and reduce their outcomes."""
    train_set, val_set = load_datasets(cfg)
    logger.info(
        f"Experiment '{cfg.name}': {len(cfg.methods)} methods x {len(cfg.seeds)} seeds, "
        f"{len(train_set)} train / {len(val_set)} val samples"
    )
    semaphore = asyncio.Semaphore(cfg.workers)

    async def run_guarded(method: MethodSpec, seed: int) -> RunOutcome:
        async with semaphore:
            return await asyncio.to_thread(run_single, cfg, method, seed, train_set, val_set)

    outcomes = await asyncio.gather(
        *(run_guarded(m, s) for m in cfg.methods for s in cfg.seeds)
    )
    return collect(cfg, sorted(outcomes, key=lambda o: (o.method, o.seed)))


def run_experiment(
    experiment: Union[ExperimentConfig, Path, str],
    output_dir: Optional[Path] = None,
    seed_override: Optional[int] = None,
) -> ResultsTable:
    """Run every method x seed, write `results.csv` under the output directory."""
    if isinstance(experiment, ExperimentConfig):
        cfg = experiment
        if output_dir is not None or seed_override is not None:
            update = {}
            if output_dir is not None:
                update["output_dir"] = Path(output_dir)
            if seed_override is not None:
                update["seeds"] = [seed_override]
            cfg = cfg.model_copy(update=update)
    else:
        cfg = load_experiment(Path(experiment), output_dir, seed_override)

    table = asyncio.run(execute_experiment(cfg))
    path = write_results(table, cfg.out_dir / "results.csv")
    logger.info(f"Wrote {len(table.rows)} result rows to {path}")
    return table
