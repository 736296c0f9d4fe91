from app.harness.config import DataSection, ExperimentConfig, MethodSpec, load_experiment
from app.harness.experiment import (
    RunOutcome,
    execute_experiment,
    load_datasets,
    run_experiment,
    run_single,
)
from app.harness.figures import (
    BoundaryGrid,
    Bounds,
    CurveTable,
    emit_boundary_grid,
    emit_loss_curves,
    emit_tau_sweep,
    loss_grid,
    tau_sweep_methods,
    write_table,
)
from app.harness.results import ResultRow, ResultsTable, write_results


__all__ = [
    "DataSection",
    "ExperimentConfig",
    "MethodSpec",
    "load_experiment",
    "RunOutcome",
    "load_datasets",
    "execute_experiment",
    "run_experiment",
    "run_single",
    "ResultRow",
    "ResultsTable",
    "write_results",
    "CurveTable",
    "Bounds",
    "BoundaryGrid",
    "loss_grid",
    "emit_loss_curves",
    "emit_boundary_grid",
    "tau_sweep_methods",
    "emit_tau_sweep",
    "write_table",
]
