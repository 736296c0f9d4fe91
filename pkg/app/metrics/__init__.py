from app.metrics.aggregate import MetricReport, aggregate_runs
from app.metrics.auc import (
    ScoredSample,
    auc,
    auc_fg,
    auc_from_groups,
    auc_pairwise,
    midranks,
    uncertain_spread,
)


__all__ = [
    "ScoredSample",
    "MetricReport",
    "auc",
    "auc_fg",
    "auc_from_groups",
    "auc_pairwise",
    "midranks",
    "uncertain_spread",
    "aggregate_runs",
]
