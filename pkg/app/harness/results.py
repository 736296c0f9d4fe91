import csv
import io
import os
from pathlib import Path
from typing import Iterable, List, Sequence

from pydantic import BaseModel

from app.metrics import MetricReport

RESULTS_HEADER = ("method", "metric", "mean", "std", "runs", "per_seed", "best")

# Metrics where a smaller value is better.
LOWER_IS_BETTER = {"uncertain_spread"}


def fmt(value: float) -> str:
    # + 0.0 folds -0.0 into 0.0
    return f"{value + 0.0:.6f}"


class ResultRow(BaseModel):
    method: str
    report: MetricReport

    @property
    def metric(self) -> str:
        return self.report.name


class ResultsTable(BaseModel):
    """One row per method x metric, in method order then metric order."""

    rows: List[ResultRow]

    def get(self, method: str, metric: str = "auc_fg") -> MetricReport:
        for row in self.rows:
            if row.method == method and row.metric == metric:
                return row.report
        raise KeyError(f"No result for method '{method}' metric '{metric}'")

    def best_method(self, metric: str) -> str:
        candidates = [row for row in self.rows if row.metric == metric]
        if not candidates:
            raise KeyError(f"No rows for metric '{metric}'")
        sign = -1.0 if metric in LOWER_IS_BETTER else 1.0
        return max(candidates, key=lambda row: sign * row.report.mean).method

    def to_records(self) -> List[Sequence[str]]:
        best = {metric: self.best_method(metric) for metric in {r.metric for r in self.rows}}
        return [
            (
                row.method,
                row.metric,
                fmt(row.report.mean),
                fmt(row.report.std),
                str(len(row.report.per_run)),
                ";".join(fmt(v) for v in row.report.per_run),
                "1" if best[row.metric] == row.method else "0",
            )
            for row in self.rows
        ]


def render_csv(header: Sequence[str], records: Iterable[Sequence[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(records)
    return buffer.getvalue()


def atomic_write_text(path: Path, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never see a partial file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def write_results(table: ResultsTable, path: Path) -> Path:
    atomic_write_text(path, render_csv(RESULTS_HEADER, table.to_records()))
    return path
