from typing import Sequence, Tuple

import numpy as np
from pydantic import BaseModel

from app.common.exceptions import InvalidInputError


class MetricReport(BaseModel):
    """Mean and sample standard deviation (n - 1 divisor) over runs"""

    name: str
    mean: float
    std: float
    per_run: Tuple[float, ...]

    class Config:
        frozen = True


def aggregate_runs(values: Sequence[float], name: str = "") -> MetricReport:
    if len(values) == 0:
        raise InvalidInputError("Cannot aggregate zero runs")
    arr = np.asarray(values, dtype=np.float64)
    std = float(np.std(arr, ddof=1)) if len(arr) > 1 else 0.0
    return MetricReport(
        name=name, mean=float(np.mean(arr)), std=std, per_run=tuple(float(v) for v in arr)
    )
