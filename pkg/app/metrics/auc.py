from typing import Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field

from app.common.exceptions import InvalidInputError, UndefinedMetricError
from app.core.schema import FineLabel, Subcategory


class ScoredSample(BaseModel):
    score: float = Field(..., description="Model p_pos")
    group: int = Field(..., ge=0, le=1, description="0 = reference group, 1 = group ranked higher")

    class Config:
        frozen = True


def _as_scores(values) -> np.ndarray:
    scores = np.asarray(values, dtype=np.float64).ravel()
    if not np.all(np.isfinite(scores)):
        raise InvalidInputError("Scores must be finite")
    return scores


def midranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks with ties sharing the average of their positions."""
    _, inverse, counts = np.unique(values, return_inverse=True, return_counts=True)
    starts = np.cumsum(counts) - counts
    return (starts + (counts + 1) / 2.0)[inverse]


def auc_from_groups(scores0: Sequence[float], scores1: Sequence[float]) -> float:
    """Mann-Whitney AUC: P(score1 > score0) + 0.5 P(score1 == score0).

    Rank sums of midranks are exact half-integers, so the result equals the
    pairwise count divided by n0 * n1.
    """
    s0, s1 = _as_scores(scores0), _as_scores(scores1)
    n0, n1 = len(s0), len(s1)
    if n0 == 0 or n1 == 0:
        raise UndefinedMetricError(
            f"AUC needs both groups non-empty, got {n0} and {n1} samples"
        )
    ranks = midranks(np.concatenate([s0, s1]))
    u_statistic = ranks[n0:].sum() - n1 * (n1 + 1) / 2.0
    return float(u_statistic / (n0 * n1))


def auc_pairwise(scores0: Sequence[float], scores1: Sequence[float]) -> float:
    """Exhaustive O(n0 * n1) pair count; reference for `auc_from_groups`."""
    s0, s1 = _as_scores(scores0), _as_scores(scores1)
    if len(s0) == 0 or len(s1) == 0:
        raise UndefinedMetricError("AUC needs both groups non-empty")
    wins = np.count_nonzero(s1[:, None] > s0[None, :])
    ties = np.count_nonzero(s1[:, None] == s0[None, :])
    return float((wins + 0.5 * ties) / (len(s0) * len(s1)))


def auc(samples: Sequence[ScoredSample]) -> float:
    scores0 = [s.score for s in samples if s.group == 0]
    scores1 = [s.score for s in samples if s.group == 1]
    return auc_from_groups(scores0, scores1)


def _subcategory(label: Union[FineLabel, Subcategory]) -> Subcategory:
    return label.subcategory if isinstance(label, FineLabel) else Subcategory(label)


def auc_fg(positives: Sequence[Tuple[float, Union[FineLabel, Subcategory]]]) -> float:
    """AUC between atypical (group 0) and typical (group 1) positives."""
    samples = [
        ScoredSample(
            score=score, group=int(_subcategory(label) == Subcategory.TYPICAL)
        )
        for score, label in positives
    ]
    try:
        return auc(samples)
    except UndefinedMetricError as e:
        raise UndefinedMetricError(
            f"AUC^FG needs both atypical and typical positives: {e}"
        ) from e


def uncertain_spread(p_pos: Sequence[float]) -> float:
    """Mean |p_pos - 0.5|; 0 means perfectly uniform predictions."""
    p = _as_scores(p_pos)
    if len(p) == 0:
        raise UndefinedMetricError("No uncertain samples to evaluate")
    return float(np.mean(np.abs(p - 0.5)))
