from typing import Iterable, List, Optional, Tuple

from app.common.exceptions import InvalidDatasetError
from app.core.schema import CoarseLabel, LossKind, Sample, Strategy, TaggedSample, Target
from app.objective.config import ObjectiveConfig

# Strategies that risk-modulate explicitly positive samples.
_MODULATED_POSITIVES = {Strategy.P_RM, Strategy.PU_RM, Strategy.U_UNIFORM}


def _uncertain_rule(cfg: ObjectiveConfig) -> Optional[Tuple[Target, LossKind]]:
    rules = {
        Strategy.U_IGNORE: None,
        Strategy.P_RM: None,
        Strategy.U_ZEROS: (Target.ZERO, LossKind.CE),
        Strategy.U_ONES: (Target.ONE, LossKind.CE),
        Strategy.U_RM: (Target.ONE, cfg.noise_kind),
        Strategy.PU_RM: (Target.ONE, cfg.noise_kind),
        Strategy.U_UNIFORM: (Target.UNIFORM, LossKind.UC),
    }
    return rules[cfg.strategy]


def tag_sample(sample: Sample, cfg: ObjectiveConfig) -> Optional[TaggedSample]:
    """Map one coarse label through the strategy; None means dropped."""
    if sample.coarse == CoarseLabel.BLANK:
        raise InvalidDatasetError(
            f"Sample {sample.id} has a blank label; blank samples must be filtered upstream"
        )

    if sample.coarse == CoarseLabel.NEGATIVE:
        kind = cfg.noise_kind if cfg.strategy == Strategy.U_UNIFORM else LossKind.CE
        rule = (Target.ZERO, kind)
    elif sample.coarse == CoarseLabel.POSITIVE:
        kind = cfg.noise_kind if cfg.strategy in _MODULATED_POSITIVES else LossKind.CE
        rule = (Target.ONE, kind)
    else:
        rule = _uncertain_rule(cfg)

    if rule is None:
        return None
    target, kind = rule
    return TaggedSample(
        id=sample.id, features=sample.features, target=target, loss_kind=kind
    )


def apply_strategy(
    samples: Iterable[Sample], cfg: ObjectiveConfig
) -> List[TaggedSample]:
    tagged = (tag_sample(sample, cfg) for sample in samples)
    return [t for t in tagged if t is not None]
