from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from app.core.schema import CoarseLabel, Sample, Subcategory
from app.data.noise import inject_noise
from app.labeler import ReportCorpus, default_corpus


class ClusterSpec(BaseModel):
    """Isotropic 2-D Gaussian blob."""

    mean: Tuple[float, float]
    std: float = Field(0.7, gt=0.0)
    count: int = Field(500, ge=0)

    class Config:
        frozen = True


class SynthConfig(BaseModel):
    """Cluster geometry with atypical positives sitting between the classes."""

    negative: ClusterSpec = ClusterSpec(mean=(-2.0, 0.0))
    typical_pos: ClusterSpec = ClusterSpec(mean=(2.0, 0.0))
    atypical_pos: ClusterSpec = ClusterSpec(mean=(-0.5, 0.0))
    uncertain: ClusterSpec = ClusterSpec(mean=(0.0, 0.0))
    noise_rate: float = Field(0.0, ge=0.0, lt=1.0)
    seed: int = 0

    class Config:
        frozen = True

    @classmethod
    def with_counts(
        cls, neg: int, typical_pos: int, atypical_pos: int, uncertain: int, **kwargs
    ) -> "SynthConfig":
        base = cls()

        def resized(spec: ClusterSpec, count: int) -> ClusterSpec:
            return ClusterSpec(mean=spec.mean, std=spec.std, count=count)

        return cls(
            negative=resized(base.negative, neg),
            typical_pos=resized(base.typical_pos, typical_pos),
            atypical_pos=resized(base.atypical_pos, atypical_pos),
            uncertain=resized(base.uncertain, uncertain),
            **kwargs,
        )


def _draw(rng: np.random.Generator, spec: ClusterSpec) -> np.ndarray:
    return rng.normal(loc=spec.mean, scale=spec.std, size=(spec.count, 2))


def generate(cfg: SynthConfig, corpus: Optional[ReportCorpus] = None) -> List[Sample]:
    """Draw every cluster in a fixed order; positives get a report sentence.

    Coarse labels are clean here; see `synthesize` for the noisy variant.
    """
    corpus = corpus or default_corpus()
    rng = np.random.default_rng(cfg.seed)
    samples: List[Sample] = []

    for i, x in enumerate(_draw(rng, cfg.negative)):
        samples.append(
            Sample(id=f"neg-{i:05d}", features=x.tolist(), coarse=CoarseLabel.NEGATIVE)
        )

    for name, spec, fine in (
        ("typ", cfg.typical_pos, Subcategory.TYPICAL),
        ("aty", cfg.atypical_pos, Subcategory.ATYPICAL),
    ):
        examples = corpus.examples(fine)
        points = _draw(rng, spec)
        picks = rng.integers(len(examples), size=spec.count)
        for i, (x, pick) in enumerate(zip(points, picks)):
            samples.append(
                Sample(
                    id=f"{name}-{i:05d}",
                    features=x.tolist(),
                    coarse=CoarseLabel.POSITIVE,
                    fine=fine,
                    report_text=examples[pick].text,
                )
            )

    for i, x in enumerate(_draw(rng, cfg.uncertain)):
        samples.append(
            Sample(id=f"unc-{i:05d}", features=x.tolist(), coarse=CoarseLabel.UNCERTAIN)
        )
    return samples


def synthesize(cfg: SynthConfig, corpus: Optional[ReportCorpus] = None) -> List[Sample]:
    """`generate` followed by label-noise injection at `cfg.noise_rate`."""
    return inject_noise(generate(cfg, corpus), cfg.noise_rate, cfg.seed)
