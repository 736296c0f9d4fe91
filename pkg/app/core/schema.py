import math
from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, model_validator


class CoarseLabel(str, Enum):
    """Report-mined category for one finding"""

    NEGATIVE = "0"
    POSITIVE = "1"
    UNCERTAIN = "u"
    BLANK = "blank"


class Strategy(str, Enum):
    """How coarse labels are mapped to training targets and losses"""

    U_IGNORE = "U-Ignore"
    U_ZEROS = "U-Zeros"
    U_ONES = "U-Ones"
    U_RM = "U-RM"
    P_RM = "P-RM"
    PU_RM = "PU-RM"
    U_UNIFORM = "U-Uniform"


class LossKind(str, Enum):
    CE = "CE"
    PCE = "PCE"
    GCE = "GCE"
    UC = "UC"


class NoiseLoss(str, Enum):
    """Bounded-risk losses selectable for risk modulation"""

    PCE = "PCE"
    GCE = "GCE"


class Target(str, Enum):
    """Effective training target after an uncertainty strategy is applied"""

    ZERO = "0"
    ONE = "1"
    UNIFORM = "uniform"


class Subcategory(str, Enum):
    """Fine subcategory of a positive case"""

    ATYPICAL = "atypical"
    TYPICAL = "typical"


class Dimension(str, Enum):
    SEVERITY = "severity"
    CHANGE = "change"


PROBABILITY_TOLERANCE = 1e-12


class Logits(BaseModel):
    """Pre-softmax scores for the (negative, positive) classes."""

    z_neg: float
    z_pos: float

    class Config:
        frozen = True

    def is_finite(self) -> bool:
        return math.isfinite(self.z_neg) and math.isfinite(self.z_pos)


class Probabilities(BaseModel):
    """Softmax pair (p^n, p^p); normalised on construction."""

    p_neg: float
    p_pos: float

    class Config:
        frozen = True

    @model_validator(mode="after")
    def check_normalized(self) -> "Probabilities":
        for value in (self.p_neg, self.p_pos):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"Probability out of range: {value}")
        if abs(self.p_neg + self.p_pos - 1.0) > PROBABILITY_TOLERANCE:
            raise ValueError(
                f"Probabilities must sum to 1, got {self.p_neg} + {self.p_pos}"
            )
        return self

    @classmethod
    def from_positive(cls, p_pos: float) -> "Probabilities":
        return cls(p_neg=1.0 - p_pos, p_pos=p_pos)


class LossGrad(BaseModel):
    """Gradient of a per-sample loss with respect to the two logits"""

    d_z_neg: float
    d_z_pos: float

    class Config:
        frozen = True


class KeywordHit(BaseModel):
    stem: str = Field(..., description="Matched lexicon entry")
    surface: str = Field(..., description="Token as it appeared in the text")
    position: int = Field(..., ge=0, description="Token index")
    polarity: Subcategory
    dimension: Dimension

    class Config:
        frozen = True


class FineLabel(BaseModel):
    """Labeler output: a subcategory plus the hits that produced it."""

    subcategory: Subcategory
    hits: Tuple[KeywordHit, ...] = ()

    class Config:
        frozen = True

    @model_validator(mode="after")
    def check_default(self) -> "FineLabel":
        if not self.hits and self.subcategory != Subcategory.TYPICAL:
            raise ValueError("A fine label without keyword hits must be typical")
        return self


class Sample(BaseModel):
    """One dataset record for the finding under study.

    `fine` models ground truth, so label-noise injection may leave a fine
    label on a sample whose coarse label was flipped to negative.
    """

    id: str
    features: List[float]
    coarse: CoarseLabel
    fine: Optional[Subcategory] = None
    report_text: Optional[str] = None

    class Config:
        frozen = True

    @model_validator(mode="after")
    def check_fine(self) -> "Sample":
        if self.fine is not None and self.coarse not in (
            CoarseLabel.POSITIVE,
            CoarseLabel.NEGATIVE,
        ):
            raise ValueError(
                f"Sample {self.id}: fine label requires a positive or negative coarse label"
            )
        return self


class TaggedSample(BaseModel):
    """A sample after an uncertainty strategy: target plus the loss to apply"""

    id: str
    features: List[float]
    target: Target
    loss_kind: LossKind

    class Config:
        frozen = True
