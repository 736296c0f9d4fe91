from pydantic import BaseModel, Field

from app.core.schema import LossKind, NoiseLoss, Strategy
from app.loss import GceParam, TauParam


class ObjectiveConfig(BaseModel):
    """Which loss applies to which label class."""

    strategy: Strategy = Field(Strategy.PU_RM, description="Uncertainty strategy")
    tau: TauParam = 0.3
    q: GceParam = 0.7
    noise_loss: NoiseLoss = Field(
        NoiseLoss.PCE, description="Bounded-risk loss used for risk modulation"
    )
    lam: float = Field(
        1.0,
        ge=0.0,
        alias="lambda",
        description="Weight of the noise loss, U-Uniform mode only",
    )

    class Config:
        frozen = True
        populate_by_name = True

    @property
    def noise_kind(self) -> LossKind:
        return LossKind(self.noise_loss.value)
