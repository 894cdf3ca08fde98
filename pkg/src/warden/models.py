"""
Models for detection results and detector metadata.
"""
import math
from typing import Any, Callable, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..config.models import Hypothesis
from ..dist.dependent import DependentSizeModel
from ..dist.models import SizePmf


class DetectorVerdict(BaseModel):
    """One decision; H1 iff statistic > threshold."""
    model_config = ConfigDict(frozen=True)

    decision: Hypothesis
    statistic: float
    threshold: float

    @model_validator(mode='after')
    def _strict_threshold(self) -> 'DetectorVerdict':
        if math.isnan(self.statistic):
            raise ValueError("detector statistic is NaN")
        expected = Hypothesis.H1 if self.statistic > self.threshold else Hypothesis.H0
        if self.decision != expected:
            raise ValueError(f"decision {self.decision.value} contradicts statistic {self.statistic} "
                             f"vs threshold {self.threshold}")
        return self

    @classmethod
    def from_statistic(cls, statistic: float, threshold: float) -> 'DetectorVerdict':
        decision = Hypothesis.H1 if statistic > threshold else Hypothesis.H0
        return cls(decision=decision, statistic=statistic, threshold=threshold)


class DetectionReport(BaseModel):
    """Monte Carlo error estimates of one detector."""
    model_config = ConfigDict(frozen=True)

    detector: str
    trials: int = Field(..., ge=1)
    p_fa: float = Field(..., ge=0.0, le=1.0, description="Fraction of H1 decisions on H0 streams")
    p_md: float = Field(..., ge=0.0, le=1.0, description="Fraction of H0 decisions on H1 streams")
    p_e: float = Field(..., ge=0.0, le=1.0, description="(p_fa + p_md) / 2")
    ci_halfwidth: float = Field(..., ge=0.0, description="95% normal-approximation half-width of p_e")

    @model_validator(mode='after')
    def _average(self) -> 'DetectionReport':
        if not math.isclose(self.p_e, (self.p_fa + self.p_md) / 2.0, abs_tol=1e-12):
            raise ValueError("p_e must equal (p_fa + p_md) / 2")
        return self


class DetectorContext(BaseModel):
    """What a detector factory may need to know about the source under test."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = Field(..., ge=1)
    pmf: Optional[SizePmf] = Field(None, description="H0 pmf of an i.i.d. source")
    alternative: Optional[SizePmf] = Field(None, description="H1 pmf f~ of an i.i.d. source")
    model: Optional[DependentSizeModel] = Field(None, description="H0 model of a dependent source")
    p: float = Field(0.0, ge=0.0, lt=1.0, description="Selection probability assumed under H1")
    alpha: float = Field(0.05, gt=0.0, lt=1.0, description="False-alarm target of the mean test")
    seed: int = Field(0, ge=0)


class DetectorDefinition(BaseModel):
    """Registry metadata of a detector."""
    name: str
    description: str
    factory: Callable[[DetectorContext], Any] = Field(..., description="Builds the detector from a context")
