"""
Experiment specification and fixed report column sets.
"""
from typing import List, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..config.models import DetectorKind, EtaMode
from ..dist.dependent import DependentSizeModel
from ..dist.models import SizePmf


class ExperimentSpec(BaseModel):
    """Everything one sweep needs; reproducible from its fields alone."""
    model_config = ConfigDict(frozen=True)

    model: Union[SizePmf, DependentSizeModel] = Field(..., description="i.i.d. pmf or dependent model")
    epsilons: List[float] = Field(..., description="Covertness parameters")
    sizes: List[int] = Field(..., description="Stream lengths n")
    gammas: List[float] = Field(default_factory=lambda: [0.5], description="Insertion exponents")
    trials: int = Field(1000, ge=1)
    detectors: List[DetectorKind] = Field(default_factory=lambda: [DetectorKind.MEAN, DetectorKind.LRT])
    alpha: float = Field(0.05, gt=0.0, lt=1.0)
    eta_mode: EtaMode = EtaMode.CONSERVATIVE
    seed: int = Field(0, ge=0)
    workers: int = Field(1, ge=1)
    progress: bool = False

    @field_validator('epsilons')
    @classmethod
    def _check_epsilons(cls, values: List[float]) -> List[float]:
        for eps in values:
            if not 0.0 <= eps < 0.5:
                raise ValueError(f"epsilon must lie in [0, 1/2), got {eps}")
        return values

    @field_validator('sizes')
    @classmethod
    def _check_sizes(cls, values: List[int]) -> List[int]:
        for n in values:
            if n < 1:
                raise ValueError(f"stream length must be at least 1, got {n}")
        return values

    @field_validator('gammas')
    @classmethod
    def _check_gammas(cls, values: List[float]) -> List[float]:
        for gamma in values:
            if not 0.0 < gamma <= 1.0:
                raise ValueError(f"gamma must lie in (0, 1], got {gamma}")
        return values

    @model_validator(mode='after')
    def _non_empty(self) -> 'ExperimentSpec':
        for name in ('epsilons', 'sizes', 'gammas', 'detectors'):
            if not getattr(self, name):
                raise ValueError(f"{name} must not be empty")
        return self

    @property
    def is_dependent(self) -> bool:
        return isinstance(self.model, DependentSizeModel)


DETECTION_COLUMNS = ['detector', 'n', 'epsilon', 'gamma', 'trials', 'p_fa', 'p_md', 'p_e', 'ci']

COVERTNESS_COLUMNS = DETECTION_COLUMNS + [
    'p', 'total_kl', 'kl_budget', 'kl_ok', 'bound', 'kl_floor', 'floor_ok',
]

SQRT_LAW_COLUMNS = DETECTION_COLUMNS + ['p', 'target_bits', 'chebyshev_bound']

THROUGHPUT_COLUMNS = [
    'epsilon', 'n', 'p', 'trials', 'mean_nc', 'se_nc', 'expected_nc', 'threshold',
    'frac_above_threshold', 'mean_within_3se', 'size_law_pvalue',
]

DEPENDENT_COLUMNS = [
    'epsilon', 'n', 'p', 'eta', 'eta_mode', 'trials', 'mean_nc', 'se_nc', 'c_n', 'bound',
    'c_room', 'room_bound', 'expected_nc', 'max_row_kl', 'row_kl_budget', 'row_kl_ok',
    'p_e', 'ci',
]

FLAG_COLUMNS = [
    'epsilon', 'n', 'p', 'size_term', 'flag_term', 'flag_term_scheme', 'total', 'kl_budget',
    'size_ok', 'flag_bound', 'flag_ok', 'limit', 'limit_ok', 'gap', 'scalar_ok',
]
