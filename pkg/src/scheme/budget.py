"""
Selection-probability budgets.
"""
import math
from typing import Union

from ..config.models import EtaMode
from ..dist.analytics import scale_constant
from ..dist.dependent import DependentSizeModel, eta_constant
from ..dist.models import CovertnessBudget, SizePmf
from ..exceptions import DistributionError, SchemeError


def derive_budget(
    model: Union[SizePmf, DependentSizeModel],
    n: int,
    epsilon: float,
    mode: EtaMode = EtaMode.CONSERVATIVE,
) -> CovertnessBudget:
    """
    p = eps / (xi sqrt(n)) for an i.i.d. pmf, p' = eps / (eta sqrt(n)) for a dependent model.

    Raises:
        SchemeError: If eps is outside (0, 1/2), n < 1, the model is degenerate, or p >= 1
    """
    if not 0.0 < epsilon < 0.5:
        raise SchemeError(f"epsilon must lie in (0, 1/2), got {epsilon}", scheme="budget", epsilon=epsilon)
    if n < 1:
        raise SchemeError(f"stream length must be at least 1, got {n}", scheme="budget", n=n)
    try:
        if isinstance(model, DependentSizeModel):
            scale = eta_constant(model, n, mode)[1]
        else:
            scale = scale_constant(model)
    except DistributionError as e:
        raise SchemeError(f"cannot derive a budget: {e.message}", scheme="budget", original_error=e) from e
    p = epsilon / (scale * math.sqrt(n))
    if p >= 1.0:
        raise SchemeError(
            f"selection probability {p:.6g} is not below 1 at n={n}", scheme="budget", p=p, n=n
        )
    return CovertnessBudget(epsilon=epsilon, n=n, p=p, scale_constant=scale)
