"""
Covert bit insertion laboratory.

Re-exports key components for easier access.
Example:
    from src import make_pmf, generate_iid, generate_key, alice_insert, bob_extract
"""

# Distributions and analytics
from .dist import (
    DependentSizeModel,
    PacketSizePmf,
    SizePmf,
    covertness_lower_bound,
    kl_divergence,
    make_dependent_model,
    make_pmf,
    modified_pmf,
    xi_constant,
)

# Traffic
from .traffic import PacketStream, generate_dependent, generate_iid, read_stream, write_stream

# Covert endpoints
from .scheme import CovertKey, alice_insert, bob_extract, derive_budget, generate_key

# Warden
from .warden import DetectorRegistry, estimate_errors

# Experiments
from .lab import ExperimentRunner, ExperimentSpec

# Configuration
from .config import ConfigManager, RunConfig

# Utilities
from .utils import LoggerFactory, LoggerInterface

# Exceptions
from .exceptions import (
    BoundViolationError,
    CovertLabError,
    DistributionError,
    LabConfigError,
    SchemeError,
    StreamError,
)

__all__ = [
    # Distributions
    "SizePmf",
    "PacketSizePmf",
    "DependentSizeModel",
    "make_pmf",
    "make_dependent_model",
    "modified_pmf",
    "kl_divergence",
    "xi_constant",
    "covertness_lower_bound",

    # Traffic
    "PacketStream",
    "generate_iid",
    "generate_dependent",
    "read_stream",
    "write_stream",

    # Scheme
    "CovertKey",
    "derive_budget",
    "generate_key",
    "alice_insert",
    "bob_extract",

    # Warden
    "DetectorRegistry",
    "estimate_errors",

    # Lab
    "ExperimentSpec",
    "ExperimentRunner",

    # Config
    "ConfigManager",
    "RunConfig",

    # Utils
    "LoggerFactory",
    "LoggerInterface",

    # Exceptions
    "CovertLabError",
    "LabConfigError",
    "DistributionError",
    "StreamError",
    "SchemeError",
    "BoundViolationError",
]
