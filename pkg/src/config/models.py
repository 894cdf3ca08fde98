"""
Enumerations shared by configuration, experiments and the command line.
"""
from enum import Enum


class SchemeKind(str, Enum):
    """Alice's insertion schemes."""
    UNIT = "unit"
    GENERAL = "general"
    DEPENDENT = "dependent"


class EtaMode(str, Enum):
    """How the dependent-model scale constant is computed."""
    LITERAL = "literal"
    CONSERVATIVE = "conservative"


class DetectorKind(str, Enum):
    """Detectors known to the registry."""
    MEAN = "mean"
    LRT = "lrt"
    DEPENDENT_LRT = "dependent_lrt"
    CONSTANT = "constant"
    RANDOM = "random"


class Hypothesis(str, Enum):
    """Willie's two hypotheses."""
    H0 = "H0"
    H1 = "H1"


class CommandName(str, Enum):
    """Commands of the covlab front end."""
    GENERATE = "generate"
    INSERT = "insert"
    EXTRACT = "extract"
    DETECT = "detect"
    SWEEP_COVERTNESS = "sweep-covertness"
    SWEEP_SQRTLAW = "sweep-sqrtlaw"
    SWEEP_THROUGHPUT = "sweep-throughput"
    SWEEP_DEPENDENT = "sweep-dependent"
    FLAG_REPORT = "flag-report"
