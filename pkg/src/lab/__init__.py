"""
Experiment drivers and CSV reports.
"""
from .models import (
    COVERTNESS_COLUMNS,
    DEPENDENT_COLUMNS,
    DETECTION_COLUMNS,
    FLAG_COLUMNS,
    SQRT_LAW_COLUMNS,
    THROUGHPUT_COLUMNS,
    ExperimentSpec,
)
from .simulation import DependentSource, IidSource, simulate_dependent_throughput, simulate_iid_throughput
from .experiments import (
    ExperimentRunner,
    covertness_sweep,
    dependent_experiment,
    flag_covertness_report,
    sqrt_law_sweep,
    throughput_experiment,
)
from .report import assert_bounds, bound_violations, format_table, write_table

__all__ = [
    'ExperimentSpec',
    'DETECTION_COLUMNS',
    'COVERTNESS_COLUMNS',
    'SQRT_LAW_COLUMNS',
    'THROUGHPUT_COLUMNS',
    'DEPENDENT_COLUMNS',
    'FLAG_COLUMNS',
    'IidSource',
    'DependentSource',
    'simulate_iid_throughput',
    'simulate_dependent_throughput',
    'ExperimentRunner',
    'covertness_sweep',
    'sqrt_law_sweep',
    'throughput_experiment',
    'dependent_experiment',
    'flag_covertness_report',
    'write_table',
    'format_table',
    'bound_violations',
    'assert_bounds',
]
