from .config_manager import ConfigManager, IoSection, LabDefaults, ModelSection, PmfSection, RowSection, RunConfig
from .models import CommandName, DetectorKind, EtaMode, Hypothesis, SchemeKind

__all__ = [
    'ConfigManager',
    'RunConfig',
    'ModelSection',
    'PmfSection',
    'RowSection',
    'IoSection',
    'LabDefaults',
    'SchemeKind',
    'EtaMode',
    'DetectorKind',
    'Hypothesis',
    'CommandName',
]
