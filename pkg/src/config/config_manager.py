"""
Configuration management module for covlab runs.
Loads the packaged defaults, overlays a run file and validates the result.
"""
import json
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import TYPE_CHECKING, Any, Dict, List, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..exceptions import CovertLabError, LabConfigError
from ..utils.interfaces import LoggerInterface
from ..utils.logger import LoggerFactory
from .models import DetectorKind, EtaMode, SchemeKind

if TYPE_CHECKING:
    from ..dist.dependent import DependentSizeModel
    from ..dist.models import PacketSizePmf

DEFAULTS_PATH = Path(__file__).with_name("config.yml")


class PmfSection(BaseModel):
    """A (support, probs) pair as written in a run file."""
    model_config = ConfigDict(extra='forbid')

    support: List[int] = Field(..., description="Packet sizes in units of unit_bits")
    probs: List[float] = Field(..., description="Probabilities aligned with support")


class RowSection(PmfSection):
    """One conditional row of a dependent model."""
    history: List[int] = Field(..., description="Most recent sizes, oldest first, in units of unit_bits")


class ModelSection(BaseModel):
    """
    Source model: an i.i.d. pmf (support, probs) or a dependent model (order, initial, rows).
    """
    model_config = ConfigDict(extra='forbid')

    support: Optional[List[int]] = None
    probs: Optional[List[float]] = None
    order: Optional[int] = Field(None, ge=0)
    initial: Optional[PmfSection] = None
    rows: List[RowSection] = Field(default_factory=list)
    unit_bits: int = Field(1, ge=1, description="Bits per size unit")

    @model_validator(mode='after')
    def _one_kind(self) -> 'ModelSection':
        iid = self.support is not None or self.probs is not None
        dependent = self.order is not None or self.initial is not None or bool(self.rows)
        if iid and dependent:
            raise ValueError("model mixes i.i.d. fields (support, probs) with dependent fields (order, initial, rows)")
        if iid and (self.support is None or self.probs is None):
            raise ValueError("an i.i.d. model needs both support and probs")
        if dependent and (self.order is None or self.initial is None):
            raise ValueError("a dependent model needs order and initial")
        if not iid and not dependent:
            raise ValueError("model needs support and probs, or order and initial")
        return self

    @property
    def is_dependent(self) -> bool:
        return self.order is not None

    def _scale(self, sizes: List[int]) -> List[int]:
        return [int(s) * self.unit_bits for s in sizes]

    def build(self) -> Union['PacketSizePmf', 'DependentSizeModel']:
        """
        Domain model of this section.

        Raises:
            DistributionError: If the pmf or a transition row is invalid
        """
        # dist imports config.models, so it is loaded on first use.
        from ..dist.dependent import make_dependent_model
        from ..dist.pmf import make_pmf

        if not self.is_dependent:
            return make_pmf(self._scale(self.support), self.probs)
        rows = {
            tuple(self._scale(row.history)): (self._scale(row.support), row.probs)
            for row in self.rows
        }
        return make_dependent_model(
            self.order, (self._scale(self.initial.support), self.initial.probs), rows
        )


class IoSection(BaseModel):
    """File paths used by the commands."""
    model_config = ConfigDict(extra='forbid')

    stream: str = "stream.cvl"
    key: str = "key.cvk"
    message: str = "message.bin"
    inserted: str = "inserted.cvl"
    output: str = "results.csv"
    restored: str = "restored.cvl"
    extracted: str = "extracted.bin"
    summary: str = "summary.json"


class LabDefaults(BaseModel):
    """Run parameters shared by every command; the packaged config.yml fills them in."""
    model_config = ConfigDict(extra='forbid')

    seed: int = Field(0, ge=0)
    scheme: SchemeKind = SchemeKind.UNIT
    epsilon: float = Field(0.1, ge=0.0, lt=0.5)
    n: int = Field(10000, ge=1)
    trials: int = Field(1000, ge=1)
    alpha: float = Field(0.05, gt=0.0, lt=1.0)
    eta_mode: EtaMode = EtaMode.CONSERVATIVE
    epsilons: List[float] = Field(default_factory=lambda: [0.1])
    sizes: List[int] = Field(default_factory=lambda: [10000])
    gammas: List[float] = Field(default_factory=lambda: [0.5])
    detectors: List[DetectorKind] = Field(default_factory=lambda: [DetectorKind.MEAN, DetectorKind.LRT])
    workers: int = Field(1, ge=1)
    log_level: str = Field("INFO", description="Level used when real loggers are enabled")
    log_format: str = Field("simple", description="simple or verbose (with timestamps)")
    csv_float_format: str = Field("%.10g", description="printf-style format of CSV floats")

    @field_validator('log_level')
    @classmethod
    def _upper(cls, value: str) -> str:
        value = value.upper()
        if value not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown log level {value}")
        return value

    @field_validator('log_format')
    @classmethod
    def _known_format(cls, value: str) -> str:
        value = value.lower()
        if value not in ("simple", "verbose"):
            raise ValueError(f"unknown log format {value}")
        return value


class RunConfig(LabDefaults):
    """Validated configuration of one covlab run."""
    model: Optional[ModelSection] = Field(None, description="Source model")
    io: IoSection = Field(default_factory=IoSection)

    def require_model(self) -> ModelSection:
        """The model section, raising if the run file has none."""
        if self.model is None:
            raise LabConfigError("the run file has no [model] section", context={'field': 'model'})
        return self.model


def _read_document(path: Path) -> Dict[str, Any]:
    suffix = path.suffix.lower()
    if suffix == '.toml':
        with open(path, 'rb') as f:
            return tomllib.load(f)
    with open(path, 'r', encoding='utf-8') as f:
        if suffix == '.json':
            return json.load(f)
        if suffix in ('.yml', '.yaml'):
            return yaml.safe_load(f) or {}
    raise LabConfigError(f"Unsupported config file format: {path.suffix}", context={'path': str(path)})


def _merge(base: Dict[str, Any], overlay: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in overlay.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict) and key != 'model':
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def _first_field(error: ValidationError) -> Optional[str]:
    errors = error.errors()
    if not errors:
        return None
    return ".".join(str(part) for part in errors[0].get('loc', ())) or None


class ConfigManager:
    """
    Configuration manager for one run.
    Handles loading, validation, and access to configuration settings.
    """

    def __init__(self,
                 config_path: Optional[Union[str, Path]] = None,
                 seed: Optional[int] = None,
                 logger: Optional[LoggerInterface] = None):
        """
        Initialize the configuration manager.

        Args:
            config_path: Run file (TOML, YAML or JSON); defaults only if omitted
            seed: Seed override (the --seed flag)
            logger: Logger instance
        """
        self._logger = logger or LoggerFactory.create("config.config_manager")
        self._config_path = Path(config_path) if config_path else None
        self._seed = seed
        self._config: Optional[RunConfig] = None
        self._load_config()

    def _load_config(self) -> None:
        """Load defaults, overlay the run file and validate."""
        try:
            config_data = _read_document(DEFAULTS_PATH)
        except (OSError, yaml.YAMLError) as e:
            raise LabConfigError(f"Cannot read packaged defaults: {e}", original_error=e) from e

        if self._config_path:
            path = self._config_path
            self._logger.info(f"Loading config from: {path}")
            if not path.exists():
                raise LabConfigError(f"Config file not found at: {path}", context={'path': str(path)})
            try:
                overlay = _read_document(path)
            except LabConfigError:
                raise
            except (OSError, ValueError, yaml.YAMLError) as e:
                raise LabConfigError(f"Cannot parse {path}: {e}", original_error=e,
                                     context={'path': str(path)}) from e
            if not isinstance(overlay, dict):
                raise LabConfigError(f"{path} must hold a table of settings", context={'path': str(path)})
            self._logger.info(f"Loaded config data with keys: {list(overlay.keys())}")
            config_data = _merge(config_data, overlay)

        if self._seed is not None:
            config_data['seed'] = self._seed

        try:
            self._config = RunConfig(**config_data)
            self._logger.info("Configuration validated successfully")
        except ValidationError as e:
            field = _first_field(e)
            self._logger.error(f"Configuration validation failed: {str(e)}")
            raise LabConfigError(f"Invalid configuration ({field}): {str(e)}", original_error=e,
                                 context={'field': field}) from e

    def reload(self) -> None:
        """Reload configuration from sources."""
        self._load_config()

    @property
    def config(self) -> RunConfig:
        return self._config

    @property
    def seed(self) -> int:
        return self._config.seed

    @property
    def log_level(self) -> str:
        """Get the configured log level."""
        return self._config.log_level

    def build_model(self) -> Union['PacketSizePmf', 'DependentSizeModel']:
        """
        Domain model of the [model] section.

        Raises:
            LabConfigError: If the section is missing or invalid (the field is named in the context)
        """
        section = self._config.require_model()
        try:
            return section.build()
        except CovertLabError as e:
            field = e.context.get('field')
            raise LabConfigError(f"Invalid model ({'model.' + field if field else 'model'}): {e.message}",
                                 original_error=e, context={'field': f"model.{field}" if field else "model"}) from e
