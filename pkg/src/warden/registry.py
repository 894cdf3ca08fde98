"""
Detector registry: builds detectors by name for the experiment runners and the CLI.
"""
from typing import Callable, Dict, List, Optional

from ..config.models import DetectorKind
from ..dist.analytics import modified_pmf
from ..exceptions import DetectionError
from ..utils.interfaces import LoggerInterface
from ..utils.logger import LoggerFactory
from .detectors import (
    ConstantDetector,
    DependentLikelihoodRatioDetector,
    LikelihoodRatioDetector,
    MeanThresholdDetector,
    RandomGuessDetector,
)
from .interfaces import Detector
from .models import DetectorContext, DetectorDefinition


def _mean(context: DetectorContext) -> Detector:
    if context.pmf is None:
        raise DetectionError("the mean test needs an i.i.d. pmf", detector=DetectorKind.MEAN.value)
    return MeanThresholdDetector.for_pmf(context.pmf, context.alpha)


def _lrt(context: DetectorContext) -> Detector:
    if context.pmf is None:
        raise DetectionError("the likelihood-ratio test needs an i.i.d. pmf", detector=DetectorKind.LRT.value)
    alternative = context.alternative or modified_pmf(context.pmf, context.p)
    return LikelihoodRatioDetector(context.pmf, alternative)


def _dependent_lrt(context: DetectorContext) -> Detector:
    if context.model is None:
        raise DetectionError("the conditional test needs a dependent model",
                             detector=DetectorKind.DEPENDENT_LRT.value)
    return DependentLikelihoodRatioDetector(context.model, context.p)


class DetectorRegistry:
    """
    Registry of detector factories.
    """

    def __init__(self, logger: Optional[LoggerInterface] = None):
        """
        Initialize the detector registry.

        Args:
            logger: Logger instance
        """
        self._logger = logger or LoggerFactory.create("warden.registry")
        self._detectors: Dict[str, DetectorDefinition] = {}

        self._register_builtin_detectors()

    def _register_builtin_detectors(self) -> None:
        """Register the mean test, the likelihood-ratio tests and the two baselines."""
        self.register_detector(DetectorKind.MEAN.value, _mean,
                               "Average packet size against mu + sqrt(sigma^2 / (alpha n))")
        self.register_detector(DetectorKind.LRT.value, _lrt,
                               "Log-likelihood ratio of f~ against f, threshold 0")
        self.register_detector(DetectorKind.DEPENDENT_LRT.value, _dependent_lrt,
                               "Conditional log-likelihood ratio for a dependent source")
        self.register_detector(DetectorKind.CONSTANT.value, lambda context: ConstantDetector(),
                               "Always decides H0")
        self.register_detector(DetectorKind.RANDOM.value, lambda context: RandomGuessDetector(context.seed),
                               "Fair coin flip")

    def register_detector(self,
                          name: str,
                          factory: Callable[[DetectorContext], Detector],
                          description: str) -> None:
        """
        Register a detector factory.

        Args:
            name: Unique detector name
            factory: Builds the detector from a DetectorContext
            description: What the detector tests

        Raises:
            DetectionError: If the name is already registered
        """
        if name in self._detectors:
            raise DetectionError(f"Detector '{name}' already registered", detector=name)
        self._detectors[name] = DetectorDefinition(name=name, description=description, factory=factory)
        self._logger.debug(f"Detector registered: {name}")

    def has_detector(self, name: str) -> bool:
        return name in self._detectors

    def get_detector_description(self, name: str) -> Optional[str]:
        definition = self._detectors.get(name)
        return definition.description if definition else None

    def get_detector_names(self) -> List[str]:
        return list(self._detectors)

    def get_all_detector_definitions(self) -> Dict[str, DetectorDefinition]:
        return self._detectors.copy()

    def create(self, name: str, context: DetectorContext) -> Detector:
        """
        Build a detector.

        Raises:
            DetectionError: If the name is unknown or the factory rejects the context
        """
        definition = self._detectors.get(name)
        if definition is None:
            raise DetectionError(f"Unknown detector '{name}'", detector=name,
                                 known=sorted(self._detectors))
        try:
            detector = definition.factory(context)
        except DetectionError:
            raise
        except Exception as e:
            self._logger.error(f"Detector construction failed: {e}")
            raise DetectionError(f"Failed to build detector {name}: {e}", detector=name, original_error=e) from e
        self._logger.debug(f"Built detector {name}: {detector.get_description()}")
        return detector
