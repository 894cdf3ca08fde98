"""
Willie's detectors and Monte Carlo error estimation.
"""
from .models import DetectionReport, DetectorContext, DetectorDefinition, DetectorVerdict
from .interfaces import Detector, TrialSource
from .detectors import (
    ConstantDetector,
    DependentLikelihoodRatioDetector,
    LikelihoodRatioDetector,
    MeanThresholdDetector,
    RandomGuessDetector,
    chebyshev_false_alarm_bound,
    dependent_likelihood_ratio_detector,
    likelihood_ratio_detector,
    mean_threshold_detector,
)
from .registry import DetectorRegistry
from .estimator import MIN_TRIALS, ci_halfwidth, estimate_errors, estimate_errors_many

__all__ = [
    'DetectorVerdict',
    'DetectionReport',
    'DetectorContext',
    'DetectorDefinition',
    'Detector',
    'TrialSource',
    'MeanThresholdDetector',
    'LikelihoodRatioDetector',
    'DependentLikelihoodRatioDetector',
    'ConstantDetector',
    'RandomGuessDetector',
    'chebyshev_false_alarm_bound',
    'mean_threshold_detector',
    'likelihood_ratio_detector',
    'dependent_likelihood_ratio_detector',
    'DetectorRegistry',
    'MIN_TRIALS',
    'ci_halfwidth',
    'estimate_errors',
    'estimate_errors_many',
]
