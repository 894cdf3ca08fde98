"""
Monte Carlo estimation of false-alarm, missed-detection and average error probabilities.

Trial t draws one H0 and one H1 size sequence from the sources with (seed, t), so a
report is a function of (detectors, sources, trials, seed) whatever the worker count.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np
from scipy import stats
from tqdm import tqdm

from ..config.models import Hypothesis
from ..exceptions import CovertLabError, EstimationError
from ..utils.interfaces import LoggerInterface
from ..utils.logger import LoggerFactory
from .interfaces import Detector, TrialSource
from .models import DetectionReport

MIN_TRIALS = 100

# Trials handed to a worker at a time.
TRIAL_BATCH = 64


def ci_halfwidth(p_fa: float, p_md: float, trials: int, confidence: float = 0.95) -> float:
    """Normal-approximation half-width of p_e = (p_fa + p_md) / 2."""
    z = float(stats.norm.ppf(0.5 + confidence / 2.0))
    return z * math.sqrt((p_fa * (1.0 - p_fa) + p_md * (1.0 - p_md)) / trials) / 2.0


def _report(name: str, false_alarms: int, misses: int, trials: int) -> DetectionReport:
    p_fa = false_alarms / trials
    p_md = misses / trials
    return DetectionReport(
        detector=name,
        trials=trials,
        p_fa=p_fa,
        p_md=p_md,
        p_e=(p_fa + p_md) / 2.0,
        ci_halfwidth=ci_halfwidth(p_fa, p_md, trials),
    )


def estimate_errors_many(
    detectors: Mapping[str, Detector],
    h0_source: TrialSource,
    h1_source: TrialSource,
    trials: int,
    seed: int,
    workers: int = 1,
    progress: bool = False,
    logger: Optional[LoggerInterface] = None,
) -> Dict[str, DetectionReport]:
    """
    Run several detectors on identical trial streams.

    Args:
        detectors: Detectors by report name
        h0_source: Size sequences without insertion
        h1_source: Size sequences with insertion
        trials: Number of H0 and of H1 streams, at least 100
        seed: Master seed
        workers: Worker threads
        progress: Show a progress bar

    Returns:
        One DetectionReport per detector

    Raises:
        EstimationError: If trials < 100 or a source or detector fails
    """
    logger = logger or LoggerFactory.create("warden.estimator")
    if trials < MIN_TRIALS:
        raise EstimationError(f"at least {MIN_TRIALS} trials are required, got {trials}",
                              context={'trials': trials})
    if not detectors:
        raise EstimationError("no detectors to evaluate")
    names = list(detectors)

    def run_batch(start: int) -> Tuple[np.ndarray, np.ndarray]:
        stop = min(trials, start + TRIAL_BATCH)
        false_alarms = np.zeros(len(names), dtype=np.int64)
        misses = np.zeros(len(names), dtype=np.int64)
        for trial in range(start, stop):
            h0 = h0_source(seed, trial)
            h1 = h1_source(seed, trial)
            for k, name in enumerate(names):
                detector = detectors[name]
                if detector.decide(h0).decision is Hypothesis.H1:
                    false_alarms[k] += 1
                if detector.decide(h1).decision is Hypothesis.H0:
                    misses[k] += 1
        return false_alarms, misses

    starts = list(range(0, trials, TRIAL_BATCH))
    totals_fa = np.zeros(len(names), dtype=np.int64)
    totals_md = np.zeros(len(names), dtype=np.int64)
    logger.info(f"Estimating errors of {names} over {trials} trials with {workers} worker(s)")
    try:
        with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
            results: List[Tuple[np.ndarray, np.ndarray]] = list(
                tqdm(pool.map(run_batch, starts), total=len(starts), disable=not progress,
                     desc="trials", unit="batch")
            )
    except CovertLabError as e:
        raise EstimationError(f"trial failed: {e.message}", original_error=e) from e
    for false_alarms, misses in results:
        totals_fa += false_alarms
        totals_md += misses

    reports = {
        name: _report(name, int(totals_fa[k]), int(totals_md[k]), trials)
        for k, name in enumerate(names)
    }
    for report in reports.values():
        logger.info(f"{report.detector}: P_FA={report.p_fa:.4f} P_MD={report.p_md:.4f} "
                    f"P_e={report.p_e:.4f} +/- {report.ci_halfwidth:.4f}")
    return reports


def estimate_errors(
    detector: Detector,
    h0_source: TrialSource,
    h1_source: TrialSource,
    trials: int,
    seed: int,
    workers: int = 1,
    progress: bool = False,
    logger: Optional[LoggerInterface] = None,
) -> DetectionReport:
    """Monte Carlo P_FA, P_MD and P_e of one detector."""
    reports = estimate_errors_many({detector.name: detector}, h0_source, h1_source, trials, seed,
                                   workers=workers, progress=progress, logger=logger)
    return reports[detector.name]
