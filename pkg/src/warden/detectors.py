"""
Willie's detectors. Every detector sees packet sizes only.
"""
import math
import zlib
from typing import Union

import numpy as np

from ..config.models import DetectorKind, Hypothesis
from ..dist.analytics import modified_pmf
from ..dist.dependent import DependentSizeModel
from ..dist.models import SizePmf
from ..exceptions import DetectionError, DistributionError
from ..traffic.models import PacketStream
from ..utils.seeding import StreamTag, generator
from .models import DetectorVerdict

SizesLike = Union[PacketStream, np.ndarray]


def _sizes(observed: SizesLike) -> np.ndarray:
    if isinstance(observed, PacketStream):
        return observed.sizes
    sizes = np.asarray(observed, dtype=np.int64).reshape(-1)
    if sizes.size == 0:
        raise DetectionError("no packet sizes to test")
    return sizes


def chebyshev_false_alarm_bound(variance: float, n: int, t: float) -> float:
    """P(U - mu > t | H0) <= sigma^2 / (n t^2)."""
    if t <= 0.0:
        raise DetectionError(f"threshold offset must be positive, got {t}", detector=DetectorKind.MEAN.value)
    return variance / (n * t * t)


class MeanThresholdDetector:
    """
    Average-size test: H1 iff U = total_size / n exceeds mu + sqrt(sigma^2 / (alpha n)).

    Chebyshev's inequality keeps the false-alarm probability at or below alpha.
    """

    def __init__(self, mu: float, variance: float, alpha: float):
        if not (variance > 0.0 and math.isfinite(variance)):
            raise DetectionError(f"variance must be finite and positive, got {variance}", detector="mean")
        if not 0.0 < alpha < 1.0:
            raise DetectionError(f"alpha must lie in (0, 1), got {alpha}", detector="mean")
        self.mu = mu
        self.variance = variance
        self.alpha = alpha

    @classmethod
    def for_pmf(cls, pmf: SizePmf, alpha: float) -> 'MeanThresholdDetector':
        return cls(pmf.mean, pmf.variance, alpha)

    @property
    def name(self) -> str:
        return DetectorKind.MEAN.value

    def get_description(self) -> str:
        return f"mean-size threshold test (mu={self.mu:.6g}, sigma^2={self.variance:.6g}, alpha={self.alpha})"

    def threshold(self, n: int) -> float:
        return self.mu + math.sqrt(self.variance / (self.alpha * n))

    def decide(self, sizes: SizesLike) -> DetectorVerdict:
        sizes = _sizes(sizes)
        n = sizes.size
        return DetectorVerdict.from_statistic(int(sizes.sum()) / n, self.threshold(n))


class LikelihoodRatioDetector:
    """Log-likelihood ratio test of f~ against f with threshold 0; ties decide H0."""

    def __init__(self, null: SizePmf, alternative: SizePmf):
        outside = [x for x in alternative.support if null.index_of(x) is None]
        if outside:
            raise DetectionError(f"alternative puts mass on sizes {outside} outside the null support",
                                 detector=DetectorKind.LRT.value)
        self.null = null
        self.alternative = alternative
        alt = np.asarray([alternative.prob(x) for x in null.support])
        with np.errstate(divide='ignore'):
            self._llr = np.log(alt) - np.log(null.prob_array)

    @property
    def name(self) -> str:
        return DetectorKind.LRT.value

    def get_description(self) -> str:
        return f"likelihood-ratio test over {self.null.k} sizes"

    def decide(self, sizes: SizesLike) -> DetectorVerdict:
        sizes = _sizes(sizes)
        support = self.null.support_array
        idx = np.searchsorted(support, sizes)
        np.minimum(idx, self.null.k - 1, out=idx)
        if np.any(support[idx] != sizes):
            size = int(sizes[support[idx] != sizes][0])
            raise DetectionError(f"size {size} is outside the support of f", detector=self.name, size=size)
        counts = np.bincount(idx, minlength=self.null.k)
        seen = counts > 0
        statistic = float(np.dot(counts[seen], self._llr[seen]))
        return DetectorVerdict.from_statistic(statistic, 0.0)


class DependentLikelihoodRatioDetector:
    """
    Conditional log-likelihood ratio test for a dependent source.

    Each packet contributes ln f~(x | h) / f(x | h) with f~ the row modified at
    selection probability p and h the observed history. A size impossible under H0
    makes the statistic +inf.
    """

    def __init__(self, model: DependentSizeModel, p: float):
        self.model = model
        self.p = p
        chain = model.chain
        self._llr = np.zeros_like(chain.probs)
        for s, row in enumerate(chain.rows):
            alt = modified_pmf(row, p)
            self._llr[s, :row.k] = np.log(alt.prob_array) - np.log(row.prob_array)

    @property
    def name(self) -> str:
        return DetectorKind.DEPENDENT_LRT.value

    def get_description(self) -> str:
        return f"conditional likelihood-ratio test for an order-{self.model.order} model at p={self.p:.6g}"

    def decide(self, sizes: SizesLike) -> DetectorVerdict:
        sizes = _sizes(sizes)
        try:
            states, cols = self.model.chain.trace(sizes)
        except DistributionError:
            return DetectorVerdict.from_statistic(math.inf, 0.0)
        statistic = float(self._llr[states, cols].sum())
        return DetectorVerdict.from_statistic(statistic, 0.0)


class ConstantDetector:
    """Always returns the same decision."""

    def __init__(self, decision: Hypothesis = Hypothesis.H0):
        self.decision = Hypothesis(decision)

    @property
    def name(self) -> str:
        return DetectorKind.CONSTANT.value

    def get_description(self) -> str:
        return f"always {self.decision.value}"

    def decide(self, sizes: SizesLike) -> DetectorVerdict:
        _sizes(sizes)
        statistic = 1.0 if self.decision is Hypothesis.H1 else 0.0
        return DetectorVerdict.from_statistic(statistic, 0.5)


class RandomGuessDetector:
    """Fair coin keyed by the seed and a CRC of the observed sizes."""

    def __init__(self, seed: int = 0):
        self.seed = seed

    @property
    def name(self) -> str:
        return DetectorKind.RANDOM.value

    def get_description(self) -> str:
        return "blind coin flip"

    def decide(self, sizes: SizesLike) -> DetectorVerdict:
        sizes = _sizes(sizes)
        digest = zlib.crc32(sizes.astype('<i8').tobytes())
        u = float(generator(self.seed, StreamTag.DETECTOR, digest).random())
        return DetectorVerdict.from_statistic(u, 0.5)


def mean_threshold_detector(stream: SizesLike, mu: float, variance: float, alpha: float) -> DetectorVerdict:
    """Mean-size test on one stream."""
    return MeanThresholdDetector(mu, variance, alpha).decide(stream)


def likelihood_ratio_detector(stream: SizesLike, f: SizePmf, f_tilde: SizePmf) -> DetectorVerdict:
    """Likelihood-ratio test of f~ against f on one stream."""
    return LikelihoodRatioDetector(f, f_tilde).decide(stream)


def dependent_likelihood_ratio_detector(stream: SizesLike, model: DependentSizeModel, p: float) -> DetectorVerdict:
    """Conditional likelihood-ratio test on one stream of a dependent source."""
    return DependentLikelihoodRatioDetector(model, p).decide(stream)
