"""
Interfaces for Willie's detectors and trial sources.
"""
from typing import Protocol

import numpy as np
from typing_extensions import runtime_checkable

from .models import DetectorVerdict


@runtime_checkable
class Detector(Protocol):
    """A binary hypothesis test on an observed size sequence."""

    @property
    def name(self) -> str:
        """Registry name of the detector."""
        ...

    def decide(self, sizes: np.ndarray) -> DetectorVerdict:
        """
        Decide between H0 (no insertion) and H1 (insertion).

        Args:
            sizes: Observed packet sizes in bits; payloads and flags are never observed

        Returns:
            Verdict with the test statistic and threshold
        """
        ...

    def get_description(self) -> str:
        """Short human-readable description."""
        ...


@runtime_checkable
class TrialSource(Protocol):
    """Deterministic producer of the size sequence of one Monte Carlo trial."""

    def __call__(self, seed: int, trial: int) -> np.ndarray:
        """
        Args:
            seed: Master seed
            trial: Trial counter

        Returns:
            Observed sizes of this trial
        """
        ...
