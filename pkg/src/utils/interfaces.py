"""
Logging protocol shared by every laboratory component.
"""
from typing import Protocol
from typing_extensions import runtime_checkable


@runtime_checkable
class LoggerInterface(Protocol):
    """Anything the generators, endpoints, detectors and experiment runners can log to."""

    def debug(self, message: str) -> None:
        """Per-trial or per-packet detail."""
        ...

    def info(self, message: str) -> None:
        """Progress of a generation, insertion, extraction or sweep."""
        ...

    def warning(self, message: str) -> None:
        """Recoverable anomaly, e.g. an infinite divergence or an infeasible sweep point."""
        ...

    def error(self, message: str) -> None:
        """Failure that aborts the current operation."""
        ...

    def critical(self, message: str) -> None:
        """Violated analytic bound."""
        ...
