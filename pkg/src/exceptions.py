"""
Custom exceptions for the covert insertion laboratory.
Provides a standardized error handling hierarchy with rich context.
"""
from typing import Optional, Any, Dict
from datetime import datetime, timezone


class CovertLabError(Exception):
    """Base exception for all laboratory errors."""

    def __init__(
        self,
        message: str,
        original_error: Optional[Exception] = None,
        context: Optional[Dict[str, Any]] = None,
        timestamp: Optional[datetime] = None
    ):
        """
        Initialize the laboratory error.

        Args:
            message: Error message
            original_error: Original exception that caused this error
            context: Additional context data for debugging (offending field, values)
            timestamp: When the error occurred (defaults to now)
        """
        self.message = message
        self.original_error = original_error
        self.context = context or {}
        self.timestamp = timestamp or datetime.now(timezone.utc)
        super().__init__(message)

    def to_dict(self) -> Dict[str, Any]:
        """Convert error to dictionary format for logging/debugging."""
        return {
            'error_type': self.__class__.__name__,
            'message': self.message,
            'context': self.context,
            'timestamp': self.timestamp.isoformat(),
            'original_error': str(self.original_error) if self.original_error else None
        }


class LabConfigError(CovertLabError):
    """Raised when a configuration file cannot be loaded or validated."""
    pass


class DistributionError(CovertLabError):
    """Raised when a pmf or dependent model is invalid, or an analytic precondition fails."""
    def __init__(
        self,
        message: str,
        field: Optional[str] = None,
        original_error: Optional[Exception] = None,
        **kwargs
    ):
        context = {
            'field': field,
            **kwargs
        }
        super().__init__(message, original_error=original_error, context=context)


class StreamError(CovertLabError):
    """Base class for packet stream errors."""
    pass


class StreamFormatError(StreamError):
    """Raised when a CVL1 stream or CVK1 key file is malformed."""
    def __init__(
        self,
        message: str,
        path: Optional[str] = None,
        offset: Optional[int] = None,
        original_error: Optional[Exception] = None,
        **kwargs
    ):
        context = {
            'path': path,
            'offset': offset,
            **kwargs
        }
        super().__init__(message, original_error=original_error, context=context)


class SchemeError(CovertLabError):
    """Base class for insertion scheme errors."""
    def __init__(
        self,
        message: str,
        scheme: Optional[str] = None,
        original_error: Optional[Exception] = None,
        **kwargs
    ):
        context = {
            'scheme': scheme,
            **kwargs
        }
        super().__init__(message, original_error=original_error, context=context)


class KeyMismatchError(SchemeError):
    """Raised when a key does not match the stream it is applied to."""
    pass


class ExtractionError(SchemeError):
    """Raised when Bob finds a flagged packet that cannot carry inserted bits."""
    pass


class DetectionError(CovertLabError):
    """Raised when a detector receives input it cannot score."""
    def __init__(
        self,
        message: str,
        detector: Optional[str] = None,
        original_error: Optional[Exception] = None,
        **kwargs
    ):
        context = {
            'detector': detector,
            **kwargs
        }
        super().__init__(message, original_error=original_error, context=context)


class EstimationError(CovertLabError):
    """Raised when Monte Carlo error estimation cannot run."""
    pass


class ExperimentError(CovertLabError):
    """Raised when an experiment is configured with infeasible parameters."""
    def __init__(
        self,
        message: str,
        experiment: Optional[str] = None,
        original_error: Optional[Exception] = None,
        **kwargs
    ):
        context = {
            'experiment': experiment,
            **kwargs
        }
        super().__init__(message, original_error=original_error, context=context)


class BoundViolationError(CovertLabError):
    """Raised when an analytic inequality that must hold is violated at runtime."""
    def __init__(
        self,
        message: str,
        bound: Optional[str] = None,
        value: Optional[float] = None,
        limit: Optional[float] = None,
        **kwargs
    ):
        context = {
            'bound': bound,
            'value': value,
            'limit': limit,
            **kwargs
        }
        super().__init__(message, context=context)
