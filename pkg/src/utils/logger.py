"""
Logging for the covert insertion laboratory.

Components ask LoggerFactory for a logger by dotted name ("scheme.alice", "lab.report").
Until the CLI enables real logging every name maps to a silent NullLogger, so library
calls and tests stay quiet.
"""
import logging
import sys
from enum import Enum
from typing import Dict, Optional, TextIO

from .interfaces import LoggerInterface


class LoggingLevel(Enum):
    INFO = logging.INFO
    DEBUG = logging.DEBUG
    WARNING = logging.WARNING
    ERROR = logging.ERROR
    CRITICAL = logging.CRITICAL

    @classmethod
    def from_name(cls, name: str) -> 'LoggingLevel':
        """Resolve a level from its config name, falling back to INFO."""
        try:
            return cls[name.upper()]
        except KeyError:
            return cls.INFO


class LogFormat(Enum):
    SIMPLE = '%(levelname)s - %(name)s - %(message)s'
    VERBOSE = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

    @classmethod
    def from_name(cls, name: str) -> 'LogFormat':
        """Resolve a format from its config name, falling back to SIMPLE."""
        try:
            return cls[name.upper()]
        except KeyError:
            return cls.SIMPLE


class LoggerFactory:
    """
    Factory class to create and manage logger instances.
    """
    _instances: Dict[str, 'Logger'] = {}
    _null_loggers: Dict[str, 'NullLogger'] = {}
    _use_null_logger_by_default = True
    _default_level = LoggingLevel.INFO
    _default_format = LogFormat.SIMPLE
    _stream: Optional[TextIO] = None

    @classmethod
    def create(cls, name: Optional[str] = None, level: Optional[LoggingLevel] = None,
               format: Optional[LogFormat] = None, use_real_logger: bool = False) -> LoggerInterface:
        """
        Create or fetch the logger for a component.

        Args:
            name: Dotted component name (optional)
            level: Logging level (defaults to the factory level)
            format: Log format (defaults to the factory format)
            use_real_logger: Create a real logger even while real loggers are disabled

        Returns:
            Logger instance or NullLogger if real loggers are disabled
        """
        name = name or "covlab"

        if not use_real_logger and cls._use_null_logger_by_default:
            if name not in cls._null_loggers:
                cls._null_loggers[name] = NullLogger()
            return cls._null_loggers[name]

        if name not in cls._instances:
            cls._instances[name] = Logger(name, level or cls._default_level,
                                          format or cls._default_format, stream=cls._stream)
        return cls._instances[name]

    @classmethod
    def reset(cls) -> None:
        """Forget every logger and restore the factory defaults (useful for testing)."""
        cls._instances.clear()
        cls._null_loggers.clear()
        cls._use_null_logger_by_default = True
        cls._default_level = LoggingLevel.INFO
        cls._default_format = LogFormat.SIMPLE
        cls._stream = None

    @classmethod
    def enable_real_loggers(cls, level: Optional[LoggingLevel] = None, format: Optional[LogFormat] = None,
                            stream: Optional[TextIO] = None) -> None:
        """
        Switch components created from now on to real loggers.

        Args:
            level: Default level of new loggers
            format: Default format of new loggers
            stream: Where new loggers write (stderr if omitted)
        """
        cls._use_null_logger_by_default = False
        if level is not None:
            cls._default_level = level
        if format is not None:
            cls._default_format = format
        cls._stream = stream

    @classmethod
    def disable_real_loggers(cls) -> None:
        """Disable real logging (default behavior)."""
        cls._use_null_logger_by_default = True


class NullLogger(LoggerInterface):
    """Logger that silently discards all messages."""

    def info(self, message: str) -> None:
        pass

    def debug(self, message: str) -> None:
        pass

    def warning(self, message: str) -> None:
        pass

    def error(self, message: str) -> None:
        pass

    def critical(self, message: str) -> None:
        pass


class Logger(LoggerInterface):
    """
    Wraps a stdlib logger with a single stream handler.
    """
    def __init__(
        self,
        name: str,
        level: LoggingLevel = LoggingLevel.INFO,
        format: LogFormat = LogFormat.SIMPLE,
        stream: Optional[TextIO] = None
    ):
        """
        Initialize the logger.

        Args:
            name: Logger name
            level: Logging level
            format: Log format
            stream: Output stream (stderr if omitted)
        """
        self.name = name
        self.level = level
        self.format = format

        self._logger = logging.getLogger(f"covlab.{name}")
        self._logger.setLevel(level.value)
        self._logger.propagate = False
        self._logger.handlers.clear()

        handler = logging.StreamHandler(stream or sys.stderr)
        handler.setLevel(level.value)
        handler.setFormatter(logging.Formatter(format.value))
        self._logger.addHandler(handler)

    def info(self, message: str) -> None:
        self._logger.info(message)

    def debug(self, message: str) -> None:
        self._logger.debug(message)

    def warning(self, message: str) -> None:
        self._logger.warning(message)

    def error(self, message: str) -> None:
        self._logger.error(message)

    def critical(self, message: str) -> None:
        self._logger.critical(message)
