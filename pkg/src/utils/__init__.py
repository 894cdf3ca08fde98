"""
Utility module containing shared functionality.
"""
from .interfaces import LoggerInterface
from .logger import LoggerFactory, Logger, NullLogger, LoggingLevel, LogFormat
from .seeding import BLOCK_SIZE, StreamTag, generator, random_bits, uniforms

__all__ = [
    'LoggerInterface',
    'LoggerFactory',
    'Logger',
    'NullLogger',
    'LoggingLevel',
    'LogFormat',
    'BLOCK_SIZE',
    'StreamTag',
    'generator',
    'uniforms',
    'random_bits',
]
