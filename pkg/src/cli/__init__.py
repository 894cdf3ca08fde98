"""
Command-line front end.
"""
from .main import EXIT_BOUND, EXIT_ERROR, EXIT_OK, EXIT_USAGE, CommandRunner, build_parser, main

__all__ = [
    'CommandRunner',
    'build_parser',
    'main',
    'EXIT_OK',
    'EXIT_ERROR',
    'EXIT_USAGE',
    'EXIT_BOUND',
]
