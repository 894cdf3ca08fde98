import io
import logging
import unittest

from src.utils.interfaces import LoggerInterface
from src.utils.logger import LogFormat, Logger, LoggerFactory, LoggingLevel, NullLogger


class TestLoggerFactory(unittest.TestCase):
    """Test cases for the logger factory."""

    def setUp(self):
        LoggerFactory.reset()

    def tearDown(self):
        LoggerFactory.reset()

    def test_null_logger_by_default(self):
        logger = LoggerFactory.create("lab")
        self.assertIsInstance(logger, NullLogger)
        self.assertIsInstance(logger, LoggerInterface)
        self.assertIs(logger, LoggerFactory.create("lab"))
        logger.info("discarded")

    def test_real_logger_on_request(self):
        logger = LoggerFactory.create("lab.real", level=LoggingLevel.DEBUG, use_real_logger=True)
        self.assertIsInstance(logger, Logger)
        self.assertEqual(logging.getLogger("covlab.lab.real").level, logging.DEBUG)

    def test_enable_real_loggers(self):
        stream = io.StringIO()
        LoggerFactory.enable_real_loggers(LoggingLevel.WARNING, LogFormat.SIMPLE, stream=stream)
        logger = LoggerFactory.create("lab.enabled")
        self.assertIsInstance(logger, Logger)
        self.assertEqual(logger.level, LoggingLevel.WARNING)
        logger.info("below the level")
        logger.warning("row divergence too large")
        self.assertEqual(stream.getvalue(), "WARNING - covlab.lab.enabled - row divergence too large\n")

    def test_disable_keeps_existing_loggers(self):
        LoggerFactory.enable_real_loggers(stream=io.StringIO())
        real = LoggerFactory.create("lab.kept")
        LoggerFactory.disable_real_loggers()
        self.assertIsInstance(LoggerFactory.create("lab.new"), NullLogger)
        self.assertIsInstance(real, Logger)

    def test_reset(self):
        first = LoggerFactory.create("lab")
        LoggerFactory.enable_real_loggers(LoggingLevel.ERROR)
        LoggerFactory.reset()
        self.assertIsNot(first, LoggerFactory.create("lab"))
        self.assertIsInstance(LoggerFactory.create("lab"), NullLogger)

    def test_names(self):
        self.assertEqual(LoggingLevel.from_name("debug"), LoggingLevel.DEBUG)
        self.assertEqual(LoggingLevel.from_name("ERROR"), LoggingLevel.ERROR)
        self.assertEqual(LoggingLevel.from_name("chatty"), LoggingLevel.INFO)
        self.assertEqual(LogFormat.from_name("verbose"), LogFormat.VERBOSE)
        self.assertEqual(LogFormat.from_name("fancy"), LogFormat.SIMPLE)


if __name__ == '__main__':
    unittest.main()
