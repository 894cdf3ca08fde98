import json
import os
import tempfile
import textwrap
import unittest
from unittest.mock import MagicMock

from src.config.config_manager import ConfigManager, ModelSection
from src.config.models import DetectorKind, EtaMode, SchemeKind
from src.dist.dependent import DependentSizeModel
from src.dist.models import PacketSizePmf
from src.exceptions import LabConfigError
from src.utils.interfaces import LoggerInterface

DEPENDENT_TOML = """
n = 500
eta_mode = "literal"

[model]
order = 1
initial = { support = [8, 9], probs = [0.5, 0.5] }

[[model.rows]]
history = [8]
support = [8, 9]
probs = [0.5, 0.5]

[[model.rows]]
history = [9]
support = [8, 9]
probs = [0.9, 0.1]
"""


class TestConfigManager(unittest.TestCase):
    """Test cases for run-file loading."""

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = self._tmp.name
        self.logger = MagicMock(spec=LoggerInterface)

    def tearDown(self):
        self._tmp.cleanup()

    def _write(self, name, text):
        path = os.path.join(self.tmp, name)
        with open(path, 'w', encoding='utf-8') as f:
            f.write(textwrap.dedent(text))
        return path

    def test_packaged_defaults(self):
        manager = ConfigManager(logger=self.logger)
        config = manager.config
        self.assertEqual(manager.seed, 0)
        self.assertEqual(config.scheme, SchemeKind.UNIT)
        self.assertEqual(config.eta_mode, EtaMode.CONSERVATIVE)
        self.assertEqual(config.detectors, [DetectorKind.MEAN, DetectorKind.LRT])
        self.assertEqual(config.io.inserted, "inserted.cvl")
        self.assertIsNone(config.model)
        with self.assertRaises(LabConfigError) as ctx:
            config.require_model()
        self.assertEqual(ctx.exception.context['field'], 'model')

    def test_toml_overlay(self):
        path = self._write("run.toml", """
            seed = 11
            trials = 200
            [model]
            support = [8, 9]
            probs = [0.8, 0.2]
            [io]
            stream = "s.cvl"
        """)
        manager = ConfigManager(path, logger=self.logger)
        self.assertEqual(manager.seed, 11)
        self.assertEqual(manager.config.trials, 200)
        self.assertEqual(manager.config.io.stream, "s.cvl")
        self.assertEqual(manager.config.io.key, "key.cvk")
        pmf = manager.build_model()
        self.assertIsInstance(pmf, PacketSizePmf)
        self.assertAlmostEqual(pmf.probs[0], 0.8)
        self.logger.info.assert_called()

    def test_seed_override(self):
        path = self._write("run.toml", "seed = 11\n")
        self.assertEqual(ConfigManager(path, seed=5).seed, 5)

    def test_yaml_and_json(self):
        yml = self._write("run.yml", "epsilon: 0.2\nlog_level: debug\n")
        manager = ConfigManager(yml)
        self.assertEqual(manager.config.epsilon, 0.2)
        self.assertEqual(manager.log_level, "DEBUG")
        js = self._write("run.json", json.dumps({'model': {'support': [1, 2], 'probs': [0.5, 0.5]}}))
        self.assertEqual(ConfigManager(js).build_model().support, (1, 2))

    def test_dependent_model(self):
        manager = ConfigManager(self._write("dep.toml", DEPENDENT_TOML))
        self.assertEqual(manager.config.eta_mode, EtaMode.LITERAL)
        model = manager.build_model()
        self.assertIsInstance(model, DependentSizeModel)
        self.assertEqual(model.order, 1)
        self.assertAlmostEqual(model.conditional([9]).probs[0], 0.9)

    def test_unit_bits_scale_sizes(self):
        section = ModelSection(support=[1, 2], probs=[0.5, 0.5], unit_bits=8)
        self.assertEqual(section.build().support, (8, 16))

    def test_bad_probs_name_the_field(self):
        path = self._write("bad.toml", """
            [model]
            support = [8, 9]
            probs = [0.5, 0.6]
        """)
        with self.assertRaises(LabConfigError) as ctx:
            ConfigManager(path).build_model()
        self.assertEqual(ctx.exception.context['field'], 'model.probs')

    def test_invalid_values(self):
        cases = {
            "eps.toml": "epsilon = 0.7\n",
            "unknown.toml": "colour = 'blue'\n",
            "level.toml": "log_level = 'loud'\n",
            "format.toml": "log_format = 'fancy'\n",
            "mixed.toml": "[model]\nsupport = [8, 9]\nprobs = [0.5, 0.5]\norder = 1\n",
        }
        for name, text in cases.items():
            with self.subTest(case=name):
                with self.assertRaises(LabConfigError):
                    ConfigManager(self._write(name, text))

    def test_validation_error_names_field(self):
        with self.assertRaises(LabConfigError) as ctx:
            ConfigManager(self._write("eps.toml", "epsilon = 0.7\n"))
        self.assertEqual(ctx.exception.context['field'], 'epsilon')

    def test_file_problems(self):
        with self.assertRaises(LabConfigError):
            ConfigManager(os.path.join(self.tmp, "missing.toml"))
        with self.assertRaises(LabConfigError):
            ConfigManager(self._write("run.ini", "[x]\n"))
        with self.assertRaises(LabConfigError):
            ConfigManager(self._write("broken.toml", "seed = \n"))
        with self.assertRaises(LabConfigError):
            ConfigManager(self._write("list.yml", "- 1\n- 2\n"))

    def test_reload(self):
        path = self._write("run.toml", "seed = 1\n")
        manager = ConfigManager(path)
        self._write("run.toml", "seed = 2\n")
        manager.reload()
        self.assertEqual(manager.seed, 2)


if __name__ == '__main__':
    unittest.main()
