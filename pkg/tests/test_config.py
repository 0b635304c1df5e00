import unittest
from unittest.mock import patch
import sys
import os

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from polyrace.config import Config


class TestConfig(unittest.TestCase):

# Test 1: Config.from_env lee las variables POLYRACE_*
    @patch.dict(os.environ, {"POLYRACE_EPS": "1e-12", "POLYRACE_SEED": "3", "POLYRACE_EA_STYLE": "jacobi",
                             "POLYRACE_RECORD_WALL_TIME": "true", "POLYRACE_LOG_LEVEL": "debug"})
    def test_from_env(self):
        cfg = Config.from_env()
        self.assertEqual(cfg.eps, 1e-12)
        self.assertEqual(cfg.seed, 3)
        self.assertEqual(cfg.ea_style, "jacobi")
        self.assertTrue(cfg.record_wall_time)
        self.assertEqual(cfg.log_level, "DEBUG")

# Test 2: Sin variables se usan los defaults
    @patch("polyrace.config.load_dotenv")
    def test_defaults(self, mock_load):
        with patch.dict(os.environ, {}, clear=True):
            cfg = Config.from_env()
        mock_load.assert_called_once()
        self.assertEqual(cfg, Config())
        self.assertFalse(cfg.record_wall_time)

# Test 3: Radios relativos a la cota de raíces de la familia
    def test_configs_de_solvers(self):
        cfg = Config()
        ncfg = cfg.newton_config(2.0)
        self.assertEqual(ncfg.start_radius, 6.0)
        self.assertEqual(ncfg.conv_eps, cfg.eps)
        self.assertEqual(ncfg.sep_delta, cfg.delta)
        acfg = cfg.aberth_config(2.0)
        self.assertAlmostEqual(acfg.start_radius, 2.2, places=15)
        self.assertEqual(acfg.stop_mode, "step_size")
        self.assertIsNone(acfg.reference)
        ref = cfg.aberth_config(1.0, [1 + 0j, -1 + 0j])
        self.assertEqual(ref.stop_mode, "reference")
        self.assertEqual(ref.reference, [1 + 0j, -1 + 0j])

# Test 4: Las variables de to_env reconstruyen la misma configuración
    @patch("polyrace.config.load_dotenv")
    def test_to_env(self, mock_load):
        cfg = Config(eps=1e-12, seed=11, ea_style="jacobi", ea_radius_factor=1.3, out_dir="/tmp/res",
                     record_wall_time=True, log_level="DEBUG")
        with patch.dict(os.environ, cfg.to_env(), clear=True):
            self.assertEqual(Config.from_env(), cfg)


if __name__ == "__main__":
    unittest.main()

# correr test con:
# python -m unittest tests/test_config.py
