import os
import unittest
from pathlib import Path
from unittest import mock

from biquotient_tools import biq_config
from biquotient_tools.biq_config import DEFAULTS, SEED_VARIABLE, BiqConfig

TEST_DATA = Path(__file__).parent / "test_data"


class TestBiqConfig(unittest.TestCase):

    def setUp(self):
        self.grouped = {
            "restarts": 4,
            "curvature": {"restarts": 16, "thetas": [0.5, 1.0], "limits": {"restarts": 64}},
            "oracle": {"grid_n": 24, "restarts": 32},
            "notes": [{"restarts": 128}],
            "extra": {"restarts": 256},
        }
        self.config_path = TEST_DATA / "test_config.json"
        self.config = BiqConfig(config_path=self.config_path)

    def test_setting_values(self):
        # top level first, then the groups in order, then their subgroups; lists are not searched
        self.assertListEqual(list(biq_config.setting_values(self.grouped, "restarts")), [4, 16, 32, 256, 64])
        self.assertListEqual(list(biq_config.setting_values(self.grouped, "thetas")), [[0.5, 1.0]])
        self.assertListEqual(list(biq_config.setting_values(self.grouped, "polish")), [])

    def test_grouped_settings(self):
        config = BiqConfig(config_dict={"biquotients": self.grouped})
        self.assertEqual(config.restarts, 4)
        self.assertEqual(config.grid_n, 24)
        self.assertEqual(config.thetas, [0.5, 1.0])
        self.assertEqual(config["restarts"], (4, 16, 32, 256, 64))

    def test_file(self):
        self.assertEqual(self.config.title, "Test Run")
        self.assertEqual(self.config.config_path, self.config_path.absolute())
        self.assertEqual(self.config["restarts"], (4,))
        self.assertEqual(self.config.grid_n, 24)
        self.assertEqual(self.config.thetas, [0.5, 1.5707963267948966])
        self.assertEqual(self.config.curvature_specs, ["N4"])

    def test_defaults(self):
        config = BiqConfig(config_dict={})
        self.assertIsNone(config.config_path)
        self.assertEqual(config.restarts, DEFAULTS["restarts"])
        self.assertEqual(config.grid_n, 720)
        self.assertEqual(config.curvature_specs, list(biq_config.CURVATURE_SPECS))
        self.assertEqual(config.title, "")

    @mock.patch.dict(os.environ, {SEED_VARIABLE: "123"})
    def test_seed_variable(self):
        self.assertEqual(self.config.seed, 123)

    @mock.patch.dict(os.environ, {}, clear=True)
    def test_seed_file(self):
        self.assertEqual(self.config.seed, 7)

    @mock.patch.dict(os.environ, {SEED_VARIABLE: "seven"})
    def test_seed_invalid(self):
        with self.assertRaises(ValueError):
            _ = self.config.seed

    def test_invalid(self):
        with self.assertRaises(ValueError):
            _ = BiqConfig(config_dict={"restarts": 0}).restarts
        with self.assertRaises(ValueError):
            _ = BiqConfig(config_dict={"grid_n": 4}).grid_n
        with self.assertRaises(ValueError):
            _ = BiqConfig(config_dict={"cheeger_t": "thick"}).cheeger_t
        with self.assertRaises(ValueError):
            BiqConfig(config_dict={"zero_threshold": 1e-3}).metric()

    def test_metric(self):
        metric = self.config.metric()
        self.assertEqual(metric.t, 2.0)
        self.assertEqual(metric.max_iterations, 200)
        self.assertEqual(metric.zero_threshold, DEFAULTS["zero_threshold"])

    @mock.patch.dict(os.environ, {}, clear=True)
    def test_metadata(self):
        metadata = self.config.metadata()
        self.assertEqual(metadata["seed"], 7)
        self.assertEqual(metadata["grid_n"], 24)
        self.assertNotIn("title", metadata)


if __name__ == "__main__":
    unittest.main()
