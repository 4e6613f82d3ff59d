import os
from unittest import TestCase, main
from unittest.mock import patch

from dualprobe.core.config import ConfigItems, _env_profile, config


class TestConfig(TestCase):

    def test_defaults(self):
        self.assertEqual(config.lang.python, "python")
        self.assertEqual(config.witness.max_select, 20)
        self.assertEqual(config.witness.growth_factor, "2")
        self.assertEqual(config.annihilators.window, 16)
        self.assertEqual(config.measure.block_size, 4096)
        self.assertEqual(config.charsub.precision, 256)
        self.assertEqual(config.charsub.epsilon, "1/1000")

    def test_missing_items_are_none(self):
        items = ConfigItems({"a": 1})
        self.assertEqual(items.a, 1)
        self.assertIsNone(items.b)
        self.assertIsNone(items["b"])

    def test_seed_from_environment(self):
        with patch.dict(os.environ, {"DUALPROBE_SEED": "42"}):
            self.assertEqual(_env_profile(), {"measure": {"seed": 42}})
        with patch.dict(os.environ, {"DUALPROBE_SEED": " "}):
            self.assertEqual(_env_profile(), {})
        with patch.dict(os.environ, {}, clear=True):
            self.assertEqual(_env_profile(), {})


if __name__ == "__main__":
    main(verbosity=2)
