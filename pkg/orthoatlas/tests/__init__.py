import unittest

import numpy as np
from click.testing import CliRunner

from .. import create_cli
from ..config.config import config_dict
from ..models import PARAM_NAMES, DesignParams


class UnitTestCase(unittest.TestCase):
    # called before each test
    def setUp(self):
        self.config = config_dict["test"]
        self.cli = create_cli(config=self.config)
        # using a CLI runner with stderr kept apart from stdout
        self.runner = CliRunner(mix_stderr=False)
        self.rng = np.random.default_rng(20230131)

    # called after each test case
    def tearDown(self):
        self.cli = None
        self.runner = None
        self.rng = None

    def random_joints(self, count, limit=np.pi):
        """(theta1, theta2, theta3) rows drawn uniformly in [-limit, limit)."""
        return self.rng.uniform(-limit, limit, size=(count, 3))

    def random_design(self, case, low=0.2, high=3.0):
        """Design of the given family case with its free lengths drawn in [low, high)."""
        free = case.free_parameters
        return DesignParams(**{name: self.rng.uniform(low, high) if name in free else 0.0 for name in PARAM_NAMES})
