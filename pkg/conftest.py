import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from models.frame import make_frame_config  # noqa: E402


@pytest.fixture
def cfg():
    return make_frame_config(256)


@pytest.fixture
def small_cfg():
    return make_frame_config(64)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
