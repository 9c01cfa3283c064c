import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from ring import PacketSpec, make_gaussian_packet  # noqa: E402


@pytest.fixture
def packet10():
    return make_gaussian_packet(PacketSpec(10.0))


@pytest.fixture
def packet5():
    return make_gaussian_packet(PacketSpec(5.0))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
