import numpy as np
import pytest

from qchd import channels


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def harrow_pair():
    return channels.harrow_channels()
