import numpy as np
import pytest

from bayespitch import Frame, GPriorConfig, make_pitch_grid


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def gprior():
    return GPriorConfig(delta=4.0)


@pytest.fixture
def default_grid():
    return make_pitch_grid(70.0, 400.0, 16000.0, 16384, 10)


@pytest.fixture
def small_grid():
    """A 6-bin, 3-order grid that keeps brute-force enumeration cheap."""
    return make_pitch_grid(100.0, 190.0, 8000.0, 512, 3)


def make_frame(samples, sample_rate=16000.0, index=1, start_time=0.0):
    return Frame(
        samples=np.asarray(samples, dtype=np.float64),
        index=index,
        start_time=start_time,
        sample_rate=sample_rate,
    )
