import numpy as np
import pytest

from xorbench import data


@pytest.fixture(scope="session")
def benchmark_data():
    """The benchmark train/test split (variant B, sigma 0.10, n 100, seed 42)."""
    return data.benchmark_splits()


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
