import numpy as np
import pytest

from pwsdyn.bifurcation import SweepSpec
from pwsdyn.datasets import gen_period_dataset, split_dataset
from pwsdyn.maps import normal_form_map, tent_map


@pytest.fixture(scope="session")
def normal_form_period_dataset():
    spec = SweepSpec(normal_form_map(0.5, 0.5, -0.1, 0.0), "mu", -0.1, 0.2, 1000)
    return gen_period_dataset(spec)


@pytest.fixture(scope="session")
def normal_form_split(normal_form_period_dataset):
    return split_dataset(normal_form_period_dataset, 0.2, seed=7)


@pytest.fixture(scope="session")
def tent_period_dataset():
    spec = SweepSpec(tent_map(0.0), "mu", -1.0, 1.0, 1000)
    return gen_period_dataset(spec)


@pytest.fixture
def toy_blobs():
    """Two linearly separable clusters, class 0 first and in the majority."""
    rng = np.random.default_rng(5)
    a = rng.normal(loc=(-2.0, -2.0), scale=0.3, size=(30, 2))
    b = rng.normal(loc=(2.0, 2.0), scale=0.3, size=(20, 2))
    X = np.vstack([a, b])
    y = np.array([0] * 30 + [1] * 20, dtype=np.int64)
    return X, y
