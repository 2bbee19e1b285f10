"""Shared fixtures: grids, sampled wavelets, seeded generators and a small config."""

import numpy as np
import pytest

from dyadic_averaging.config import ExperimentConfig, FamilyConfig, IndexConfig
from dyadic_averaging.grid.functions import DyadicGrid, GridFunction
from dyadic_averaging.wavelets.cascade import cascade_sample
from dyadic_averaging.wavelets.filters import daubechies_filter


@pytest.fixture
def grid10():
    return DyadicGrid(J=10)


@pytest.fixture(scope="session")
def haar_sw():
    return cascade_sample(daubechies_filter(1), 10)


@pytest.fixture(scope="session")
def db2_sw():
    return cascade_sample(daubechies_filter(2), 10)


@pytest.fixture(scope="session")
def db4_sw():
    return cascade_sample(daubechies_filter(4), 10)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def integer_function(grid10, rng):
    """Integer cell values keep every dyadic average exactly representable."""
    return GridFunction(grid10, rng.integers(-100, 101, size=grid10.n_cells).astype(float))


@pytest.fixture(scope="session")
def small_config():
    """A J=10 run small enough for unit tests."""
    return ExperimentConfig(
        J=10,
        j_max=6,
        margin=4,
        n_values=[1, 2, 3, 4, 5, 6],
        indices=[
            IndexConfig(p=1.0, q=2.0, s=0.5, r=2.0),
            IndexConfig(p=2.0, q=2.0, s=0.25, r=2.0),
        ],
        probe_indices=[IndexConfig(p=1.0, q=2.0, s=1.3, r=2.0)],
        families=[
            FamilyConfig(name="single_wavelet", count=2, j=5),
            FamilyConfig(name="random_multilevel", count=2),
            FamilyConfig(name="smooth_bump", count=2),
            FamilyConfig(name="jump", count=2),
        ],
        multiplier_seeds=3,
    )
