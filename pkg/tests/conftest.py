import numpy as np
import pytest

from hybrid_precoding.config import SystemConfig


def crandn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def unit_modulus(rng, rows, cols):
    return np.exp(1j * rng.uniform(0, 2 * np.pi, (rows, cols))) / np.sqrt(rows)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_config():
    return SystemConfig(n_bs=16, n_u=4, users=2, rf_chains=2, streams=2, n_paths=3)
