import numpy as np
import pytest

from axionspin import AxionParams, NoiseConfig, QubitConfig, TimeGrid

# Reference simulation parameters (bundled defaults).
TABLE_AXION = dict(m_a=3e-6, rho_a=0.3, g_ae=1e-13, v=1e-3, phi=0.0,
                   cos_theta0=1.0)
TABLE_QUBIT = dict(B0=0.5, gamma=28e9, T1=1e-3, T2=1e-4)
TABLE_GRID = dict(dt=2e-12, n_samples=90000, t0=0.0)

# Amplitude scale placing the trace modulation index at 0.5 for the
# reference axion mass (documented in the bundled config).
REFERENCE_SCALE = 7.139798e18


@pytest.fixture
def axion():
    return AxionParams(**TABLE_AXION)


@pytest.fixture
def qubit():
    return QubitConfig(**TABLE_QUBIT)


@pytest.fixture
def grid():
    return TimeGrid(**TABLE_GRID)


@pytest.fixture
def noise_cfg():
    return NoiseConfig(seed=42)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
