"""
Shared pytest fixtures.

Living at the repository root, this file also puts `qee_witness` and `cli`
on sys.path for the tests.
"""

import math

import numpy as np
import pytest
import structlog

from qee_witness.config import reload_settings
from qee_witness.physics.model import thermal_state
from qee_witness.schemas import PDParams, ProtocolConfig, ThermalSpec

ENTANGLING_PREP_ALPHA = 0.5 + 0.5j
ENTANGLING_MEAS_ALPHA = complex(1 / math.sqrt(2))


@pytest.fixture(autouse=True)
def _reset_process_state():
    """Each test starts from default structlog config and fresh settings."""
    yield
    structlog.reset_defaults()
    reload_settings()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def entangling_prep() -> PDParams:
    """Preparation coupling alpha/beta = (1+i)/2."""
    return PDParams(alpha=ENTANGLING_PREP_ALPHA, beta=1.0)


@pytest.fixture
def coupled_meas() -> PDParams:
    """Measurement coupling alpha/beta = 1/sqrt(2)."""
    return PDParams(alpha=ENTANGLING_MEAS_ALPHA, beta=1.0)


@pytest.fixture
def entangling_config(entangling_prep, coupled_meas) -> ProtocolConfig:
    """The entangling run: beta t = 2, zero temperature."""
    return ProtocolConfig(prep=entangling_prep, meas=coupled_meas, t=2.0)


@pytest.fixture
def vacuum48() -> np.ndarray:
    return thermal_state(ThermalSpec(theta=0.0), 48)


@pytest.fixture
def thermal64() -> np.ndarray:
    return thermal_state(ThermalSpec(theta=0.5), 64)
