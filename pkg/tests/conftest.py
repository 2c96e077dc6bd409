"""Shared fixtures."""

import numpy as np
import pytest

from liouville_pathint.core.lindblad import LindbladGenerator, build_generator
from liouville_pathint.core.liouville_core import MatrixOperator
from liouville_pathint.models.oscillator import OscillatorModelParams
from liouville_pathint.models.representation import GridRepresentation
from liouville_pathint.utils.operators import SIGMA_MINUS, SIGMA_Z


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def damped_qubit():
    """H = sigma_z/2, V = sigma_minus, hbar = 1: rho_ee decays as exp(-t)."""
    generator = LindbladGenerator(
        MatrixOperator(0.5 * SIGMA_Z),
        (MatrixOperator(SIGMA_MINUS),),
        hbar=1.0,
    )
    return build_generator(generator)


@pytest.fixture
def excited_qubit():
    rho = np.zeros((2, 2), dtype=complex)
    rho[0, 0] = 1.0
    return MatrixOperator(rho)


@pytest.fixture
def oscillator_params():
    return OscillatorModelParams(mass=1.0, omega=1.0, mu=0.0, lam=0.1, d_qq=0.05, d_pp=0.05, d_pq=0.0)


@pytest.fixture
def small_grid():
    return GridRepresentation(16, 8.0)
