"""Tests for Choi matrices and Kraus decompositions."""

import numpy as np
import pytest

from liouville_pathint.core.channels import choi_matrix, kraus_decomposition
from liouville_pathint.core.lindblad import build_oscillator_generator
from liouville_pathint.core.liouville_core import MatrixOperator, SuperOperator
from liouville_pathint.core.oracle import exact_propagator
from liouville_pathint.core.propagator import QuantumOperation, iter_trotter
from liouville_pathint.exceptions import NotCompletelyPositiveError
from liouville_pathint.models.representation import FockRepresentation
from liouville_pathint.utils.operators import coherent_state, random_density_matrix


def transpose_map(dim: int) -> SuperOperator:
    matrix = np.zeros((dim * dim, dim * dim))
    for i in range(dim):
        for j in range(dim):
            matrix[j * dim + i, i * dim + j] = 1.0
    return SuperOperator(matrix)


def test_identity_choi_is_rank_one():
    choi = choi_matrix(QuantumOperation.identity(3))
    identity = np.eye(3).reshape(-1)
    np.testing.assert_allclose(choi.matrix, np.outer(identity, identity))
    spectrum = choi.eigenvalues()
    assert spectrum[0] == pytest.approx(3.0)
    np.testing.assert_allclose(spectrum[1:], 0.0, atol=1e-12)


def test_choi_round_trip(damped_qubit):
    operation = exact_propagator(damped_qubit, 0.4)
    restored = choi_matrix(operation).to_superoperator()
    np.testing.assert_allclose(restored.matrix, operation.superop.matrix)


def test_damped_qubit_kraus_reconstruction(damped_qubit, rng):
    operation = exact_propagator(damped_qubit, 1.0)
    kraus = kraus_decomposition(choi_matrix(operation))
    assert 1 <= len(kraus) <= 4
    assert kraus.completeness_defect <= 1e-8
    for _ in range(20):
        rho = MatrixOperator(random_density_matrix(2, rng))
        residual = np.max(np.abs(kraus.apply(rho).entries - operation.apply(rho).entries))
        assert residual <= 1e-10
    np.testing.assert_allclose(kraus.to_superoperator().matrix, operation.superop.matrix, atol=1e-10)


def test_oscillator_flow_is_completely_positive(oscillator_params):
    generator = build_oscillator_generator(oscillator_params, FockRepresentation(24))
    for t in (0.1, 1.0):
        spectrum = choi_matrix(exact_propagator(generator, t)).eigenvalues()
        assert spectrum[-1] >= -1e-8


def test_oscillator_trajectory_stays_a_density_matrix(oscillator_params):
    """Exponential slices keep unit trace and a nonnegative spectrum at every step."""
    rep = FockRepresentation(24)
    generator = build_oscillator_generator(oscillator_params, rep)
    rho0 = MatrixOperator(coherent_state(24, 1.0 + 0.5j), rep)
    states = list(iter_trotter(generator, rho0, 0.0, 2.0, 20, mode="exponential"))
    assert len(states) == 21
    for _, rho in states:
        assert abs(rho.trace() - 1.0) <= 1e-8
        hermitian = 0.5 * (rho.entries + rho.entries.conj().T)
        assert np.linalg.eigvalsh(hermitian)[0] >= -1e-9


def test_transpose_map_is_not_completely_positive():
    choi = choi_matrix(transpose_map(2))
    np.testing.assert_allclose(choi.eigenvalues(), [1.0, 1.0, 1.0, -1.0], atol=1e-12)
    with pytest.raises(NotCompletelyPositiveError) as excinfo:
        kraus_decomposition(choi)
    assert excinfo.value.eigenvalue == pytest.approx(-1.0)


def test_trace_decreasing_operation_has_defect():
    projector = np.diag([1.0, 0.0]).astype(complex)
    operation = SuperOperator(np.kron(projector, projector))
    kraus = kraus_decomposition(choi_matrix(operation))
    assert len(kraus) == 1
    assert kraus.completeness_defect == pytest.approx(1.0)


def test_zero_operation_has_rank_zero():
    kraus = kraus_decomposition(choi_matrix(SuperOperator.zero(2)))
    assert len(kraus) == 0
    assert kraus.dim == 2
    assert kraus.completeness_defect == pytest.approx(1.0)
    rho = MatrixOperator(np.diag([0.25, 0.75]).astype(complex))
    np.testing.assert_array_equal(kraus.apply(rho).entries, np.zeros((2, 2)))
    np.testing.assert_array_equal(kraus.to_superoperator().matrix, np.zeros((4, 4)))
