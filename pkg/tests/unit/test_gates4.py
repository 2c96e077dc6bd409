"""Tests for the real four-valued gate representation of qubit operations."""

import numpy as np
import pytest
import scipy.linalg

from liouville_pathint.core.gates4 import (
    GateMatrix4,
    StateVector4,
    apply_gate4,
    gate_matrix,
    lift_unitary,
    pauli_labels,
    read_gate_csv,
    reconstruct,
    state_vector4,
    write_gate_csv,
)
from liouville_pathint.core.liouville_core import MatrixOperator, SuperOperator
from liouville_pathint.core.oracle import exact_propagator
from liouville_pathint.exceptions import NotRealOperationError, RejectedInputError
from liouville_pathint.utils.operators import SIGMA_X, SIGMA_Z, random_density_matrix, random_unitary


def test_identity_gate():
    gate = gate_matrix(SuperOperator.identity(2))
    np.testing.assert_allclose(gate.matrix, np.eye(4), atol=1e-14)
    assert gate.trace_preserving


def test_pauli_x_gate():
    gate = gate_matrix(lift_unitary(MatrixOperator(SIGMA_X)))
    np.testing.assert_allclose(gate.matrix, np.diag([1.0, 1.0, -1.0, -1.0]), atol=1e-14)


def test_z_rotation_quarter_turn():
    """exp(-i pi/4 sigma_z) maps X to Y and Y to -X."""
    u = scipy.linalg.expm(-0.25j * np.pi * SIGMA_Z)
    gate = gate_matrix(lift_unitary(MatrixOperator(u)))
    expected = np.array([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, -1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ])
    np.testing.assert_allclose(gate.matrix, expected, atol=1e-12)


def test_trace_preserving_first_row(damped_qubit):
    gate = gate_matrix(exact_propagator(damped_qubit, 0.7))
    np.testing.assert_allclose(gate.matrix[0], [1.0, 0.0, 0.0, 0.0], atol=1e-12)
    assert gate.trace_preserving
    # amplitude damping moves the identity component towards -Z
    assert gate.matrix[3, 0] == pytest.approx(-(1.0 - np.exp(-0.7)), abs=1e-12)


def test_trace_decreasing_flagged():
    gate = gate_matrix(SuperOperator.identity(2) * 0.5)
    assert not gate.trace_preserving


def test_state_vectors():
    mixed = state_vector4(MatrixOperator(0.5 * np.eye(2, dtype=complex)))
    np.testing.assert_allclose(mixed.components, [1 / np.sqrt(2), 0.0, 0.0, 0.0], atol=1e-15)
    excited = state_vector4(MatrixOperator(np.diag([1.0, 0.0]).astype(complex)))
    np.testing.assert_allclose(excited.components, [1 / np.sqrt(2), 0.0, 0.0, 1 / np.sqrt(2)], atol=1e-15)


def test_reconstruct_two_qubit_state(rng):
    rho = MatrixOperator(random_density_matrix(4, rng))
    vector = state_vector4(rho)
    assert vector.n_qubits == 2
    np.testing.assert_allclose(reconstruct(vector).entries, rho.entries, atol=1e-14)


def test_gate_acts_like_operation(damped_qubit, rng):
    operation = exact_propagator(damped_qubit, 0.3)
    rho = MatrixOperator(random_density_matrix(2, rng))
    via_gate = reconstruct(apply_gate4(gate_matrix(operation), state_vector4(rho)))
    np.testing.assert_allclose(via_gate.entries, operation.apply(rho).entries, atol=1e-13)


def test_composition_is_matrix_product(damped_qubit, rng):
    first = exact_propagator(damped_qubit, 0.2).superop
    second = lift_unitary(MatrixOperator(random_unitary(2, rng))).superop
    composed = gate_matrix(second @ first)
    product = gate_matrix(second) @ gate_matrix(first)
    np.testing.assert_allclose(composed.matrix, product.matrix, atol=1e-13)
    assert product.trace_preserving


def test_unitary_gate_is_orthogonal(rng):
    gate = gate_matrix(lift_unitary(MatrixOperator(random_unitary(4, rng))))
    assert gate.n_qubits == 2
    np.testing.assert_allclose(gate.matrix @ gate.matrix.T, np.eye(16), atol=1e-12)


def test_gate_round_trips_through_superoperator(damped_qubit):
    superop = exact_propagator(damped_qubit, 1.0).superop
    np.testing.assert_allclose(gate_matrix(superop).to_superoperator().matrix, superop.matrix, atol=1e-13)


def test_gate_csv(tmp_path, damped_qubit):
    gate = gate_matrix(exact_propagator(damped_qubit, 0.5))
    path = write_gate_csv(gate, tmp_path / "gate_matrix.csv")
    assert path.read_text(encoding="utf-8").startswith("# n_qubits: 1\nrow,I,X,Y,Z\n")
    loaded = read_gate_csv(path)
    assert loaded.n_qubits == 1
    np.testing.assert_array_equal(loaded.matrix, gate.matrix)
    assert loaded.trace_preserving


def test_gate_csv_requires_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("row,I,X,Y,Z\n", encoding="utf-8")
    with pytest.raises(RejectedInputError, match="line 1"):
        read_gate_csv(path)


def test_non_real_operation_rejected():
    with pytest.raises(NotRealOperationError) as info:
        gate_matrix(SuperOperator(1j * np.eye(4)))
    assert info.value.residue == pytest.approx(1.0)


def test_bad_dimensions_rejected():
    with pytest.raises(RejectedInputError):
        gate_matrix(SuperOperator.identity(3))
    with pytest.raises(RejectedInputError):
        gate_matrix(SuperOperator.identity(2), n=2)
    with pytest.raises(RejectedInputError):
        StateVector4(1, np.zeros(3))
    with pytest.raises(RejectedInputError):
        GateMatrix4(2, np.eye(4))
    with pytest.raises(RejectedInputError):
        state_vector4(MatrixOperator(np.array([[0, 1], [0, 0]], dtype=complex)))


def test_pauli_labels():
    assert pauli_labels(1) == ["I", "X", "Y", "Z"]
    assert pauli_labels(2)[:5] == ["II", "IX", "IY", "IZ", "XI"]
    assert len(pauli_labels(3)) == 64
