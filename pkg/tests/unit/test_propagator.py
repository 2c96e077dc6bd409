"""Tests for time-sliced propagation and normalized operations."""

import numpy as np
import pytest
import scipy.linalg

from liouville_pathint.core.lindblad import LindbladGenerator, build_generator
from liouville_pathint.core.liouville_core import MatrixOperator, SuperOperator
from liouville_pathint.core.oracle import exact_propagator
from liouville_pathint.core.propagator import (
    QuantumOperation,
    TrotterPropagator,
    check_density_matrix,
    compose,
    iter_trotter,
    normalize_operation,
    operation_probability,
    short_time_kernel,
    trotter_propagate,
)
from liouville_pathint.exceptions import RejectedInputError, ZeroProbabilityError
from liouville_pathint.utils.operators import SIGMA_X


def test_short_time_kernel_is_linear(damped_qubit):
    tau = 1e-3
    s = short_time_kernel(damped_qubit, tau)
    difference = np.linalg.norm(s.matrix - np.eye(4), 2)
    assert difference == pytest.approx(tau * damped_qubit.norm(2), rel=1e-9)


def test_short_time_kernel_local_error_is_quadratic(damped_qubit):
    def local_error(tau):
        exact = scipy.linalg.expm(tau * damped_qubit.matrix)
        return np.linalg.norm(short_time_kernel(damped_qubit, tau).matrix - exact, 2)

    ratio = local_error(1e-3) / local_error(5e-4)
    assert 3.5 <= ratio <= 4.5


@pytest.mark.parametrize("tau", [0.0, -0.1])
def test_short_time_kernel_rejects_non_positive_tau(damped_qubit, tau):
    with pytest.raises(RejectedInputError):
        short_time_kernel(damped_qubit, tau)


def test_single_slice_is_short_time_kernel(damped_qubit):
    operation = trotter_propagate(damped_qubit, 0.0, 0.25, 1)
    np.testing.assert_allclose(operation.superop.matrix, short_time_kernel(damped_qubit, 0.25).matrix)
    assert operation.time_span == (0.0, 0.25)


def test_trotter_error_halves_when_slices_double(damped_qubit):
    exact = scipy.linalg.expm(damped_qubit.matrix)
    errors = [
        np.linalg.norm(trotter_propagate(damped_qubit, 0.0, 1.0, n).superop.matrix - exact, 2)
        for n in (64, 128, 256, 512)
    ]
    for coarse, fine in zip(errors, errors[1:]):
        assert 1.6 <= coarse / fine <= 2.4
    assert errors[-1] <= 5e-3


def test_exponential_slices_are_exact(damped_qubit):
    operation = TrotterPropagator(damped_qubit, mode="exponential").propagate(0.0, 1.0, 3)
    np.testing.assert_allclose(operation.superop.matrix, scipy.linalg.expm(damped_qubit.matrix), atol=1e-12)


def test_piecewise_schedule_converges_to_ordered_product(damped_qubit):
    drive = build_generator(LindbladGenerator(MatrixOperator(0.5 * SIGMA_X)))

    def schedule(t):
        return damped_qubit if t < 0.5 else drive

    expected = scipy.linalg.expm(0.5 * drive.matrix) @ scipy.linalg.expm(0.5 * damped_qubit.matrix)
    result = trotter_propagate(schedule, 0.0, 1.0, 512).superop.matrix
    assert np.linalg.norm(result - expected, 2) <= 1e-2


def test_trajectory_ends_at_propagated_state(damped_qubit, excited_qubit):
    points = list(iter_trotter(damped_qubit, excited_qubit, 0.0, 1.0, 16))
    assert len(points) == 17
    assert points[0][0] == 0.0
    assert points[-1][0] == pytest.approx(1.0)
    final = trotter_propagate(damped_qubit, 0.0, 1.0, 16).apply(excited_qubit)
    np.testing.assert_allclose(points[-1][1].entries, final.entries, atol=1e-14)


def test_propagator_rejects_bad_spans(damped_qubit):
    propagator = TrotterPropagator(damped_qubit)
    with pytest.raises(RejectedInputError):
        propagator.propagate(1.0, 0.0, 4)
    with pytest.raises(RejectedInputError):
        propagator.propagate(0.0, 1.0, 0)
    with pytest.raises(RejectedInputError):
        TrotterPropagator(damped_qubit, mode="midpoint")


def test_compose_identity_and_semigroup(damped_qubit):
    first = exact_propagator(damped_qubit, 0.3)
    second = exact_propagator(damped_qubit, 0.5, t0=0.3)
    composed = compose(second, first)
    np.testing.assert_allclose(composed.superop.matrix, exact_propagator(damped_qubit, 0.8).superop.matrix, atol=1e-10)
    assert composed.time_span == (0.0, pytest.approx(0.8))

    identity = QuantumOperation.identity(2, t=0.3)
    np.testing.assert_allclose(compose(second, identity).superop.matrix, second.superop.matrix)


def test_compose_respects_order(damped_qubit):
    drive = build_generator(LindbladGenerator(MatrixOperator(0.5 * SIGMA_X)))
    a = exact_propagator(damped_qubit, 0.5)
    b = exact_propagator(drive, 0.5, t0=0.5)
    np.testing.assert_allclose(compose(b, a).superop.matrix, b.superop.matrix @ a.superop.matrix)


def test_compose_rejects_gap(damped_qubit):
    with pytest.raises(RejectedInputError):
        compose(exact_propagator(damped_qubit, 0.5, t0=1.0), exact_propagator(damped_qubit, 0.5))


def test_projector_operation_is_normalized():
    projector = np.diag([1.0, 0.0]).astype(complex)
    operation = QuantumOperation(SuperOperator(np.kron(projector, projector.conj())))
    rho = MatrixOperator(0.5 * np.eye(2))
    assert operation_probability(operation, rho) == pytest.approx(0.5)
    np.testing.assert_allclose(normalize_operation(operation, rho).entries, projector)


def test_trace_preserving_operation_has_unit_probability(damped_qubit, excited_qubit):
    operation = exact_propagator(damped_qubit, 0.7)
    assert operation_probability(operation, excited_qubit) == pytest.approx(1.0, abs=1e-12)


def test_zero_operation_raises():
    operation = QuantumOperation(SuperOperator.zero(2))
    with pytest.raises(ZeroProbabilityError):
        normalize_operation(operation, MatrixOperator(0.5 * np.eye(2)))


def test_check_density_matrix_rejects_bad_states():
    with pytest.raises(RejectedInputError):
        check_density_matrix(MatrixOperator(np.eye(2)))
    with pytest.raises(RejectedInputError):
        check_density_matrix(MatrixOperator(np.diag([1.5, -0.5])))
