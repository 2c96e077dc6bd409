"""
Квантовые операции как четырехзначные логические гейты.

Операция над n кубитами становится вещественной матрицей 4^n x 4^n
E_mu,nu = (1/2^n) Tr(sigma_mu E(sigma_nu)) в нормированном тензорном базисе Паули,
а смешанное состояние становится вещественным вектором компонент rho_mu = (mu|rho).
"""

import itertools
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
import pandas as pd

from ..exceptions import NotRealOperationError, RejectedInputError
from ..utils.operators import PAULI_LETTERS
from .liouville_core import MAX_PAULI_QUBITS, MatrixOperator, OperatorKet, SuperOperator, devectorize, pauli_basis, vectorize
from .propagator import QuantumOperation

logger = logging.getLogger(__name__)

REAL_TOL = 1e-10
UNITARY_TOL = 1e-10
N_QUBITS_HEADER = "# n_qubits: "


def _qubit_count(dim: int) -> int:
    n = int(round(np.log2(dim))) if dim > 0 else 0
    if dim < 2 or 2 ** n != dim:
        raise RejectedInputError(f"dimension {dim} is not a power of two")
    if n > MAX_PAULI_QUBITS:
        raise RejectedInputError(f"{n} qubits exceed the supported {MAX_PAULI_QUBITS}")
    return n


def pauli_labels(n: int) -> List[str]:
    """Метки "II", "IX", ... в порядке big-endian, как в базисе."""
    if not 1 <= n <= MAX_PAULI_QUBITS:
        raise RejectedInputError(f"qubit count must be in [1, {MAX_PAULI_QUBITS}], got {n}")
    return ["".join(letters) for letters in itertools.product(PAULI_LETTERS, repeat=n)]


@dataclass(frozen=True, eq=False)
class GateMatrix4:
    """Вещественная матрица гейта в нормированном базисе Паули."""
    n_qubits: int
    matrix: np.ndarray
    trace_preserving: bool = False

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=float, copy=True)
        size = 4 ** self.n_qubits
        if matrix.shape != (size, size):
            raise RejectedInputError(f"gate matrix for {self.n_qubits} qubits must be {size}x{size}, got {matrix.shape}")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def from_matrix(cls, n_qubits: int, matrix: np.ndarray, tol: float = REAL_TOL) -> "GateMatrix4":
        matrix = np.asarray(matrix, dtype=float)
        first_row = np.zeros(matrix.shape[1])
        first_row[0] = 1.0
        return cls(n_qubits, matrix, bool(np.max(np.abs(matrix[0] - first_row)) <= tol))

    def __matmul__(self, other: "GateMatrix4") -> "GateMatrix4":
        if other.n_qubits != self.n_qubits:
            raise RejectedInputError(f"qubit count mismatch: {self.n_qubits} vs {other.n_qubits}")
        return GateMatrix4.from_matrix(self.n_qubits, self.matrix @ other.matrix)

    def to_superoperator(self) -> SuperOperator:
        basis = pauli_basis(self.n_qubits).matrix
        return SuperOperator(basis @ self.matrix @ basis.conj().T)

    def to_frame(self) -> pd.DataFrame:
        labels = pauli_labels(self.n_qubits)
        return pd.DataFrame(self.matrix, index=labels, columns=labels)


@dataclass(frozen=True, eq=False)
class StateVector4:
    """Вещественные компоненты rho_mu = (mu|rho) эрмитова оператора."""
    n_qubits: int
    components: np.ndarray

    def __post_init__(self):
        components = np.array(self.components, dtype=float, copy=True).reshape(-1)
        if components.size != 4 ** self.n_qubits:
            raise RejectedInputError(
                f"state vector for {self.n_qubits} qubits needs {4 ** self.n_qubits} components, got {components.size}"
            )
        components.setflags(write=False)
        object.__setattr__(self, "components", components)


def gate_matrix(operation: Union[QuantumOperation, SuperOperator], n: Optional[int] = None, tol: float = REAL_TOL) -> GateMatrix4:
    """
    Args:
        operation: Операция над n кубитами
        n: Число кубитов; если не задано, выводится из размерности
        tol: Наибольшая допустимая мнимая часть, выше которой результат не вещественный

    Raises:
        RejectedInputError: размерность не равна 2^n
        NotRealOperationError: операция не сохраняет эрмитовость
    """
    superop = operation.superop if isinstance(operation, QuantumOperation) else operation
    inferred = _qubit_count(superop.dim)
    if n is not None and n != inferred:
        raise RejectedInputError(f"operation acts on {inferred} qubits, not {n}")
    basis = pauli_basis(inferred).matrix
    gate = basis.conj().T @ superop.matrix @ basis
    residue = float(np.max(np.abs(gate.imag)))
    if residue > tol:
        raise NotRealOperationError(residue, tol)
    result = GateMatrix4.from_matrix(inferred, gate.real, tol)
    logger.debug(f"Матрица гейта n={inferred}, сохраняет след: {result.trace_preserving}")
    return result


def state_vector4(rho: MatrixOperator, tol: float = REAL_TOL) -> StateVector4:
    """
    Raises:
        RejectedInputError: rho не эрмитова или не на 2^n уровнях
    """
    n = _qubit_count(rho.dim)
    if rho.hermiticity_residue() > tol:
        raise RejectedInputError(f"operator is not Hermitian (residue {rho.hermiticity_residue():.3e})")
    basis = pauli_basis(n).matrix
    return StateVector4(n, (basis.conj().T @ vectorize(rho).components).real)


def reconstruct(vector: StateVector4) -> MatrixOperator:
    """sum_mu |mu) rho_mu."""
    basis = pauli_basis(vector.n_qubits).matrix
    return devectorize(OperatorKet(basis @ vector.components))


def apply_gate4(gate: GateMatrix4, vector: StateVector4) -> StateVector4:
    if gate.n_qubits != vector.n_qubits:
        raise RejectedInputError(f"gate acts on {gate.n_qubits} qubits, state has {vector.n_qubits}")
    return StateVector4(gate.n_qubits, gate.matrix @ vector.components)


def lift_unitary(unitary: MatrixOperator, tol: float = UNITARY_TOL) -> QuantumOperation:
    """
    rho -> U rho U^dag, т.е. L_U R_{U^dag} = U (x) conj(U).

    Raises:
        RejectedInputError: U^dag U отличается от I больше чем на ``tol``
    """
    u = unitary.entries
    defect = float(np.max(np.abs(u.conj().T @ u - np.eye(unitary.dim))))
    if defect > tol:
        raise RejectedInputError(f"operator is not unitary (defect {defect:.3e})")
    superop = SuperOperator(np.kron(u, u.conj()), unitary.representation)
    return QuantumOperation(superop, (0.0, 0.0), {"generator": "unitary", "slices": 0})


def write_gate_csv(gate: GateMatrix4, path: Union[str, Path]) -> Path:
    """Строка заголовка с числом кубитов, затем размеченная матрица с 17 значащими цифрами."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(f"{N_QUBITS_HEADER}{gate.n_qubits}\n")
        gate.to_frame().to_csv(f, float_format="%.17g", index_label="row")
    return path


def read_gate_csv(path: Union[str, Path]) -> GateMatrix4:
    path = Path(path)
    with open(path, "r", encoding="utf-8") as f:
        header = f.readline().strip()
        if not header.startswith(N_QUBITS_HEADER.strip()):
            raise RejectedInputError(f"{path}: line 1 must be '{N_QUBITS_HEADER}<n>', got {header!r}")
        try:
            n = int(header.split(":", 1)[1])
        except ValueError as e:
            raise RejectedInputError(f"{path}: line 1 has no qubit count") from e
        frame = pd.read_csv(f, index_col=0, float_precision="round_trip")
    if list(frame.columns) != pauli_labels(n):
        raise RejectedInputError(f"{path}: column labels do not match {n} qubits")
    return GateMatrix4.from_matrix(n, frame.to_numpy(dtype=float))
