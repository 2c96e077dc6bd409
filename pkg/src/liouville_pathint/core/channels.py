"""Матрицы Чоя и разложения Крауса квантовых операций."""

import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
import scipy.linalg

from ..exceptions import NotCompletelyPositiveError, RejectedInputError
from .liouville_core import MatrixOperator, SuperOperator
from .propagator import QuantumOperation

logger = logging.getLogger(__name__)

RANK_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class ChoiMatrix:
    """
    Ненормированная матрица Чоя C = sum_ij E(|i><j|) (x) |i><j|.

    Индекс строки (a, i) -> a*d + i, так что C[(a,i),(b,j)] = E(|i><j|)[a, b].
    След равен d для операций, сохраняющих след.
    """
    dim: int
    matrix: np.ndarray

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=complex, copy=True)
        if matrix.shape != (self.dim ** 2, self.dim ** 2):
            raise RejectedInputError(f"Choi matrix shape {matrix.shape} does not match dim {self.dim}")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    def hermiticity_residue(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def eigenvalues(self) -> np.ndarray:
        """Вещественный спектр эрмитовой части по убыванию."""
        hermitian = 0.5 * (self.matrix + self.matrix.conj().T)
        return scipy.linalg.eigvalsh(hermitian)[::-1]

    def to_superoperator(self) -> SuperOperator:
        d = self.dim
        return SuperOperator(self.matrix.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d))


@dataclass(frozen=True, eq=False)
class KrausSet:
    """Операторы A_k, для которых E(rho) = sum_k A_k rho A_k^dag на пространстве размерности d."""
    operators: Tuple[MatrixOperator, ...]
    dim: int
    completeness_defect: float = field(init=False)

    def __post_init__(self):
        operators = tuple(self.operators)
        if any(a.dim != self.dim for a in operators):
            raise RejectedInputError(f"Kraus operators must all have dimension {self.dim}")
        object.__setattr__(self, "operators", operators)
        total = np.zeros((self.dim, self.dim), dtype=complex)
        for a in operators:
            total += a.entries.conj().T @ a.entries
        object.__setattr__(self, "completeness_defect", float(np.linalg.norm(total - np.eye(self.dim), 2)))

    def __len__(self) -> int:
        return len(self.operators)

    def apply(self, rho: MatrixOperator) -> MatrixOperator:
        if rho.dim != self.dim:
            raise RejectedInputError(f"state has dimension {rho.dim}, Kraus set acts on {self.dim}")
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for a in self.operators:
            out += a.entries @ rho.entries @ a.entries.conj().T
        return MatrixOperator(out, rho.representation)

    def to_superoperator(self) -> SuperOperator:
        """sum_k L_{A_k} R_{A_k^dag} = sum_k A_k (x) conj(A_k)."""
        d = self.dim
        matrix = np.zeros((d * d, d * d), dtype=complex)
        for a in self.operators:
            matrix += np.kron(a.entries, a.entries.conj())
        return SuperOperator(matrix)


def choi_matrix(operation) -> ChoiMatrix:
    """
    Матрица Чоя операции: применяем ее к каждой матричной единице.

    Args:
        operation: QuantumOperation или SuperOperator
    """
    superop = operation.superop if isinstance(operation, QuantumOperation) else operation
    d = superop.dim
    # superop[(a,b),(i,j)] = E(|i><j|)[a,b]  ->  C[(a,i),(b,j)]
    matrix = superop.matrix.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)
    return ChoiMatrix(d, matrix)


def kraus_decomposition(choi: ChoiMatrix, rank_tol: Optional[float] = None) -> KrausSet:
    """
    Операторы Крауса из собственных пар матрицы Чоя.

    Args:
        choi: Эрмитова матрица Чоя
        rank_tol: Собственные значения не выше порога отбрасываются; по умолчанию
            1e-10 от наибольшего собственного значения

    Raises:
        NotCompletelyPositiveError: собственное значение ниже -rank_tol
    """
    residue = choi.hermiticity_residue()
    scale = max(1.0, float(np.max(np.abs(choi.matrix))))
    if residue > 1e-8 * scale:
        raise RejectedInputError(f"Choi matrix is not Hermitian (residue {residue:.3e})")
    hermitian = 0.5 * (choi.matrix + choi.matrix.conj().T)
    eigenvalues, eigenvectors = scipy.linalg.eigh(hermitian)
    largest = float(np.max(np.abs(eigenvalues)))
    if rank_tol is None:
        rank_tol = RANK_TOL * max(largest, np.finfo(float).tiny)
    if eigenvalues[0] < -rank_tol:
        raise NotCompletelyPositiveError(float(eigenvalues[0]), rank_tol)

    d = choi.dim
    operators = [
        MatrixOperator(np.sqrt(value) * eigenvectors[:, k].reshape(d, d))
        for k, value in enumerate(eigenvalues)
        if value > rank_tol
    ][::-1]
    kraus = KrausSet(tuple(operators), d)
    logger.debug(f"Ранг Крауса {len(kraus)} (дефект полноты {kraus.completeness_defect:.3e})")
    return kraus
