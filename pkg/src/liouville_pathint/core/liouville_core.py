"""
Finite-dimensional Liouville space.

Operators on a truncated Hilbert space are vectorized row-major: component
``x*dim + x'`` of |A) is <x|A|x'>. With this stacking L_A = A (x) I and
R_A = I (x) A^T, so the kernel of L_A is literally A(x, y) delta(x', y').
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from ..exceptions import RejectedInputError
from ..models.representation import FockRepresentation, Representation
from ..utils.operators import PAULI_LETTERS, PAULIS

logger = logging.getLogger(__name__)

MAX_PAULI_QUBITS = 6
ALGEBRA_TOL = 1e-10


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=complex, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class MatrixOperator:
    """Operator on a truncated Hilbert space."""
    entries: np.ndarray
    representation: Optional[Representation] = None

    def __post_init__(self):
        entries = _frozen(self.entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise RejectedInputError(f"operator must be square, got shape {entries.shape}")
        object.__setattr__(self, "entries", entries)
        if self.representation is None:
            object.__setattr__(self, "representation", FockRepresentation(entries.shape[0]))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def _wrap(self, entries: np.ndarray) -> "MatrixOperator":
        return MatrixOperator(entries, self.representation)

    def dag(self) -> "MatrixOperator":
        return self._wrap(self.entries.conj().T)

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def hermiticity_residue(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T), initial=0.0))

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        """Hermitian within ``tol`` relative to the operator's max-abs entry."""
        scale = max(1.0, float(np.max(np.abs(self.entries), initial=0.0)))
        return self.hermiticity_residue() <= tol * scale

    def __matmul__(self, other: "MatrixOperator") -> "MatrixOperator":
        _check_dims(self, other)
        return self._wrap(self.entries @ other.entries)

    def __add__(self, other: "MatrixOperator") -> "MatrixOperator":
        _check_dims(self, other)
        return self._wrap(self.entries + other.entries)

    def __sub__(self, other: "MatrixOperator") -> "MatrixOperator":
        _check_dims(self, other)
        return self._wrap(self.entries - other.entries)

    def __mul__(self, scalar: complex) -> "MatrixOperator":
        return self._wrap(scalar * self.entries)

    __rmul__ = __mul__

    def __neg__(self) -> "MatrixOperator":
        return self._wrap(-self.entries)

    def __repr__(self) -> str:
        return f"MatrixOperator(dim={self.dim}, representation={self.representation})"


@dataclass(frozen=True, eq=False)
class OperatorKet:
    """Vectorized operator |A) with row-major stacking over (x, x')."""
    components: np.ndarray
    representation: Optional[Representation] = None
    dim: int = field(init=False)

    def __post_init__(self):
        components = _frozen(self.components).reshape(-1)
        dim = int(round(np.sqrt(components.size)))
        if dim * dim != components.size or dim == 0:
            raise RejectedInputError(
                f"ket length {components.size} is not a perfect square"
            )
        object.__setattr__(self, "components", components)
        object.__setattr__(self, "dim", dim)
        if self.representation is None:
            object.__setattr__(self, "representation", FockRepresentation(dim))

    def inner(self, other: "OperatorKet") -> complex:
        """(self|other), conjugate-linear in ``self``."""
        if self.dim != other.dim:
            raise RejectedInputError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return complex(np.vdot(self.components, other.components))


@dataclass(frozen=True, eq=False)
class SuperOperator:
    """Linear map on Liouville space as a dim^2 x dim^2 matrix."""
    matrix: np.ndarray
    representation: Optional[Representation] = None
    dim: int = field(init=False)

    def __post_init__(self):
        matrix = _frozen(self.matrix)
        size = matrix.shape[0]
        dim = int(round(np.sqrt(size)))
        if matrix.ndim != 2 or matrix.shape[1] != size or dim * dim != size:
            raise RejectedInputError(
                f"superoperator must be dim^2 x dim^2, got shape {matrix.shape}"
            )
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "dim", dim)
        if self.representation is None:
            object.__setattr__(self, "representation", FockRepresentation(dim))

    @classmethod
    def identity(cls, dim: int, representation: Optional[Representation] = None) -> "SuperOperator":
        return cls(np.eye(dim * dim, dtype=complex), representation)

    @classmethod
    def zero(cls, dim: int, representation: Optional[Representation] = None) -> "SuperOperator":
        return cls(np.zeros((dim * dim, dim * dim), dtype=complex), representation)

    def _wrap(self, matrix: np.ndarray) -> "SuperOperator":
        return SuperOperator(matrix, self.representation)

    def apply(self, target: Union[MatrixOperator, OperatorKet]) -> Union[MatrixOperator, OperatorKet]:
        """Matrix-vector product on kets; devectorize . S . vectorize on operators."""
        if target.dim != self.dim:
            raise RejectedInputError(f"dimension mismatch: {self.dim} vs {target.dim}")
        if isinstance(target, OperatorKet):
            return OperatorKet(self.matrix @ target.components, target.representation)
        return devectorize(self.apply(vectorize(target)))

    __call__ = apply

    def kernel(self) -> np.ndarray:
        """Discrete kernel indexed (x, x', y, y')."""
        d = self.dim
        return self.matrix.reshape(d, d, d, d)

    def norm(self, order: Union[int, float, str] = 2) -> float:
        return float(np.linalg.norm(self.matrix, order))

    def __matmul__(self, other: "SuperOperator") -> "SuperOperator":
        _check_dims(self, other)
        return self._wrap(self.matrix @ other.matrix)

    def __add__(self, other: "SuperOperator") -> "SuperOperator":
        _check_dims(self, other)
        return self._wrap(self.matrix + other.matrix)

    def __sub__(self, other: "SuperOperator") -> "SuperOperator":
        _check_dims(self, other)
        return self._wrap(self.matrix - other.matrix)

    def __mul__(self, scalar: complex) -> "SuperOperator":
        return self._wrap(scalar * self.matrix)

    __rmul__ = __mul__

    def __neg__(self) -> "SuperOperator":
        return self._wrap(-self.matrix)

    def __repr__(self) -> str:
        return f"SuperOperator(dim={self.dim}, representation={self.representation})"


@dataclass(frozen=True, eq=False)
class PauliBasis:
    """Normalized tensor-Pauli basis sigma_mu / sqrt(2^n), big-endian base-4 index."""
    n_qubits: int
    elements: Tuple[OperatorKet, ...]
    labels: Tuple[str, ...]

    @property
    def matrix(self) -> np.ndarray:
        """dim^2 x 4^n matrix whose columns are the vectorized elements."""
        return np.stack([e.components for e in self.elements], axis=1)

    def __len__(self) -> int:
        return len(self.elements)


def _check_dims(a, b) -> None:
    if a.dim != b.dim:
        raise RejectedInputError(f"dimension mismatch: {a.dim} vs {b.dim}")


def inner_product(a: MatrixOperator, b: MatrixOperator) -> complex:
    """(A|B) = Tr(A^dag B)."""
    _check_dims(a, b)
    return complex(np.vdot(a.entries, b.entries))


def vectorize(a: MatrixOperator) -> OperatorKet:
    return OperatorKet(a.entries.reshape(-1), a.representation)


def devectorize(v: OperatorKet) -> MatrixOperator:
    return MatrixOperator(v.components.reshape(v.dim, v.dim), v.representation)


def multiplication_superoperators(a: MatrixOperator) -> Tuple[SuperOperator, SuperOperator]:
    """Left and right multiplication: L_A|B) = |AB), R_A|B) = |BA)."""
    eye = np.eye(a.dim, dtype=complex)
    left = SuperOperator(np.kron(a.entries, eye), a.representation)
    right = SuperOperator(np.kron(eye, a.entries.T), a.representation)
    return left, right


def lie_jordan_superoperators(a: MatrixOperator, hbar: float = 1.0) -> Tuple[SuperOperator, SuperOperator]:
    """
    Lie and Jordan multiplication superoperators.

    Returns:
        (L^-_A, L^+_A) with L^-_A B = (AB - BA)/(i hbar), L^+_A B = (AB + BA)/2
    """
    if not hbar > 0:
        raise RejectedInputError(f"hbar must be positive, got {hbar}")
    left, right = multiplication_superoperators(a)
    return (left - right) * (1.0 / (1j * hbar)), (left + right) * 0.5


def lie_product(a: MatrixOperator, b: MatrixOperator, hbar: float = 1.0) -> MatrixOperator:
    """A . B = (AB - BA)/(i hbar)."""
    return (a @ b - b @ a) * (1.0 / (1j * hbar))


def jordan_product(a: MatrixOperator, b: MatrixOperator) -> MatrixOperator:
    """A o B = (AB + BA)/2."""
    return (a @ b + b @ a) * 0.5


def adjoint_superoperator(s: SuperOperator) -> SuperOperator:
    """S^dag with (S^dag(A)|B) = (A|S(B))."""
    return SuperOperator(s.matrix.conj().T, s.representation)


def identity_operator(dim: int, representation: Optional[Representation] = None) -> MatrixOperator:
    return MatrixOperator(np.eye(dim, dtype=complex), representation)


def pauli_basis(n: int) -> PauliBasis:
    """
    Orthonormal basis sigma_{mu_1} (x) ... (x) sigma_{mu_n} / sqrt(2^n).

    Digit mu_i in {0,1,2,3} maps to (I, X, Y, Z); the first qubit is the most
    significant base-4 digit.
    """
    if not 1 <= n <= MAX_PAULI_QUBITS:
        raise RejectedInputError(f"qubit count must be in [1, {MAX_PAULI_QUBITS}], got {n}")
    norm = 1.0 / np.sqrt(2.0 ** n)
    elements: List[OperatorKet] = []
    labels: List[str] = []
    for mu in range(4 ** n):
        digits = [(mu // 4 ** (n - 1 - i)) % 4 for i in range(n)]
        matrix = np.array([[1.0 + 0j]])
        for digit in digits:
            matrix = np.kron(matrix, PAULIS[digit])
        elements.append(OperatorKet(norm * matrix.reshape(-1)))
        labels.append("".join(PAULI_LETTERS[d] for d in digits))
    return PauliBasis(n, tuple(elements), tuple(labels))


def superoperator_algebra_residuals(
        a: MatrixOperator,
        b: MatrixOperator,
        c: MatrixOperator,
        hbar: float = 1.0
) -> Dict[str, float]:
    """
    Max-abs residuals of the Lie, Jordan and mixed relations of L^{+-}.

    Args:
        a, b, c: Operators of equal dimension
        hbar: Planck constant entering the Lie product

    Returns:
        Mapping from relation name to the max-abs entry of (lhs - rhs)
    """
    def lm(x):
        return lie_jordan_superoperators(x, hbar)[0].matrix

    def lp(x):
        return lie_jordan_superoperators(x, hbar)[1].matrix

    dot_ab = lie_product(a, b, hbar)
    ab, bc, ac = jordan_product(a, b), jordan_product(b, c), jordan_product(a, c)
    ab_c = jordan_product(ab, c)
    h2 = hbar ** 2 / 4.0

    jordan_lhs = lp(ab_c) + lp(b) @ lp(c) @ lp(a) + lp(a) @ lp(c) @ lp(b)
    jordan_right = lp(ab) @ lp(c) + lp(bc) @ lp(a) + lp(ac) @ lp(b)
    jordan_left = lp(c) @ lp(ab) + lp(b) @ lp(ac) + lp(a) @ lp(bc)

    pairs = {
        "lie": (lm(dot_ab), lm(a) @ lm(b) - lm(b) @ lm(a)),
        "jordan_1": (jordan_lhs, jordan_right),
        "jordan_2": (jordan_lhs, jordan_left),
        "jordan_3": (jordan_left, jordan_right),
        "mixed_lie_jordan": (lp(dot_ab), lm(a) @ lp(b) - lp(b) @ lm(a)),
        "mixed_jordan_lie": (lm(jordan_product(a, b)), lp(a) @ lm(b) + lp(b) @ lm(a)),
        "mixed_jordan_product": (lp(ab), lp(a) @ lp(b) - h2 * lm(b) @ lm(a)),
        # sign fixed by the Lie relation together with mixed_jordan_product
        "mixed_jordan_commutator": (lp(b) @ lp(a) - lp(a) @ lp(b), h2 * lm(dot_ab)),
        "left_right_lie": (lm(a), -_right_lie(a, hbar)),
        "left_right_jordan": (lp(a), _right_jordan(a)),
    }
    residuals = {name: float(np.max(np.abs(lhs - rhs))) for name, (lhs, rhs) in pairs.items()}
    logger.debug(f"algebra residuals (dim={a.dim}, hbar={hbar}): {residuals}")
    return residuals


def _right_lie(a: MatrixOperator, hbar: float) -> np.ndarray:
    """R^-_A = (R_A - L_A)/(i hbar)."""
    left, right = multiplication_superoperators(a)
    return (right.matrix - left.matrix) / (1j * hbar)


def _right_jordan(a: MatrixOperator) -> np.ndarray:
    left, right = multiplication_superoperators(a)
    return 0.5 * (right.matrix + left.matrix)
