"""
Операторные полиномы от (Q, P) и квадратичные символы на двойном фазовом пространстве.

Квадратичный символ хранится как комплексная симметричная матрица 5x5 M над
z = (1, q, q', p, p'), так что Lambda_S = z^T M z. Символ Линдблада использует
qp-упорядоченный символ на нештрихованной паре и pq-упорядоченный на штрихованной;
классификатор сводимости смотрит на его импульсную структуру.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from math import comb, factorial
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import RejectedInputError, UnsupportedFormError
from ..models.grids import SymbolGrid
from ..models.oscillator import OscillatorModelParams
from ..models.representation import GridRepresentation
from .lindblad import oscillator_amplitudes
from .liouville_core import MatrixOperator

logger = logging.getLogger(__name__)

# показатели (q, q', p, p')
Exponent = Tuple[int, int, int, int]
VARIABLES = ("q", "q'", "p", "p'")
SYMBOL_TOL = 1e-12

Q, Q_PRIME, P, P_PRIME = (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)


def _ordered_product(a: int, b: int, c: int, d: int, commutator: complex) -> Dict[Tuple[int, int], complex]:
    """
    X^a Y^b X^c Y^d в порядке X слева, при Y X = X Y + коммутатор.

    Y^b X^c = sum_k C(b,k) C(c,k) k! commutator^k X^{c-k} Y^{b-k}.
    """
    out: Dict[Tuple[int, int], complex] = {}
    for k in range(min(b, c) + 1):
        out[(a + c - k, b + d - k)] = comb(b, k) * comb(c, k) * factorial(k) * commutator ** k
    return out


@dataclass(frozen=True, eq=False)
class OperatorPolynomial:
    """
    Полином sum c_mn Q^m P^n в нормальном порядке Q слева (qp).

    Args:
        terms: Отображение (m, n) -> коэффициент при Q^m P^n
        hbar: Постоянная Планка, задающая [Q, P] = i hbar
    """
    terms: Mapping[Tuple[int, int], complex]
    hbar: float = 1.0

    def __post_init__(self):
        if not self.hbar > 0:
            raise RejectedInputError(f"hbar must be positive, got {self.hbar}")
        clean: Dict[Tuple[int, int], complex] = {}
        for (m, n), coefficient in dict(self.terms).items():
            if m < 0 or n < 0:
                raise RejectedInputError(f"negative power Q^{m} P^{n}")
            if coefficient != 0:
                clean[(int(m), int(n))] = complex(coefficient)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def constant(cls, value: complex, hbar: float = 1.0) -> "OperatorPolynomial":
        return cls({(0, 0): value}, hbar)

    @classmethod
    def position(cls, hbar: float = 1.0) -> "OperatorPolynomial":
        return cls({(1, 0): 1.0}, hbar)

    @classmethod
    def momentum(cls, hbar: float = 1.0) -> "OperatorPolynomial":
        return cls({(0, 1): 1.0}, hbar)

    @property
    def degree(self) -> int:
        return max((m + n for m, n in self.terms), default=0)

    def _coerce(self, other) -> "OperatorPolynomial":
        if isinstance(other, OperatorPolynomial):
            if other.hbar != self.hbar:
                raise RejectedInputError(f"hbar mismatch: {self.hbar} vs {other.hbar}")
            return other
        return OperatorPolynomial.constant(complex(other), self.hbar)

    def __add__(self, other) -> "OperatorPolynomial":
        other = self._coerce(other)
        terms = defaultdict(complex, self.terms)
        for key, value in other.terms.items():
            terms[key] += value
        return OperatorPolynomial(terms, self.hbar)

    __radd__ = __add__

    def __neg__(self) -> "OperatorPolynomial":
        return OperatorPolynomial({k: -v for k, v in self.terms.items()}, self.hbar)

    def __sub__(self, other) -> "OperatorPolynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "OperatorPolynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "OperatorPolynomial":
        """Произведение операторов или умножение на число."""
        if not isinstance(other, OperatorPolynomial):
            return OperatorPolynomial({k: complex(other) * v for k, v in self.terms.items()}, self.hbar)
        other = self._coerce(other)
        terms: Dict[Tuple[int, int], complex] = defaultdict(complex)
        # P Q = Q P - i hbar
        for (a, b), left in self.terms.items():
            for (c, d), right in other.terms.items():
                for key, factor in _ordered_product(a, b, c, d, -1j * self.hbar).items():
                    terms[key] += left * right * factor
        return OperatorPolynomial(terms, self.hbar)

    def __rmul__(self, scalar) -> "OperatorPolynomial":
        return self * scalar

    def dag(self) -> "OperatorPolynomial":
        """(c Q^m P^n)^dag = c^* P^n Q^m, переупорядоченный к Q слева."""
        terms: Dict[Tuple[int, int], complex] = defaultdict(complex)
        for (m, n), coefficient in self.terms.items():
            for key, factor in _ordered_product(0, n, m, 0, -1j * self.hbar).items():
                terms[key] += np.conj(coefficient) * factor
        return OperatorPolynomial(terms, self.hbar)

    def is_hermitian(self, tol: float = SYMBOL_TOL) -> bool:
        return all(abs(v) <= tol for v in (self - self.dag()).terms.values())

    def qp_symbol(self) -> Dict[Tuple[int, int], complex]:
        """Коэффициенты при q^m p^n в qp-упорядоченном символе."""
        return dict(self.terms)

    def pq_symbol(self) -> Dict[Tuple[int, int], complex]:
        """
        Коэффициенты при q^m p^n в pq-упорядоченном (P слева) символе.

        Q^m P^n = sum_k C(m,k) C(n,k) k! (i hbar)^k P^{n-k} Q^{m-k}.
        """
        out: Dict[Tuple[int, int], complex] = defaultdict(complex)
        for (m, n), coefficient in self.terms.items():
            for (p_power, q_power), factor in _ordered_product(0, m, n, 0, 1j * self.hbar).items():
                out[(q_power, p_power)] += coefficient * factor
        return {k: v for k, v in out.items() if v != 0}

    def to_matrix(self, q: MatrixOperator, p: MatrixOperator) -> MatrixOperator:
        """Матричная реализация sum c Q^m P^n для заданных (Q, P)."""
        total = np.zeros_like(q.entries)
        for (m, n), coefficient in self.terms.items():
            total = total + coefficient * (
                np.linalg.matrix_power(q.entries, m) @ np.linalg.matrix_power(p.entries, n)
            )
        return MatrixOperator(total, q.representation)

    def __repr__(self) -> str:
        parts = [f"({c:.6g})Q^{m}P^{n}" for (m, n), c in sorted(self.terms.items())]
        return " + ".join(parts) or "0"


def _monomial_name(exponent: Exponent) -> str:
    factors = []
    for name, power in zip(VARIABLES, exponent):
        factors.extend([name] * power)
    return "*".join(factors) or "1"


@dataclass(frozen=True, eq=False)
class QuadraticSymbolForm:
    """
    Квадратичный символ z^T M z над z = (1, q, q', p, p').

    Блок (p, p') матрицы M есть массовая форма; ``cross_pp`` есть
    коэффициент при p p', он равен нулю тогда и только тогда, когда символ
    записывается как гамильтонова пара плюс линейный диссипативный дрейф.
    """
    matrix: np.ndarray
    hbar: float = 1.0

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=complex, copy=True)
        if matrix.shape != (5, 5):
            raise RejectedInputError(f"quadratic symbol matrix must be 5x5, got {matrix.shape}")
        if not self.hbar > 0:
            raise RejectedInputError(f"hbar must be positive, got {self.hbar}")
        matrix = 0.5 * (matrix + matrix.T)
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def from_monomials(cls, monomials: Mapping[Exponent, complex], hbar: float = 1.0) -> "QuadraticSymbolForm":
        """
        Args:
            monomials: Отображение (e_q, e_q', e_p, e_p') -> коэффициент

        Raises:
            UnsupportedFormError: полная степень выше 2 (включая массовые
                формы, зависящие от координаты)
        """
        matrix = np.zeros((5, 5), dtype=complex)
        for exponent, coefficient in monomials.items():
            if len(exponent) != 4 or any(e < 0 for e in exponent):
                raise RejectedInputError(f"bad monomial exponent {exponent}")
            if sum(exponent) > 2:
                if sum(exponent[2:]) >= 2:
                    raise UnsupportedFormError(
                        f"monomial {_monomial_name(exponent)} makes the mass form position dependent"
                    )
                raise UnsupportedFormError(f"monomial {_monomial_name(exponent)} has degree above 2")
            variables = [i + 1 for i, e in enumerate(exponent) for _ in range(e)]
            if not variables:
                matrix[0, 0] += coefficient
            elif len(variables) == 1:
                matrix[0, variables[0]] += 0.5 * coefficient
                matrix[variables[0], 0] += 0.5 * coefficient
            elif variables[0] == variables[1]:
                matrix[variables[0], variables[0]] += coefficient
            else:
                i, j = variables
                matrix[i, j] += 0.5 * coefficient
                matrix[j, i] += 0.5 * coefficient
        return cls(matrix, hbar)

    @classmethod
    def fit(cls, symbol: SymbolGrid, tol: float = 1e-8, stride: Optional[int] = None) -> "QuadraticSymbolForm":
        """
        Квадратичная аппроксимация выборочного символа методом наименьших квадратов.

        Raises:
            UnsupportedFormError: выборка не квадратична в пределах ``tol``
                (относительно наибольшего значения)
        """
        n = symbol.grid.points
        stride = stride or max(1, n // 8)
        index = np.arange(0, n, stride)
        q = symbol.grid.positions[index]
        p = symbol.momenta[index]
        axes = np.meshgrid(q, q, p, p, indexing="ij")
        samples = symbol.values[np.ix_(index, index, index, index)].reshape(-1)
        exponents = _quadratic_exponents()
        design = np.stack(
            [np.prod([ax.reshape(-1) ** e for ax, e in zip(axes, exponent)], axis=0) for exponent in exponents],
            axis=1,
        ).astype(complex)
        coefficients, *_ = np.linalg.lstsq(design, samples, rcond=None)
        form = cls.from_monomials(dict(zip(exponents, coefficients)), symbol.hbar)

        scale = max(1.0, float(np.max(np.abs(symbol.values))))
        x = symbol.grid.positions
        momenta = symbol.momenta
        for a in range(n):
            fitted = form.evaluate(x[a], x[:, None, None], momenta[None, :, None], momenta[None, None, :])
            if np.max(np.abs(fitted - symbol.values[a])) > tol * scale:
                raise UnsupportedFormError("symbol is not a quadratic polynomial on this grid")
        return form

    def coefficient(self, exponent: Exponent) -> complex:
        variables = [i + 1 for i, e in enumerate(exponent) for _ in range(e)]
        if not variables:
            return complex(self.matrix[0, 0])
        if len(variables) == 1:
            return complex(2.0 * self.matrix[0, variables[0]])
        if len(variables) == 2:
            i, j = variables
            return complex(self.matrix[i, j] if i == j else 2.0 * self.matrix[i, j])
        return 0j

    def monomials(self, tol: float = 0.0) -> Dict[Exponent, complex]:
        out = {}
        for exponent in _quadratic_exponents():
            value = self.coefficient(exponent)
            if abs(value) > tol:
                out[exponent] = value
        return out

    def named_monomials(self, tol: float = 0.0) -> Dict[str, complex]:
        return {_monomial_name(e): v for e, v in self.monomials(tol).items()}

    @property
    def mass_block(self) -> np.ndarray:
        """B с p-квадратичной частью (p, p') B (p, p')^T."""
        return self.matrix[3:, 3:]

    @property
    def cross_pp(self) -> complex:
        return self.coefficient((0, 0, 1, 1))

    @property
    def constant(self) -> complex:
        return complex(self.matrix[0, 0])

    def evaluate(self, q, q_prime, p, p_prime) -> np.ndarray:
        z = np.broadcast_arrays(
            np.ones_like(np.asarray(q, dtype=complex)), *(np.asarray(v, dtype=complex) for v in (q, q_prime, p, p_prime))
        )
        total = np.zeros(z[0].shape, dtype=complex)
        for i in range(5):
            for j in range(i, 5):
                weight = self.matrix[i, j] if i == j else 2.0 * self.matrix[i, j]
                if weight != 0:
                    total = total + weight * z[i] * z[j]
        return total

    def on_grid(self, grid: GridRepresentation) -> SymbolGrid:
        x = grid.positions
        p = grid.momenta(self.hbar)
        values = self.evaluate(
            x[:, None, None, None], x[None, :, None, None], p[None, None, :, None], p[None, None, None, :]
        )
        return SymbolGrid(grid, values, self.hbar)

    def _coerce(self, other: "QuadraticSymbolForm") -> "QuadraticSymbolForm":
        if other.hbar != self.hbar:
            raise RejectedInputError(f"hbar mismatch: {self.hbar} vs {other.hbar}")
        return other

    def __add__(self, other: "QuadraticSymbolForm") -> "QuadraticSymbolForm":
        return QuadraticSymbolForm(self.matrix + self._coerce(other).matrix, self.hbar)

    def __sub__(self, other: "QuadraticSymbolForm") -> "QuadraticSymbolForm":
        return QuadraticSymbolForm(self.matrix - self._coerce(other).matrix, self.hbar)

    def __mul__(self, scalar: complex) -> "QuadraticSymbolForm":
        return QuadraticSymbolForm(complex(scalar) * self.matrix, self.hbar)

    __rmul__ = __mul__


def _quadratic_exponents() -> Tuple[Exponent, ...]:
    exponents = [(0, 0, 0, 0)]
    for i in range(4):
        exponents.append(tuple(1 if k == i else 0 for k in range(4)))
    for i in range(4):
        for j in range(i, 4):
            exponents.append(tuple((k == i) + (k == j) for k in range(4)))
    return tuple(exponents)


def _embed(symbol: Mapping[Tuple[int, int], complex], primed: bool) -> Dict[Exponent, complex]:
    if primed:
        return {(0, m, 0, n): c for (m, n), c in symbol.items()}
    return {(m, 0, n, 0): c for (m, n), c in symbol.items()}


def lindblad_symbol_form(
        hamiltonian: OperatorPolynomial,
        lindblad_operators: Sequence[OperatorPolynomial] = ()
) -> QuadraticSymbolForm:
    """
    Символ генератора Линдблада.

    Lambda_S = -(i/hbar)[H(q,p) - H(p',q')]
               - (1/2hbar) sum_k [(V^dag V)(q,p) + (V^dag V)(p',q') - 2 V(q,p) V^dag(p',q')]

    где (q,p) qp-упорядоченные, а (p',q') pq-упорядоченные символы.

    Raises:
        UnsupportedFormError: степень H выше 2 или степень V выше 1
    """
    hbar = hamiltonian.hbar
    if hamiltonian.degree > 2:
        raise UnsupportedFormError(f"Hamiltonian of degree {hamiltonian.degree} is not quadratic")
    terms: Dict[Exponent, complex] = defaultdict(complex)
    for key, value in _embed(hamiltonian.qp_symbol(), primed=False).items():
        terms[key] += -1j / hbar * value
    for key, value in _embed(hamiltonian.pq_symbol(), primed=True).items():
        terms[key] += 1j / hbar * value

    for v in lindblad_operators:
        if v.hbar != hbar:
            raise RejectedInputError(f"hbar mismatch: {hbar} vs {v.hbar}")
        if v.degree > 1:
            raise UnsupportedFormError(f"Lindblad operator of degree {v.degree} is not linear")
        v_dag = v.dag()
        vv = v_dag * v
        for key, value in _embed(vv.qp_symbol(), primed=False).items():
            terms[key] += -0.5 / hbar * value
        for key, value in _embed(vv.pq_symbol(), primed=True).items():
            terms[key] += -0.5 / hbar * value
        for (m1, n1), c1 in v.qp_symbol().items():
            for (m2, n2), c2 in v_dag.pq_symbol().items():
                terms[(m1, m2, n1, n2)] += c1 * c2 / hbar
    return QuadraticSymbolForm.from_monomials(terms, hbar)


def lindblad_symbol(
        hamiltonian: OperatorPolynomial,
        lindblad_operators: Sequence[OperatorPolynomial],
        grid: GridRepresentation
) -> SymbolGrid:
    return lindblad_symbol_form(hamiltonian, lindblad_operators).on_grid(grid)


def oscillator_polynomials(params: OscillatorModelParams) -> Tuple[OperatorPolynomial, Tuple[OperatorPolynomial, ...]]:
    """H = P^2/2m + m w^2 Q^2/2 + mu (PQ+QP)/2 и V_k = a_k P + b_k Q для модели."""
    hbar = params.hbar
    q = OperatorPolynomial.position(hbar)
    p = OperatorPolynomial.momentum(hbar)
    hamiltonian = (
        (p * p) * (0.5 / params.mass)
        + (q * q) * (0.5 * params.mass * params.omega ** 2)
        + (p * q + q * p) * (0.5 * params.mu)
    )
    a, b = oscillator_amplitudes(params.coefficients, hbar)
    operators = tuple(
        p * complex(a_k) + q * complex(b_k)
        for a_k, b_k in zip(a, b)
        if abs(a_k) > 0 or abs(b_k) > 0
    )
    return hamiltonian, operators


def oscillator_symbol_form(params: OscillatorModelParams) -> QuadraticSymbolForm:
    """
    Гауссов показатель модели осциллятора в замкнутой форме.

    -(i/hbar)[H0(q,p) - H0(q',p')] + (1/hbar^2)[2 d_pq (q-q')(p-p') - d_qq (p-p')^2
    - d_pp (q-q')^2 + i hbar lam (p q' - q p') + i hbar mu (q' p' - q p)]

    где H0 = p^2/2m + m w^2 q^2/2. Постоянного члена нет; символ
    в порядке Линдблада отличается от него на константу (lam - mu).
    """
    hbar = params.hbar
    kinetic = 0.5 / params.mass
    potential = 0.5 * params.mass * params.omega ** 2
    h2 = hbar ** 2
    terms: Dict[Exponent, complex] = defaultdict(complex)
    terms[(0, 0, 2, 0)] += -1j / hbar * kinetic - params.d_qq / h2
    terms[(0, 0, 0, 2)] += 1j / hbar * kinetic - params.d_qq / h2
    terms[(0, 0, 1, 1)] += 2.0 * params.d_qq / h2
    terms[(2, 0, 0, 0)] += -1j / hbar * potential - params.d_pp / h2
    terms[(0, 2, 0, 0)] += 1j / hbar * potential - params.d_pp / h2
    terms[(1, 1, 0, 0)] += 2.0 * params.d_pp / h2
    terms[(1, 0, 1, 0)] += 2.0 * params.d_pq / h2 - 1j * params.mu / hbar
    terms[(0, 1, 0, 1)] += 2.0 * params.d_pq / h2 + 1j * params.mu / hbar
    terms[(0, 1, 1, 0)] += -2.0 * params.d_pq / h2 + 1j * params.lam / hbar
    terms[(1, 0, 0, 1)] += -2.0 * params.d_pq / h2 - 1j * params.lam / hbar
    return QuadraticSymbolForm.from_monomials(terms, hbar)


@dataclass(frozen=True)
class LagrangianForm:
    """
    L(q, qdot) = a qdot^2/2 + a b(q) qdot + a b(q)^2/2 - c(q)

    из H(q, p) = p^2/2a - b(q) p + c(q), b(q) = b0 + b1 q,
    c(q) = c1 q + c2 q^2.
    """
    mass: float
    b0: float = 0.0
    b1: float = 0.0
    c1: float = 0.0
    c2: float = 0.0

    def drift(self, q):
        return self.b0 + self.b1 * np.asarray(q)

    def potential(self, q):
        q = np.asarray(q)
        return self.c1 * q + self.c2 * q ** 2

    def evaluate(self, q, qdot):
        b = self.drift(q)
        qdot = np.asarray(qdot)
        return 0.5 * self.mass * qdot ** 2 + self.mass * b * qdot + 0.5 * self.mass * b ** 2 - self.potential(q)

    def coefficients(self) -> Dict[str, float]:
        """Коэффициенты мономов от (q, qdot)."""
        a, b0, b1 = self.mass, self.b0, self.b1
        return {
            "qdot^2": 0.5 * a,
            "qdot": a * b0,
            "q*qdot": a * b1,
            "1": 0.5 * a * b0 ** 2,
            "q": a * b0 * b1 - self.c1,
            "q^2": 0.5 * a * b1 ** 2 - self.c2,
        }


@dataclass(frozen=True)
class DissipativeDrift:
    """
    -d(q,q') p + d'(q,q') p' + e(q,q'), d и d' линейны, e квадратична.

    d и d' заданы тройками коэффициентов (константа, q, q'); e отображает
    имена мономов в коэффициенты.
    """
    d: Tuple[complex, complex, complex]
    d_prime: Tuple[complex, complex, complex]
    e: Dict[str, complex] = field(default_factory=dict)


@dataclass(frozen=True)
class SymbolVerdict:
    """Результат :func:`classify_symbol`."""
    reducible: bool
    reason: str
    cross_pp: complex
    lagrangian: Optional[LagrangianForm] = None
    drift: Optional[DissipativeDrift] = None
    # delta(0) * Delta(q, q'), Delta = -hbar^2 ln a; расходится, не вычисляется
    divergent_measure_factor: Optional[str] = None


def classify_symbol(form: QuadraticSymbolForm, tol: float = 1e-10) -> SymbolVerdict:
    """
    Решить, сводится ли квадратичный символ к интегралу по путям в конфигурационном пространстве.

    Сводится тогда и только тогда, когда нет члена p p', а квадратичная по импульсам часть
    равна -(i/hbar)[p^2/2a - p'^2/2a] с a > 0; оставшиеся линейные по импульсу
    и чисто координатные члены делятся на гамильтонов дрейф b(q),
    потенциал c(q) и диссипативный дрейф (d, d', e).

    Raises:
        UnsupportedFormError: кинетического члена нет совсем (массовая форма вырождена)
    """
    hbar = form.hbar
    scale = max(1.0, float(np.max(np.abs(form.matrix))))
    cross = form.cross_pp
    if abs(cross) > tol * scale:
        return SymbolVerdict(
            reducible=False,
            reason=f"symbol has a p*p' term with coefficient {cross:.6g}",
            cross_pp=cross,
        )

    kappa = form.coefficient((0, 0, 2, 0))
    kappa_prime = form.coefficient((0, 0, 0, 2))
    if abs(kappa) <= tol * scale and abs(kappa_prime) <= tol * scale:
        raise UnsupportedFormError("symbol has no kinetic term; the mass form is singular")

    # kappa = -i/(2 a hbar)  <=>  1/a = 2 i hbar kappa
    inverse_mass = 2j * hbar * kappa
    if abs(inverse_mass.imag) > tol * scale * hbar or inverse_mass.real <= 0:
        return SymbolVerdict(
            reducible=False,
            reason=f"p^2 coefficient {kappa:.6g} is not -i/(2 a hbar) with a > 0",
            cross_pp=cross,
        )
    if abs(kappa_prime + kappa) > tol * scale:
        return SymbolVerdict(
            reducible=False,
            reason=f"p'^2 coefficient {kappa_prime:.6g} does not mirror p^2 coefficient {kappa:.6g}",
            cross_pp=cross,
        )
    mass = 1.0 / inverse_mass.real

    c = form.coefficient
    alpha = (c((0, 0, 1, 0)), c((1, 0, 1, 0)), c((0, 1, 1, 0)))
    beta = (c((0, 0, 0, 1)), c((1, 0, 0, 1)), c((0, 1, 0, 1)))
    b0 = float((-1j * hbar * (alpha[0] - beta[0]) / 2.0).real)
    b1 = float((-1j * hbar * (alpha[1] - beta[2]) / 2.0).real)
    drift_unprimed = (-(alpha[0] - 1j / hbar * b0), -(alpha[1] - 1j / hbar * b1), -alpha[2])
    drift_primed = (beta[0] + 1j / hbar * b0, beta[1], beta[2] + 1j / hbar * b1)

    c1 = float((1j * hbar * (c(Q) - c(Q_PRIME)) / 2.0).real)
    c2 = float((1j * hbar * (c((2, 0, 0, 0)) - c((0, 2, 0, 0))) / 2.0).real)
    remainder = {
        (0, 0, 0, 0): c((0, 0, 0, 0)),
        Q: c(Q) + 1j / hbar * c1,
        Q_PRIME: c(Q_PRIME) - 1j / hbar * c1,
        (2, 0, 0, 0): c((2, 0, 0, 0)) + 1j / hbar * c2,
        (0, 2, 0, 0): c((0, 2, 0, 0)) - 1j / hbar * c2,
        (1, 1, 0, 0): c((1, 1, 0, 0)),
    }
    e = {_monomial_name(k): v for k, v in remainder.items() if abs(v) > tol * scale}

    lagrangian = LagrangianForm(mass=mass, b0=b0, b1=b1, c1=c1, c2=c2)
    logger.debug(f"Символ сводится: {lagrangian}")
    return SymbolVerdict(
        reducible=True,
        reason="no p*p' term; momentum dependence is Hamiltonian plus linear drift",
        cross_pp=cross,
        lagrangian=lagrangian,
        drift=DissipativeDrift(drift_unprimed, drift_primed, e),
        divergent_measure_factor=f"delta(0) * Delta(q, q'), Delta = -hbar^2 ln({mass:.6g})",
    )


def named_terms(form: QuadraticSymbolForm, tol: float = 0.0) -> Iterable[Tuple[str, complex]]:
    return sorted(form.named_monomials(tol).items())
