"""Генераторы Линдблада: общая форма, квадратичная модель осциллятора, проверка."""

import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from ..exceptions import RejectedInputError
from ..models.oscillator import DiffusionCoefficients, OscillatorModelParams
from ..models.representation import FockRepresentation, GridRepresentation, Representation
from ..utils.operators import fock_quadratures, grid_quadratures
from .liouville_core import (
    MatrixOperator,
    SuperOperator,
    adjoint_superoperator,
    identity_operator,
    lie_jordan_superoperators,
    multiplication_superoperators,
    vectorize,
)

logger = logging.getLogger(__name__)

HERMITICITY_TOL = 1e-12
CP_CHECK_TIMES = (1e-2, 1e-1)


@dataclass(frozen=True, eq=False)
class LindbladGenerator:
    """Гамильтониан H (энергия) и операторы Линдблада V_k (sqrt(энергии))."""
    hamiltonian: MatrixOperator
    lindblad_operators: Tuple[MatrixOperator, ...] = ()
    hbar: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "lindblad_operators", tuple(self.lindblad_operators))
        if not self.hbar > 0:
            raise RejectedInputError(f"hbar must be positive, got {self.hbar}")
        h = self.hamiltonian
        for v in self.lindblad_operators:
            if v.dim != h.dim:
                raise RejectedInputError(
                    f"Lindblad operator dim {v.dim} does not match Hamiltonian dim {h.dim}"
                )
            if v.representation != h.representation:
                raise RejectedInputError(
                    f"representation mismatch: {v.representation} vs {h.representation}"
                )
        if not h.is_hermitian(HERMITICITY_TOL):
            raise RejectedInputError(
                f"Hamiltonian is not Hermitian (residue {h.hermiticity_residue():.3e})"
            )

    @property
    def dim(self) -> int:
        return self.hamiltonian.dim


@dataclass(frozen=True)
class GeneratorReport:
    """Результат :func:`verify_generator`."""
    is_real: bool
    preserves_trace: bool
    cp_flow: bool
    reality_residue: float
    trace_residue: float
    min_choi_eigenvalue: float

    @property
    def ok(self) -> bool:
        return self.is_real and self.preserves_trace and self.cp_flow


def build_generator(generator: LindbladGenerator) -> SuperOperator:
    """
    Супероператор Лиувилля квантового марковского основного уравнения.

    Lambda = -(i/hbar)(L_H - R_H)
             + (1/2hbar) sum_k (2 L_{V_k} R_{V_k^dag} - L_{V_k^dag V_k} - R_{V_k^dag V_k})

    Порядок множителей согласован с композицией и совпадает с коммутаторной формой
    [V rho, V^dag] + [V, rho V^dag].
    """
    hbar = generator.hbar
    left_h, right_h = multiplication_superoperators(generator.hamiltonian)
    total = (left_h - right_h) * (-1j / hbar)
    for v in generator.lindblad_operators:
        v_dag = v.dag()
        left_v, _ = multiplication_superoperators(v)
        _, right_v_dag = multiplication_superoperators(v_dag)
        left_vv, right_vv = multiplication_superoperators(v_dag @ v)
        total = total + (left_v @ right_v_dag * 2.0 - left_vv - right_vv) * (0.5 / hbar)
    logger.debug(
        f"Построен генератор dim={generator.dim}, операторов Линдблада: "
        f"{len(generator.lindblad_operators)}"
    )
    return total


def oscillator_coefficients(
        a: Sequence[complex],
        b: Sequence[complex],
        hbar: float = 1.0
) -> DiffusionCoefficients:
    """
    Коэффициенты диффузии для V_k = a_k P + b_k Q.

    d_qq = (hbar/2) sum |a_k|^2, d_pp = (hbar/2) sum |b_k|^2,
    d_pq = -(hbar/2) Re sum a_k^* b_k, lambda = -Im sum a_k^* b_k.
    """
    if not hbar > 0:
        raise RejectedInputError(f"hbar must be positive, got {hbar}")
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise RejectedInputError(f"amplitude shapes differ: {a.shape} vs {b.shape}")
    s = complex(np.sum(a.conj() * b))
    return DiffusionCoefficients(
        d_qq=0.5 * hbar * float(np.sum(np.abs(a) ** 2)),
        d_pp=0.5 * hbar * float(np.sum(np.abs(b) ** 2)),
        d_pq=-0.5 * hbar * s.real,
        lam=-s.imag,
    )


def oscillator_amplitudes(
        coefficients: DiffusionCoefficients,
        hbar: float = 1.0,
        tol: float = 1e-12
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Две пары амплитуд (a_1, a_2), (b_1, b_2), воспроизводящие ``coefficients``.

    Раскладывает эрмитову матрицу [[2 d_qq/hbar, s], [s^*, 2 d_pp/hbar]], где
    s = sum a^* b = -2 d_pq/hbar - i lambda, в виде C^dag C; строки C = (a_k, b_k).

    Raises:
        RejectedInputError: d_qq d_pp - d_pq^2 < (hbar lambda/2)^2, т.е. никакие
            операторы Линдблада вида aP + bQ не дают этих коэффициентов
    """
    if not hbar > 0:
        raise RejectedInputError(f"hbar must be positive, got {hbar}")
    s = -2.0 * coefficients.d_pq / hbar - 1j * coefficients.lam
    gram = np.array([
        [2.0 * coefficients.d_qq / hbar, s],
        [np.conj(s), 2.0 * coefficients.d_pp / hbar],
    ], dtype=complex)
    eigenvalues, eigenvectors = np.linalg.eigh(gram)
    scale = max(1.0, float(np.max(np.abs(eigenvalues))))
    if eigenvalues[0] < -tol * scale:
        raise RejectedInputError(
            f"coefficients admit no Lindblad amplitudes: margin "
            f"{coefficients.cp_margin(hbar):.3e} < 0"
        )
    c = np.sqrt(np.clip(eigenvalues, 0.0, None))[:, None] * eigenvectors.conj().T
    return c[:, 0].copy(), c[:, 1].copy()


def fock_operators(
        dim: int,
        mass: float = 1.0,
        omega: float = 1.0,
        hbar: float = 1.0
) -> Tuple[MatrixOperator, MatrixOperator]:
    """(Q, P) через лестничные операторы в усеченном числовом базисе."""
    return quadrature_operators(FockRepresentation(dim), mass, omega, hbar)


def grid_operators(grid: GridRepresentation, hbar: float = 1.0) -> Tuple[MatrixOperator, MatrixOperator]:
    """Диагональный Q и спектральный P на периодической сетке."""
    return quadrature_operators(grid, hbar=hbar)


def quadrature_operators(
        representation: Representation,
        mass: float = 1.0,
        omega: float = 1.0,
        hbar: float = 1.0
) -> Tuple[MatrixOperator, MatrixOperator]:
    """(Q, P) в заданном представлении."""
    if isinstance(representation, FockRepresentation):
        q, p = fock_quadratures(representation.dim, mass, omega, hbar)
    elif isinstance(representation, GridRepresentation):
        q, p = grid_quadratures(representation.positions, hbar)
    else:
        raise RejectedInputError(f"representation {representation!r} defines no momentum operator")
    return MatrixOperator(q, representation), MatrixOperator(p, representation)


def oscillator_hamiltonian(params: OscillatorModelParams, q: MatrixOperator, p: MatrixOperator) -> MatrixOperator:
    """H = P^2/2m + m w^2 Q^2/2 + mu (PQ + QP)/2."""
    return (
        (p @ p) * (0.5 / params.mass)
        + (q @ q) * (0.5 * params.mass * params.omega ** 2)
        + (p @ q + q @ p) * (0.5 * params.mu)
    )


def oscillator_lindblad_operators(
        a: Sequence[complex],
        b: Sequence[complex],
        q: MatrixOperator,
        p: MatrixOperator
) -> Tuple[MatrixOperator, ...]:
    """V_k = a_k P + b_k Q; нулевые пары пропускаются."""
    return tuple(
        p * complex(a_k) + q * complex(b_k)
        for a_k, b_k in zip(a, b)
        if abs(a_k) > 0 or abs(b_k) > 0
    )


def build_oscillator_generator(params: OscillatorModelParams, representation: Representation) -> SuperOperator:
    """
    Супероператор квадратичной диссипативной модели, по членам в L^{+-}.

    (1/m) L+_P L-_P + m w^2 L+_Q L-_Q
    - (lam - mu) L-_P L+_Q + (lam + mu) L-_Q L+_P
    + d_pp L-_Q L-_Q + d_qq L-_P L-_P - 2 d_pq L-_P L-_Q

    Первая строка есть L-_H для H без члена mu; вклады mu из второй строки
    в сумме дают L- от mu (PQ+QP)/2.
    """
    hbar = params.hbar
    q, p = quadrature_operators(representation, params.mass, params.omega, hbar)
    lm_q, lp_q = lie_jordan_superoperators(q, hbar)
    lm_p, lp_p = lie_jordan_superoperators(p, hbar)

    generator = (
        lp_p @ lm_p * (1.0 / params.mass)
        + lp_q @ lm_q * (params.mass * params.omega ** 2)
        - lm_p @ lp_q * (params.lam - params.mu)
        + lm_q @ lp_p * (params.lam + params.mu)
        + lm_q @ lm_q * params.d_pp
        + lm_p @ lm_p * params.d_qq
        - lm_p @ lm_q * (2.0 * params.d_pq)
    )
    logger.debug(f"Построен генератор осциллятора в {representation}")
    return generator


def verify_generator(s: SuperOperator, tol: float = 1e-10) -> GeneratorReport:
    """
    Проверить вещественность, сохранение следа и полную положительность потока.

    Args:
        s: Проверяемый генератор
        tol: Допуск относительно наибольшего элемента ``s``
             (и спектра Чоя для проверки CP)

    Returns:
        GeneratorReport; при неудачной проверке исключений не бросает
    """
    from .oracle import exact_propagator
    from .channels import choi_matrix

    d = s.dim
    scale = max(1.0, float(np.max(np.abs(s.matrix), initial=0.0)))

    # S(E_ij)[a, b] должно совпадать с conj(S(E_ji)[b, a]) на каждой матричной единице
    blocks = s.matrix.reshape(d, d, d, d)
    reality_residue = float(np.max(np.abs(blocks - blocks.conj().transpose(1, 0, 3, 2))))

    identity = vectorize(identity_operator(d, s.representation))
    trace_residue = float(np.linalg.norm(adjoint_superoperator(s).apply(identity).components))

    min_eigenvalue = np.inf
    cp_flow = True
    for tau in CP_CHECK_TIMES:
        try:
            flow = exact_propagator(s, tau)
        except RejectedInputError as e:
            logger.warning(f"⚠️  Проверка CP пропущена: {e}")
            min_eigenvalue, cp_flow = float("nan"), False
            break
        spectrum = choi_matrix(flow).eigenvalues()
        min_eigenvalue = min(min_eigenvalue, float(spectrum[-1]))
        if spectrum[-1] < -tol * max(1.0, float(spectrum[0])):
            cp_flow = False

    report = GeneratorReport(
        is_real=reality_residue <= tol * scale,
        preserves_trace=trace_residue <= tol * scale,
        cp_flow=cp_flow,
        reality_residue=reality_residue,
        trace_residue=trace_residue,
        min_choi_eigenvalue=min_eigenvalue,
    )
    logger.info(
        f"Проверка генератора: real={report.is_real} trace={report.preserves_trace} "
        f"cp={report.cp_flow} (мин. собственное значение Чоя {min_eigenvalue:.3e})"
    )
    return report
