"""
Эталонные пропагаторы для проверки пошаговой конструкции.

Плотная матричная экспонента, классический RK4 с постоянным шагом для основного
кинетического уравнения и замкнутые уравнения первых и вторых моментов осциллятора.
"""

import logging
from dataclasses import dataclass
from typing import Iterator, List, Tuple, Union

import numpy as np
import scipy.linalg

from ..exceptions import RejectedInputError
from ..models.oscillator import OscillatorModelParams
from .liouville_core import MatrixOperator, SuperOperator
from .propagator import QuantumOperation, Schedule

logger = logging.getLogger(__name__)

MAX_PROPAGATOR_NORM = 1e6
COVARIANCE_SLACK = 1e-10


def exact_propagator(generator: SuperOperator, t: float, t0: float = 0.0) -> QuantumOperation:
    """
    exp(t L) через аппроксимант Паде scipy с масштабированием и возведением в квадрат.

    Raises:
        RejectedInputError: экспонента переполняется
    """
    with np.errstate(over="ignore", invalid="ignore"):
        matrix = scipy.linalg.expm(t * generator.matrix)
    if not np.all(np.isfinite(matrix)) or np.max(np.abs(matrix)) > MAX_PROPAGATOR_NORM:
        raise RejectedInputError(f"exp(tL) overflows for t={t}, |L|={generator.norm():.3e}")
    metadata = {"generator": "expm", "slices": 0}
    return QuantumOperation(SuperOperator(matrix, generator.representation), (t0, t0 + t), metadata)


def _generator_at(schedule: Union[SuperOperator, Schedule], t: float) -> np.ndarray:
    if isinstance(schedule, SuperOperator):
        return schedule.matrix
    return schedule(t).matrix


def iter_rk4(
        schedule: Union[SuperOperator, Schedule],
        rho0: MatrixOperator,
        t: float,
        steps: int,
        t0: float = 0.0
) -> Iterator[Tuple[float, MatrixOperator]]:
    """Выдает (t_k, rho_k) для k = 0..steps классического метода Рунге-Кутты 4-го порядка."""
    if steps < 1:
        raise RejectedInputError(f"steps must be >= 1, got {steps}")
    h = t / steps
    state = rho0.entries.reshape(-1).astype(complex)
    yield t0, rho0
    for k in range(steps):
        s = t0 + k * h
        lo = _generator_at(schedule, s)
        mid = lo if isinstance(schedule, SuperOperator) else _generator_at(schedule, s + 0.5 * h)
        hi = lo if isinstance(schedule, SuperOperator) else _generator_at(schedule, s + h)
        k1 = lo @ state
        k2 = mid @ (state + 0.5 * h * k1)
        k3 = mid @ (state + 0.5 * h * k2)
        k4 = hi @ (state + h * k3)
        state = state + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        yield s + h, MatrixOperator(state.reshape(rho0.dim, rho0.dim), rho0.representation)


def rk4_propagate(
        schedule: Union[SuperOperator, Schedule],
        rho0: MatrixOperator,
        t: float,
        steps: int,
        t0: float = 0.0
) -> MatrixOperator:
    rho = rho0
    for _, rho in iter_rk4(schedule, rho0, t, steps, t0):
        pass
    return rho


def stationary_state(generator: SuperOperator) -> MatrixOperator:
    """
    Неподвижная точка потока: нуль-вектор L, эрмитизованный и с единичным следом.

    Raises:
        RejectedInputError: след нуль-вектора равен нулю
    """
    _, singular_values, vh = scipy.linalg.svd(generator.matrix)
    vector = vh[-1].conj()
    d = generator.dim
    rho = vector.reshape(d, d)
    trace = np.trace(rho)
    if abs(trace) < 1e-12:
        raise RejectedInputError("generator has no unit-trace stationary state")
    rho = rho / trace
    rho = 0.5 * (rho + rho.conj().T)
    logger.debug(f"Невязка стационарного состояния {singular_values[-1]:.3e}")
    return MatrixOperator(rho, generator.representation)


@dataclass(frozen=True)
class MomentState:
    """Первые и симметризованные вторые моменты (Q, P)."""
    mean_q: float
    mean_p: float
    var_qq: float
    var_pp: float
    cov_qp: float

    @classmethod
    def from_vector(cls, vector) -> "MomentState":
        mean_q, mean_p, var_qq, var_pp, cov_qp = (float(v) for v in vector)
        return cls(mean_q, mean_p, var_qq, var_pp, cov_qp)

    @classmethod
    def from_density_matrix(cls, rho: MatrixOperator, q: MatrixOperator, p: MatrixOperator) -> "MomentState":
        def expect(a: np.ndarray) -> float:
            return float(np.trace(rho.entries @ a).real)

        qe, pe = q.entries, p.entries
        mean_q, mean_p = expect(qe), expect(pe)
        return cls(
            mean_q=mean_q,
            mean_p=mean_p,
            var_qq=expect(qe @ qe) - mean_q ** 2,
            var_pp=expect(pe @ pe) - mean_p ** 2,
            cov_qp=0.5 * expect(qe @ pe + pe @ qe) - mean_q * mean_p,
        )

    def as_vector(self) -> np.ndarray:
        return np.array([self.mean_q, self.mean_p, self.var_qq, self.var_pp, self.cov_qp])

    def is_physical(self, slack: float = COVARIANCE_SLACK) -> bool:
        return (
            self.var_qq >= -slack
            and self.var_pp >= -slack
            and self.var_qq * self.var_pp - self.cov_qp ** 2 >= -slack
        )

    def energy(self, params: OscillatorModelParams) -> float:
        """<P^2>/2m + m w^2 <Q^2>/2."""
        p2 = self.var_pp + self.mean_p ** 2
        q2 = self.var_qq + self.mean_q ** 2
        return p2 / (2.0 * params.mass) + 0.5 * params.mass * params.omega ** 2 * q2


def moment_equations(params: OscillatorModelParams) -> Tuple[np.ndarray, np.ndarray]:
    """
    Аффинная система x' = M x + b для x = (<Q>, <P>, s_qq, s_pp, s_qp).

    d<Q>/dt = <P>/m - (lam - mu)<Q>
    d<P>/dt = -m w^2 <Q> - (lam + mu)<P>
    ds_qq/dt = -2(lam - mu) s_qq + (2/m) s_qp + 2 d_qq
    ds_pp/dt = -2(lam + mu) s_pp - 2 m w^2 s_qp + 2 d_pp
    ds_qp/dt = -m w^2 s_qq + s_pp/m - 2 lam s_qp + 2 d_pq
    """
    m, w2 = params.mass, params.omega ** 2
    lam, mu = params.lam, params.mu
    matrix = np.array([
        [-(lam - mu), 1.0 / m, 0.0, 0.0, 0.0],
        [-m * w2, -(lam + mu), 0.0, 0.0, 0.0],
        [0.0, 0.0, -2.0 * (lam - mu), 0.0, 2.0 / m],
        [0.0, 0.0, 0.0, -2.0 * (lam + mu), -2.0 * m * w2],
        [0.0, 0.0, -m * w2, 1.0 / m, -2.0 * lam],
    ])
    drive = np.array([0.0, 0.0, 2.0 * params.d_qq, 2.0 * params.d_pp, 2.0 * params.d_pq])
    return matrix, drive


class MomentIntegrator:
    """Точный шаг уравнений для моментов через расширенную экспоненту."""

    def __init__(self, params: OscillatorModelParams):
        self.params = params
        self.matrix, self.drive = moment_equations(params)
        self.logger = logging.getLogger(__name__)

    def step_matrix(self, h: float) -> np.ndarray:
        augmented = np.zeros((6, 6))
        augmented[:5, :5] = self.matrix
        augmented[:5, 5] = self.drive
        return scipy.linalg.expm(h * augmented)

    def trajectory(self, m0: MomentState, t: float, steps: int) -> List[Tuple[float, MomentState]]:
        if steps < 1:
            raise RejectedInputError(f"steps must be >= 1, got {steps}")
        h = t / steps
        step = self.step_matrix(h)
        state = np.append(m0.as_vector(), 1.0)
        out = [(0.0, m0)]
        for k in range(steps):
            state = step @ state
            out.append(((k + 1) * h, MomentState.from_vector(state[:5])))
        final = out[-1][1]
        if not final.is_physical():
            self.logger.warning(f"⚠️  Моменты вышли из физической области: {final}")
        return out

    def stationary(self) -> MomentState:
        try:
            vector = scipy.linalg.solve(self.matrix, -self.drive)
        except scipy.linalg.LinAlgError as e:
            raise RejectedInputError(f"moment equations have no unique fixed point: {e}") from e
        return MomentState.from_vector(vector)


def evolve_moments(params: OscillatorModelParams, m0: MomentState, t: float, steps: int) -> MomentState:
    return MomentIntegrator(params).trajectory(m0, t, steps)[-1][1]


def moment_trajectory(
        params: OscillatorModelParams,
        m0: MomentState,
        t: float,
        steps: int
) -> List[Tuple[float, MomentState]]:
    return MomentIntegrator(params).trajectory(m0, t, steps)


def stationary_moments(params: OscillatorModelParams) -> MomentState:
    """
    Raises:
        RejectedInputError: матрица моментов вырождена (нет затухания)
    """
    return MomentIntegrator(params).stationary()
