"""
Распространение операторов плотности по временным шагам.

Квантовая операция E(t, t0) есть упорядоченное слева произведение факторов
короткого шага (I + tau Lambda_{t_{k-1}}), дискретная форма T-экспоненты;
ее ядро есть дискретизованный интеграл по путям в двойном фазовом пространстве.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterator, Tuple, Union

import numpy as np
import scipy.linalg

from ..exceptions import RejectedInputError, ZeroProbabilityError
from .liouville_core import MatrixOperator, SuperOperator

logger = logging.getLogger(__name__)

Schedule = Union[SuperOperator, Callable[[float], SuperOperator]]

DENSITY_TOL = 1e-10
TIME_TOL = 1e-12
SLICE_MODES = ("euler", "exponential")


@dataclass(frozen=True, eq=False)
class QuantumOperation:
    """Супероператор E(t, t0) вместе с временным интервалом и происхождением."""
    superop: SuperOperator
    time_span: Tuple[float, float] = (0.0, 0.0)
    metadata: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def identity(cls, dim: int, t: float = 0.0, representation=None) -> "QuantumOperation":
        return cls(SuperOperator.identity(dim, representation), (t, t), {"generator": "identity", "slices": 0})

    @property
    def dim(self) -> int:
        return self.superop.dim

    @property
    def duration(self) -> float:
        return self.time_span[1] - self.time_span[0]

    def apply(self, rho: MatrixOperator) -> MatrixOperator:
        return self.superop.apply(rho)

    __call__ = apply


def short_time_kernel(generator: SuperOperator, tau: float) -> SuperOperator:
    """delta delta + tau Lambda, т.е. I + tau L в виде матрицы супероператора."""
    if not tau > 0:
        raise RejectedInputError(f"tau must be positive, got {tau}")
    return SuperOperator.identity(generator.dim, generator.representation) + generator * tau


def compose(later: QuantumOperation, earlier: QuantumOperation) -> QuantumOperation:
    """
    Полугрупповая композиция E(t, t0) = E(t, t1) E(t1, t0).

    Raises:
        RejectedInputError: ``earlier`` заканчивается не там, где начинается ``later``
    """
    t1_end = earlier.time_span[1]
    t1_start = later.time_span[0]
    if abs(t1_end - t1_start) > TIME_TOL * max(1.0, abs(t1_end), abs(t1_start)):
        raise RejectedInputError(
            f"cannot compose: first operation ends at {t1_end}, second starts at {t1_start}"
        )
    metadata = {
        "generator": f"({later.metadata.get('generator', '?')}) o ({earlier.metadata.get('generator', '?')})",
        "slices": later.metadata.get("slices", 0) + earlier.metadata.get("slices", 0),
    }
    return QuantumOperation(later.superop @ earlier.superop, (earlier.time_span[0], later.time_span[1]), metadata)


class TrotterPropagator:
    """Упорядоченное слева произведение факторов короткого шага по расписанию генераторов."""

    def __init__(self, schedule: Schedule, mode: str = "euler"):
        """
        Args:
            schedule: Постоянный генератор или функция t -> генератор, берется
                в левом конце каждого шага
            mode: "euler" для I + tau Lambda, "exponential" для exp(tau Lambda)
        """
        if mode not in SLICE_MODES:
            raise RejectedInputError(f"unknown slice mode {mode!r}; expected one of {SLICE_MODES}")
        self.schedule = schedule
        self.mode = mode
        self.logger = logging.getLogger(__name__)

    def generator_at(self, t: float) -> SuperOperator:
        if isinstance(self.schedule, SuperOperator):
            return self.schedule
        return self.schedule(t)

    def slice_factor(self, t: float, tau: float) -> np.ndarray:
        generator = self.generator_at(t)
        if self.mode == "exponential":
            return scipy.linalg.expm(tau * generator.matrix)
        return short_time_kernel(generator, tau).matrix

    @staticmethod
    def _check_span(t0: float, t: float, n_slices: int) -> float:
        if t < t0:
            raise RejectedInputError(f"final time {t} precedes initial time {t0}")
        if n_slices < 1:
            raise RejectedInputError(f"n_slices must be >= 1, got {n_slices}")
        return (t - t0) / n_slices

    def propagate(self, t0: float, t: float, n_slices: int) -> QuantumOperation:
        tau = self._check_span(t0, t, n_slices)
        first = self.generator_at(t0)
        product = np.eye(first.dim ** 2, dtype=complex)
        if tau > 0:
            for k in range(n_slices):
                product = self.slice_factor(t0 + k * tau, tau) @ product
                if (k + 1) % 256 == 0:
                    self.logger.debug(f"Шаг {k + 1}/{n_slices}")
        metadata = {"generator": f"trotter[{self.mode}]", "slices": n_slices}
        return QuantumOperation(SuperOperator(product, first.representation), (t0, t), metadata)

    def trajectory(
            self,
            rho0: MatrixOperator,
            t0: float,
            t: float,
            n_slices: int
    ) -> Iterator[Tuple[float, MatrixOperator]]:
        """Выдает (t_k, rho_k) на каждой границе шага, начиная с (t0, rho0)."""
        tau = self._check_span(t0, t, n_slices)
        state = rho0.entries.reshape(-1)
        yield t0, rho0
        for k in range(n_slices):
            if tau > 0:
                state = self.slice_factor(t0 + k * tau, tau) @ state
            yield t0 + (k + 1) * tau, MatrixOperator(state.reshape(rho0.dim, rho0.dim), rho0.representation)


def trotter_propagate(
        schedule: Schedule,
        t0: float,
        t: float,
        n_slices: int,
        mode: str = "euler"
) -> QuantumOperation:
    """prod_{k=n..1} (I + tau Lambda_{t_{k-1}}), tau = (t - t0)/n."""
    return TrotterPropagator(schedule, mode).propagate(t0, t, n_slices)


def iter_trotter(
        schedule: Schedule,
        rho0: MatrixOperator,
        t0: float,
        t: float,
        n_slices: int,
        mode: str = "euler"
) -> Iterator[Tuple[float, MatrixOperator]]:
    return TrotterPropagator(schedule, mode).trajectory(rho0, t0, t, n_slices)


def check_density_matrix(rho: MatrixOperator, tol: float = DENSITY_TOL) -> None:
    """RejectedInputError, если rho не эрмитова, не PSD или след не равен 1 в пределах tol."""
    if rho.hermiticity_residue() > tol:
        raise RejectedInputError(f"density matrix is not Hermitian (residue {rho.hermiticity_residue():.3e})")
    trace = rho.trace()
    if abs(trace - 1.0) > tol:
        raise RejectedInputError(f"density matrix trace is {trace.real:.12g}, expected 1")
    smallest = float(scipy.linalg.eigvalsh(0.5 * (rho.entries + rho.entries.conj().T))[0])
    if smallest < -tol:
        raise RejectedInputError(f"density matrix has negative eigenvalue {smallest:.3e}")


def operation_probability(
        operation: QuantumOperation,
        rho: MatrixOperator,
        tol: float = DENSITY_TOL
) -> float:
    """(I|E|rho) = Tr E(rho)."""
    check_density_matrix(rho, tol)
    return float(operation.apply(rho).trace().real)


def normalize_operation(
        operation: QuantumOperation,
        rho: MatrixOperator,
        tol: float = 1e-12
) -> MatrixOperator:
    """
    Нелинейная нормированная операция N(rho) = E(rho) / Tr E(rho).

    Raises:
        ZeroProbabilityError: Tr E(rho) <= tol
    """
    probability = operation_probability(operation, rho)
    if probability <= tol:
        raise ZeroProbabilityError(probability, tol)
    return operation.apply(rho) * (1.0 / probability)
