"""
Ядра, символы и шаг интеграла по путям на координатной сетке.

Ядро и символ образуют фурье-пару

    S(q,q',p,p') = int dy dy' K(q,q',y,y') exp(-(i/hbar)[(q-y)p - (q'-y')p'])
    K(q,q',y,y') = (2 pi hbar)^-2 int dp dp' S exp((i/hbar)[(q-y)p - (q'-y')p'])

она реализована суммами с весами dx^2 и (dp/2 pi hbar)^2; на сопряженной по ДПФ
импульсной сетке дискретная пара взаимно обратна.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
import scipy.fft

from ..exceptions import RejectedInputError, UnsupportedFormError
from ..models.grids import KernelGrid, SymbolGrid
from ..models.representation import GridRepresentation
from .liouville_core import SuperOperator
from .symbols import OperatorPolynomial, QuadraticSymbolForm

logger = logging.getLogger(__name__)

DEGENERACY_TOL = 1e-12


def _require_power_of_two(grid: GridRepresentation) -> None:
    if not grid.is_power_of_two:
        raise RejectedInputError(f"grid size {grid.points} is not a power of two")


def _axis_shape(ndim: int, axis: int, n: int):
    shape = [1] * ndim
    shape[axis] = n
    return shape


def _alternating(n: int) -> np.ndarray:
    return 1.0 - 2.0 * (np.arange(n) % 2)


def _position_sum(values: np.ndarray, axis: int, sign: int, grid: GridRepresentation, hbar: float) -> np.ndarray:
    """sum_j values_j exp(sign i y_j p_k / hbar) вдоль ``axis`` (индекс j -> k)."""
    n = grid.points
    shape = _axis_shape(values.ndim, axis, n)
    alternating = _alternating(n).reshape(shape)
    phase = np.exp(sign * 1j * grid.positions[0] * grid.momenta(hbar) / hbar).reshape(shape)
    if sign > 0:
        summed = n * scipy.fft.ifft(values * alternating, axis=axis)
    else:
        summed = scipy.fft.fft(values * alternating, axis=axis)
    return phase * summed


def _momentum_sum(values: np.ndarray, axis: int, sign: int, grid: GridRepresentation, hbar: float) -> np.ndarray:
    """sum_k values_k exp(sign i y_j p_k / hbar) вдоль ``axis`` (индекс k -> j)."""
    n = grid.points
    shape = _axis_shape(values.ndim, axis, n)
    phase = np.exp(sign * 1j * grid.positions[0] * grid.momenta(hbar) / hbar).reshape(shape)
    if sign > 0:
        summed = n * scipy.fft.ifft(values * phase, axis=axis)
    else:
        summed = scipy.fft.fft(values * phase, axis=axis)
    return _alternating(n).reshape(shape) * summed


def kernel_symbol_transform(kernel: KernelGrid, hbar: float = 1.0) -> SymbolGrid:
    """Символ ядра, по одному q-слою за раз."""
    grid = kernel.grid
    _require_power_of_two(grid)
    x, p = grid.positions, grid.momenta(hbar)
    primed_phase = np.exp(1j * np.outer(x, p) / hbar)[:, None, :]
    symbol = np.empty_like(kernel.values)
    for a in range(grid.points):
        summed = _position_sum(kernel.values[a], 1, +1, grid, hbar)
        summed = _position_sum(summed, 2, -1, grid, hbar)
        symbol[a] = grid.spacing ** 2 * np.exp(-1j * x[a] * p / hbar)[None, :, None] * primed_phase * summed
    return SymbolGrid(grid, symbol, hbar)


def symbol_kernel_transform(symbol: SymbolGrid) -> KernelGrid:
    """Обратное к :func:`kernel_symbol_transform`."""
    grid, hbar = symbol.grid, symbol.hbar
    _require_power_of_two(grid)
    x, p = grid.positions, symbol.momenta
    primed_phase = np.exp(-1j * np.outer(x, p) / hbar)[:, None, :]
    weight = (symbol.momentum_spacing / (2.0 * np.pi * hbar)) ** 2
    kernel = np.empty_like(symbol.values)
    for a in range(grid.points):
        shifted = symbol.values[a] * np.exp(1j * x[a] * p / hbar)[None, :, None] * primed_phase
        summed = _momentum_sum(shifted, 1, -1, grid, hbar)
        kernel[a] = weight * _momentum_sum(summed, 2, +1, grid, hbar)
    return KernelGrid(grid, kernel)


def kernel_from_superoperator(superop: SuperOperator, grid: Optional[GridRepresentation] = None) -> KernelGrid:
    """Ядро с континуальной нормировкой: matrix / dx^2."""
    grid = grid or superop.representation
    if not isinstance(grid, GridRepresentation):
        raise RejectedInputError(f"superoperator is not on a position grid ({grid})")
    if grid.points != superop.dim:
        raise RejectedInputError(f"grid size {grid.points} does not match superoperator dim {superop.dim}")
    return KernelGrid(grid, superop.kernel() / grid.spacing ** 2)


def kernel_to_superoperator(kernel: KernelGrid) -> SuperOperator:
    return SuperOperator(kernel.to_matrix(), kernel.grid)


def superoperator_symbol(superop: SuperOperator, hbar: float = 1.0) -> SymbolGrid:
    return kernel_symbol_transform(kernel_from_superoperator(superop), hbar)


def compose_kernels(later: KernelGrid, earlier: KernelGrid) -> KernelGrid:
    """dx^2 sum_{q1, q1'} K2(q, q', q1, q1') K1(q1, q1', y, y')."""
    if later.grid != earlier.grid:
        raise RejectedInputError(f"grid mismatch: {later.grid} vs {earlier.grid}")
    n = later.points
    product = later.values.reshape(n * n, n * n) @ earlier.values.reshape(n * n, n * n)
    return KernelGrid(later.grid, later.grid.spacing ** 2 * product.reshape((n,) * 4))


class GaussianShortTimeKernel:
    """
    Импульсный интеграл одного шага интеграла по путям в замкнутой форме.

    int dp dp'/(2 pi hbar)^2 exp{(i/hbar)[(q-y)p - (q'-y')p'] + tau S(q,q',p,p')}

    для символа S, квадратичного по (p, p'). Записав показатель как
    -pi^T A pi / 2 + K.pi + tau c, где pi = (p, p'), получаем интеграл
    2 pi / sqrt(det A) exp(K^T A^-1 K / 2 + tau c). Импульсные направления,
    отсутствующие в символе, интегрируются в сеточные дельты высоты 1/dx.
    """

    def __init__(self, form: QuadraticSymbolForm, tau: float, grid: GridRepresentation):
        if not tau > 0:
            raise RejectedInputError(f"tau must be positive, got {tau}")
        self.form = form
        self.tau = tau
        self.grid = grid
        self.hbar = form.hbar
        self.logger = logging.getLogger(__name__)

        m = form.matrix
        scale = max(1.0, float(np.max(np.abs(m))))
        b = form.mass_block
        largest = float(np.max(np.linalg.eigvalsh(b.real)))
        if largest > DEGENERACY_TOL * scale:
            raise RejectedInputError(
                f"momentum quadratic form has positive real eigenvalue {largest:.3e}; "
                f"the momentum integral diverges"
            )

        self._a = -2.0 * tau * b
        self._j_constant = 2.0 * tau * m[3:, 0]
        self._j_q = 2.0 * tau * m[3:, 1]
        self._j_q_prime = 2.0 * tau * m[3:, 2]

        zero = [bool(np.all(np.abs(b[i]) <= DEGENERACY_TOL * scale)) for i in range(2)]
        for i in range(2):
            linear = np.abs([m[3 + i, 0], m[3 + i, 1], m[3 + i, 2]])
            if zero[i] and np.any(linear > DEGENERACY_TOL * scale):
                raise UnsupportedFormError(
                    f"{'p' if i == 0 else 'p prime'} enters only linearly; the slice is not a grid delta"
                )
        if zero[0] and zero[1]:
            self.mode = "delta"
        elif zero[1]:
            self.mode = "unprimed"
        elif zero[0]:
            self.mode = "primed"
        else:
            det = np.linalg.det(self._a)
            if abs(det) <= DEGENERACY_TOL * max(1.0, float(np.max(np.abs(self._a)))) ** 2:
                raise RejectedInputError("momentum quadratic form is degenerate off the momentum axes")
            self.mode = "full"
            self._a_inverse = np.linalg.inv(self._a)
            self._sqrt_det = np.prod(np.sqrt(np.linalg.eigvals(self._a)))
        self.logger.debug(f"Гауссов шаг: режим {self.mode}, tau={tau}")

    def _position_part(self, q, q_prime):
        m = self.form.matrix
        return self.tau * (
            m[0, 0] + 2.0 * m[0, 1] * q + 2.0 * m[0, 2] * q_prime
            + m[1, 1] * q ** 2 + 2.0 * m[1, 2] * q * q_prime + m[2, 2] * q_prime ** 2
        )

    def _grid_delta(self, x, y):
        return np.where(np.abs(x - y) < 0.5 * self.grid.spacing, 1.0 / self.grid.spacing, 0.0)

    def evaluate(self, q, q_prime, y, y_prime) -> np.ndarray:
        q, q_prime, y, y_prime = (np.asarray(v, dtype=float) for v in (q, q_prime, y, y_prime))
        hbar = self.hbar
        k1 = self._j_constant[0] + self._j_q[0] * q + self._j_q_prime[0] * q_prime + 1j / hbar * (q - y)
        k2 = self._j_constant[1] + self._j_q[1] * q + self._j_q_prime[1] * q_prime - 1j / hbar * (q_prime - y_prime)
        exponent = self._position_part(q, q_prime)
        norm = 1.0 / (2.0 * np.pi * hbar)

        if self.mode == "full":
            inv = self._a_inverse
            quadratic = inv[0, 0] * k1 ** 2 + 2.0 * inv[0, 1] * k1 * k2 + inv[1, 1] * k2 ** 2
            return norm ** 2 * 2.0 * np.pi / self._sqrt_det * np.exp(0.5 * quadratic + exponent)
        if self.mode == "unprimed":
            a11 = self._a[0, 0]
            factor = norm * np.sqrt(2.0 * np.pi / a11) * np.exp(0.5 * k1 ** 2 / a11 + exponent)
            return factor * self._grid_delta(q_prime, y_prime)
        if self.mode == "primed":
            a22 = self._a[1, 1]
            factor = norm * np.sqrt(2.0 * np.pi / a22) * np.exp(0.5 * k2 ** 2 / a22 + exponent)
            return factor * self._grid_delta(q, y)
        return np.exp(exponent) * self._grid_delta(q, y) * self._grid_delta(q_prime, y_prime)

    def to_grid(self) -> KernelGrid:
        x = self.grid.positions
        values = np.empty((self.grid.points,) * 4, dtype=complex)
        for a in range(self.grid.points):
            values[a] = self.evaluate(x[a], x[:, None, None], x[None, :, None], x[None, None, :])
        return KernelGrid(self.grid, values)


def gaussian_short_time_kernel(
        symbol: Union[QuadraticSymbolForm, SymbolGrid],
        tau: float,
        grid: Optional[GridRepresentation] = None
) -> KernelGrid:
    """Ядро одного шага на ``grid``; выборочные символы сначала приближаются квадратичной формой."""
    if isinstance(symbol, SymbolGrid):
        grid = grid or symbol.grid
        symbol = QuadraticSymbolForm.fit(symbol)
    if grid is None:
        raise RejectedInputError("a grid is required for a closed-form symbol")
    return GaussianShortTimeKernel(symbol, tau, grid).to_grid()


def hamiltonian_short_time_kernel(
        hamiltonian: OperatorPolynomial,
        tau: float,
        grid: GridRepresentation
) -> np.ndarray:
    """
    U(q, y) = int dp/(2 pi hbar) exp((i/hbar)(q-y)p - (i tau/hbar) h(q, p))

    для qp-символа h = alpha p^2 + beta(q) p + gamma(q), alpha > 0. При V = 0
    двойное ядро шага распадается на U(q, y) conj(U(q', y')).

    Raises:
        UnsupportedFormError: H не квадратичен или кинетический член не положителен
    """
    if not tau > 0:
        raise RejectedInputError(f"tau must be positive, got {tau}")
    hbar = hamiltonian.hbar
    symbol = hamiltonian.qp_symbol()
    if hamiltonian.degree > 2:
        raise UnsupportedFormError("Hamiltonian is not quadratic")
    alpha = symbol.get((0, 2), 0j)
    if abs(alpha.imag) > DEGENERACY_TOL or not alpha.real > 0:
        raise UnsupportedFormError(f"kinetic coefficient {alpha} is not a positive real number")

    x = grid.positions
    q, y = x[:, None], x[None, :]
    beta = symbol.get((0, 1), 0j) + symbol.get((1, 1), 0j) * q
    gamma = symbol.get((0, 0), 0j) + symbol.get((1, 0), 0j) * q + symbol.get((2, 0), 0j) * q ** 2
    a = 2j * tau * alpha / hbar
    k = 1j / hbar * (q - y - tau * beta)
    return np.sqrt(2.0 * np.pi / a) / (2.0 * np.pi * hbar) * np.exp(0.5 * k ** 2 / a - 1j * tau * gamma / hbar)


@dataclass(frozen=True, eq=False)
class PhaseSpacePath:
    """Дискретные пути q_k, q'_k, p_k, p'_k для k = 0..n+1."""
    q: np.ndarray
    q_prime: np.ndarray
    p: np.ndarray
    p_prime: np.ndarray

    def __post_init__(self):
        arrays = [np.asarray(v, dtype=float) for v in (self.q, self.q_prime, self.p, self.p_prime)]
        lengths = {a.shape for a in arrays}
        if len(lengths) != 1 or arrays[0].ndim != 1:
            raise RejectedInputError(f"path arrays must be 1-D of equal length, got shapes {sorted(lengths)}")
        if arrays[0].size < 2:
            raise RejectedInputError("a path needs at least two points")
        for name, array in zip(("q", "q_prime", "p", "p_prime"), arrays):
            object.__setattr__(self, name, array)


SymbolSource = Union[QuadraticSymbolForm, SymbolGrid, Callable[..., np.ndarray]]


def discrete_action(path: PhaseSpacePath, symbol: SymbolSource, tau: float, hbar: float = 1.0) -> complex:
    """
    Показатель экспоненты для одного дискретного пути:

    sum_{k=1}^{n+1} tau ((i/hbar)[(q_k - q_{k-1}) p_k - (q'_k - q'_{k-1}) p'_k]/tau
                         + S(q_k, q'_k, p_k, p'_k))
    """
    if not tau > 0:
        raise RejectedInputError(f"tau must be positive, got {tau}")
    evaluate = symbol.evaluate if hasattr(symbol, "evaluate") else symbol
    q, qp, p, pp = path.q, path.q_prime, path.p, path.p_prime
    kinetic = 1j / hbar * (np.diff(q) * p[1:] - np.diff(qp) * pp[1:])
    values = np.asarray(evaluate(q[1:], qp[1:], p[1:], pp[1:]), dtype=complex)
    return complex(np.sum(kinetic + tau * values))
