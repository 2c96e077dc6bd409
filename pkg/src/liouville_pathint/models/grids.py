"""Ядра и символы на равномерной периодической сетке."""

from dataclasses import dataclass

import numpy as np

from ..exceptions import RejectedInputError
from .representation import GridRepresentation


def _frozen_4index(values, points: int, name: str) -> np.ndarray:
    values = np.array(values, dtype=complex, copy=True)
    if values.shape != (points,) * 4:
        raise RejectedInputError(f"{name} values must have shape {(points,) * 4}, got {values.shape}")
    values.setflags(write=False)
    return values


@dataclass(frozen=True, eq=False)
class KernelGrid:
    """
    Ядро K(q, q', y, y') на сетке с континуальной нормировкой.

    E(rho)(q, q') = dx^2 sum_{y, y'} K(q, q', y, y') rho(y, y'), поэтому
    тождественное ядро равно 1/dx^2 на диагонали.
    """
    grid: GridRepresentation
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_4index(self.values, self.grid.points, "kernel"))

    @property
    def points(self) -> int:
        return self.grid.points

    @classmethod
    def identity(cls, grid: GridRepresentation) -> "KernelGrid":
        n = grid.points
        eye = np.eye(n)
        return cls(grid, np.einsum("ab,cd->acbd", eye, eye) / grid.spacing ** 2)

    def to_matrix(self) -> np.ndarray:
        """Матрица супероператора d^2 x d^2 (ядро, умноженное на меру dx^2)."""
        n = self.grid.points
        return self.values.reshape(n * n, n * n) * self.grid.spacing ** 2


@dataclass(frozen=True, eq=False)
class SymbolGrid:
    """Значения символа с индексами (q, q', p, p') на координатной сетке и сопряженной импульсной."""
    grid: GridRepresentation
    values: np.ndarray
    hbar: float = 1.0

    def __post_init__(self):
        if not self.hbar > 0:
            raise RejectedInputError(f"hbar must be positive, got {self.hbar}")
        object.__setattr__(self, "values", _frozen_4index(self.values, self.grid.points, "symbol"))

    @property
    def momenta(self) -> np.ndarray:
        return self.grid.momenta(self.hbar)

    @property
    def momentum_spacing(self) -> float:
        return self.grid.momentum_spacing(self.hbar)

    def _indices(self, values, axis_values: np.ndarray, spacing: float, name: str) -> np.ndarray:
        values = np.asarray(values, dtype=float)
        index = np.rint((values - axis_values[0]) / spacing).astype(int)
        off_grid = np.abs(axis_values[0] + index * spacing - values) > 1e-9 * spacing
        if np.any(off_grid) or np.any(index < 0) or np.any(index >= self.grid.points):
            raise RejectedInputError(f"{name} values do not lie on the grid")
        return index

    def evaluate(self, q, q_prime, p, p_prime) -> np.ndarray:
        """Поиск точек на сетке; бродкастинг как в numpy."""
        positions = self.grid.positions
        momenta = self.momenta
        return self.values[
            self._indices(q, positions, self.grid.spacing, "q"),
            self._indices(q_prime, positions, self.grid.spacing, "q'"),
            self._indices(p, momenta, self.momentum_spacing, "p"),
            self._indices(p_prime, momenta, self.momentum_spacing, "p'"),
        ]
