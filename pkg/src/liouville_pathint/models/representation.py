"""Метаданные представлений для усеченных гильбертовых пространств."""

from dataclasses import dataclass
from typing import Union

import numpy as np

from ..exceptions import RejectedInputError


@dataclass(frozen=True)
class FockRepresentation:
    """Усечение по числу квантов с ``dim`` уровнями."""
    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise RejectedInputError(f"Fock dimension must be positive, got {self.dim}")

    @property
    def kind(self) -> str:
        return "fock"


@dataclass(frozen=True)
class GridRepresentation:
    """
    Равномерная периодическая координатная сетка на [-L/2, L/2).

    Континуальные дельта-функции становятся ``(1/dx)``, умноженным на символ Кронекера,
    а интегралы становятся суммами с весом ``dx``. Импульсная сетка сопряжена
    координатной относительно дискретного преобразования Фурье.

    Args:
        points: Число точек сетки N
        length: Длина ящика L
    """
    points: int
    length: float

    def __post_init__(self):
        if self.points < 2:
            raise RejectedInputError(f"grid needs at least 2 points, got {self.points}")
        if not self.length > 0:
            raise RejectedInputError(f"grid length must be positive, got {self.length}")

    @property
    def kind(self) -> str:
        return "grid"

    @property
    def dim(self) -> int:
        return self.points

    @property
    def spacing(self) -> float:
        return self.length / self.points

    @property
    def positions(self) -> np.ndarray:
        return -0.5 * self.length + self.spacing * np.arange(self.points)

    def momentum_spacing(self, hbar: float = 1.0) -> float:
        """dp = 2*pi*hbar / (N dx)."""
        return 2.0 * np.pi * hbar / self.length

    def momenta(self, hbar: float = 1.0) -> np.ndarray:
        """Импульсы p_k = dp (k - N/2), k = 0..N-1."""
        return self.momentum_spacing(hbar) * (np.arange(self.points) - self.points // 2)

    @property
    def is_power_of_two(self) -> bool:
        return self.points & (self.points - 1) == 0


Representation = Union[FockRepresentation, GridRepresentation]
