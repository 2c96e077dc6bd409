"""Утилиты для расчетов в пространстве Лиувилля."""

from .operators import PAULIS, SIGMA_MINUS, coherent_state, random_density_matrix, random_operator
from .serialization import ArrayEncoder, complex_from_json, complex_to_json

__all__ = [
    "PAULIS",
    "SIGMA_MINUS",
    "coherent_state",
    "random_density_matrix",
    "random_operator",
    "ArrayEncoder",
    "complex_from_json",
    "complex_to_json",
]
