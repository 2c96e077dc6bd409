"""Модели данных: представления, параметры модели, сеточные выборки, конфигурация расчета."""

from .grids import KernelGrid, SymbolGrid
from .oscillator import DiffusionCoefficients, OscillatorModelParams
from .representation import FockRepresentation, GridRepresentation, Representation
from .run_config import RunConfig, load_config

__all__ = [
    "KernelGrid",
    "SymbolGrid",
    "DiffusionCoefficients",
    "OscillatorModelParams",
    "FockRepresentation",
    "GridRepresentation",
    "Representation",
    "RunConfig",
    "load_config",
]
