"""Конфигурация расчета: проверенный JSON-документ, описывающий один расчет."""

import json
from enum import Enum
from pathlib import Path
from typing import List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..exceptions import RejectedInputError

MAX_FOCK_DIM = 64
MIN_GRID_POINTS = 4
MAX_GRID_POINTS = 64

ComplexValue = Union[float, List[float]]


def to_complex(value: ComplexValue) -> complex:
    """Число или пара [re, im]."""
    if isinstance(value, (int, float)):
        return complex(value)
    if len(value) != 2:
        raise ValueError(f"complex values are [re, im] pairs, got {value}")
    return complex(value[0], value[1])


def _check_complex(value):
    if value is not None and not isinstance(value, (int, float)):
        to_complex(value)
    return value


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class SliceMode(str, Enum):
    """Фактор короткого шага на каждом временном шаге."""
    EULER = "euler"
    EXPONENTIAL = "exponential"


class OutputKind(str, Enum):
    """Файлы, которые может записать подкоманда propagate."""
    TRAJECTORY = "trajectory"
    FINAL_STATE = "final_state"
    OPERATION = "operation"


class FockSpec(StrictModel):
    dim: int = Field(ge=2, le=MAX_FOCK_DIM)


class GridSpec(StrictModel):
    points: int = Field(ge=MIN_GRID_POINTS, le=MAX_GRID_POINTS)
    length: float = Field(gt=0)

    @field_validator("points")
    @classmethod
    def power_of_two(cls, v: int) -> int:
        if v & (v - 1):
            raise ValueError(f"grid points must be a power of two, got {v}")
        return v


class RepresentationSpec(StrictModel):
    fock: Optional[FockSpec] = None
    grid: Optional[GridSpec] = None

    @model_validator(mode="after")
    def exactly_one(self) -> "RepresentationSpec":
        if (self.fock is None) == (self.grid is None):
            raise ValueError("representation needs exactly one of 'fock' or 'grid'")
        return self


class TermSpec(StrictModel):
    """coeff * Q^q P^p."""
    q: int = Field(0, ge=0)
    p: int = Field(0, ge=0)
    coeff: ComplexValue = 1.0

    @field_validator("coeff")
    @classmethod
    def complex_coeff(cls, v):
        return _check_complex(v)


class OperatorSpec(StrictModel):
    """
    Один оператор: метка Паули ("x", "minus", "XZ", ...), явная матрица из чисел
    или пар [re, im], либо полином от (Q, P) в порядке Q слева.
    """
    pauli: Optional[str] = None
    matrix: Optional[List[List[ComplexValue]]] = None
    polynomial: Optional[List[TermSpec]] = None
    scale: ComplexValue = 1.0

    @field_validator("scale")
    @classmethod
    def complex_scale(cls, v):
        return _check_complex(v)

    @model_validator(mode="after")
    def exactly_one(self) -> "OperatorSpec":
        given = [f for f in ("pauli", "matrix", "polynomial") if getattr(self, f) is not None]
        if len(given) != 1:
            raise ValueError(f"operator needs exactly one of pauli/matrix/polynomial, got {given or 'none'}")
        if self.matrix is not None:
            for row in self.matrix:
                if len(row) != len(self.matrix):
                    raise ValueError("operator matrix must be square")
                for entry in row:
                    _check_complex(entry)
        return self


class OscillatorSpec(StrictModel):
    mass: float = Field(1.0, gt=0)
    omega: float = Field(1.0, ge=0)
    mu: float = 0.0
    lam: float = Field(0.0, alias="lambda")
    d_qq: float = Field(0.0, ge=0)
    d_pp: float = Field(0.0, ge=0)
    d_pq: float = 0.0


class AmplitudeSpec(StrictModel):
    """V_k = a_k P + b_k Q."""
    a: List[ComplexValue]
    b: List[ComplexValue]
    mass: float = Field(1.0, gt=0)
    omega: float = Field(1.0, ge=0)
    mu: float = 0.0

    @model_validator(mode="after")
    def same_length(self) -> "AmplitudeSpec":
        if len(self.a) != len(self.b):
            raise ValueError(f"amplitude lists differ in length: {len(self.a)} vs {len(self.b)}")
        for value in list(self.a) + list(self.b):
            _check_complex(value)
        return self


class GeneratorSpec(StrictModel):
    hamiltonian: Optional[OperatorSpec] = None
    lindblad: List[OperatorSpec] = Field(default_factory=list)
    oscillator: Optional[OscillatorSpec] = None
    amplitudes: Optional[AmplitudeSpec] = None

    @model_validator(mode="after")
    def exactly_one_form(self) -> "GeneratorSpec":
        forms = [
            name for name, present in (
                ("hamiltonian", self.hamiltonian is not None),
                ("oscillator", self.oscillator is not None),
                ("amplitudes", self.amplitudes is not None),
            ) if present
        ]
        if len(forms) != 1:
            raise ValueError(f"generator needs exactly one form (hamiltonian, oscillator, amplitudes), got {forms or 'none'}")
        if self.lindblad and self.hamiltonian is None:
            raise ValueError("lindblad operators require an explicit hamiltonian")
        return self

    @property
    def form(self) -> str:
        if self.hamiltonian is not None:
            return "explicit"
        return "oscillator" if self.oscillator is not None else "amplitudes"


class TimeSpec(StrictModel):
    t0: float = 0.0
    t: float
    slices: int = Field(1, ge=1)
    mode: SliceMode = SliceMode.EULER

    @model_validator(mode="after")
    def ordered(self) -> "TimeSpec":
        if self.t < self.t0:
            raise ValueError(f"final time {self.t} precedes initial time {self.t0}")
        return self

    @property
    def tau(self) -> float:
        return (self.t - self.t0) / self.slices


class InitialStateSpec(StrictModel):
    fock: Optional[int] = Field(None, ge=0)
    coherent: Optional[ComplexValue] = None
    bloch: Optional[List[float]] = None
    matrix: Optional[List[List[ComplexValue]]] = None

    @model_validator(mode="after")
    def exactly_one(self) -> "InitialStateSpec":
        given = [f for f in ("fock", "coherent", "bloch", "matrix") if getattr(self, f) is not None]
        if len(given) != 1:
            raise ValueError(f"initial_state needs exactly one of fock/coherent/bloch/matrix, got {given or 'none'}")
        _check_complex(self.coherent)
        if self.bloch is not None:
            if len(self.bloch) != 3:
                raise ValueError("bloch vector needs three components")
            if sum(c * c for c in self.bloch) > 1.0 + 1e-12:
                raise ValueError("bloch vector lies outside the unit ball")
        return self


class RunConfig(StrictModel):
    hbar: float = Field(1.0, gt=0)
    representation: RepresentationSpec
    generator: GeneratorSpec
    time: TimeSpec
    initial_state: Optional[InitialStateSpec] = None
    outputs: List[OutputKind] = Field(default_factory=lambda: [OutputKind.TRAJECTORY])


def load_config(path: Union[str, Path]) -> RunConfig:
    """
    Прочитать и проверить файл конфигурации.

    Raises:
        RejectedInputError: нечитаемый JSON (с номером строки) или нарушение
            схемы (с путем к ошибочному полю)
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise RejectedInputError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from e
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(part) for part in error['loc']) or '<root>'}: {error['msg']}"
            for error in e.errors()
        )
        raise RejectedInputError(f"{path}: {problems}") from e
