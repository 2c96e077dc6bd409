"""Параметры квадратичной диссипативной модели осциллятора."""

from dataclasses import dataclass

from ..exceptions import RejectedInputError


@dataclass(frozen=True)
class DiffusionCoefficients:
    """Коэффициенты диффузии и трение, полученные из амплитуд Линдблада."""
    d_qq: float
    d_pp: float
    d_pq: float
    lam: float

    def cp_margin(self, hbar: float = 1.0) -> float:
        """d_qq d_pp - d_pq^2 - (hbar lam / 2)^2; неотрицательно тогда и только тогда, когда амплитуды существуют."""
        return self.d_qq * self.d_pp - self.d_pq ** 2 - (0.5 * hbar * self.lam) ** 2


@dataclass(frozen=True)
class OscillatorModelParams:
    """
    Феноменологический диссипативный осциллятор.

    Args:
        mass: Масса m > 0
        omega: Частота w >= 0
        mu: Асимметрия трения, она же коэффициент при (PQ+QP)/2 в H
        lam: Константа трения lambda
        d_qq, d_pp, d_pq: Коэффициенты диффузии
        hbar: Постоянная Планка
    """
    mass: float = 1.0
    omega: float = 1.0
    mu: float = 0.0
    lam: float = 0.0
    d_qq: float = 0.0
    d_pp: float = 0.0
    d_pq: float = 0.0
    hbar: float = 1.0

    def __post_init__(self):
        if not self.mass > 0:
            raise RejectedInputError(f"mass must be positive, got {self.mass}")
        if self.omega < 0:
            raise RejectedInputError(f"omega must be non-negative, got {self.omega}")
        if not self.hbar > 0:
            raise RejectedInputError(f"hbar must be positive, got {self.hbar}")
        if self.d_qq < 0 or self.d_pp < 0:
            raise RejectedInputError(
                f"diffusion d_qq, d_pp must be non-negative, got {self.d_qq}, {self.d_pp}"
            )

    @property
    def coefficients(self) -> DiffusionCoefficients:
        return DiffusionCoefficients(self.d_qq, self.d_pp, self.d_pq, self.lam)

    @classmethod
    def from_coefficients(
            cls,
            coefficients: DiffusionCoefficients,
            mass: float = 1.0,
            omega: float = 1.0,
            mu: float = 0.0,
            hbar: float = 1.0
    ) -> "OscillatorModelParams":
        return cls(
            mass=mass,
            omega=omega,
            mu=mu,
            lam=coefficients.lam,
            d_qq=coefficients.d_qq,
            d_pp=coefficients.d_pp,
            d_pq=coefficients.d_pq,
            hbar=hbar,
        )
