"""Error taxonomy for Liouville-space computations."""

from typing import Optional


class LiouvilleError(Exception):
    """Base class for all library errors."""


class RejectedInputError(LiouvilleError, ValueError):
    """Input violates an operation's precondition (shape, range, Hermiticity...)."""


class UnsupportedFormError(LiouvilleError):
    """Symbol or polynomial lies outside the analytically supported family."""


class NotCompletelyPositiveError(LiouvilleError):
    """Choi matrix has an eigenvalue below the admissible threshold."""

    def __init__(self, eigenvalue: float, threshold: float):
        self.eigenvalue = eigenvalue
        self.threshold = threshold
        super().__init__(
            f"operation is not completely positive: Choi eigenvalue {eigenvalue:.3e} "
            f"< -{threshold:.3e}"
        )


class ZeroProbabilityError(LiouvilleError):
    """Trace of E(rho) is too small to normalize."""

    def __init__(self, probability: float, tol: float):
        self.probability = probability
        self.tol = tol
        super().__init__(
            f"operation probability {probability:.3e} <= {tol:.3e}; normalization undefined"
        )


class NotRealOperationError(LiouvilleError):
    """Gate matrix carries an imaginary residue above tolerance."""

    def __init__(self, residue: float, tol: Optional[float] = None):
        self.residue = residue
        self.tol = tol
        super().__init__(f"operation is not real: imaginary residue {residue:.3e}")
