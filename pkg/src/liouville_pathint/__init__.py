from .core.liouville_core import MatrixOperator, SuperOperator, lie_jordan_superoperators, pauli_basis
from .core.lindblad import LindbladGenerator, build_generator, build_oscillator_generator, verify_generator
from .core.propagator import QuantumOperation, TrotterPropagator, trotter_propagate
from .core.channels import ChoiMatrix, KrausSet, choi_matrix, kraus_decomposition
from .core.gates4 import GateMatrix4, gate_matrix
from .core.oracle import exact_propagator, rk4_propagate
from .core.storage_manager import ArtifactStore
from .models import FockRepresentation, GridRepresentation, OscillatorModelParams, RunConfig
from .exceptions import (
    LiouvilleError,
    NotCompletelyPositiveError,
    NotRealOperationError,
    RejectedInputError,
    UnsupportedFormError,
    ZeroProbabilityError,
)

__all__ = [
    "MatrixOperator",
    "SuperOperator",
    "lie_jordan_superoperators",
    "pauli_basis",
    "LindbladGenerator",
    "build_generator",
    "build_oscillator_generator",
    "verify_generator",
    "QuantumOperation",
    "TrotterPropagator",
    "trotter_propagate",
    "ChoiMatrix",
    "KrausSet",
    "choi_matrix",
    "kraus_decomposition",
    "GateMatrix4",
    "gate_matrix",
    "exact_propagator",
    "rk4_propagate",
    "ArtifactStore",
    "FockRepresentation",
    "GridRepresentation",
    "OscillatorModelParams",
    "RunConfig",
    "LiouvilleError",
    "NotCompletelyPositiveError",
    "NotRealOperationError",
    "RejectedInputError",
    "UnsupportedFormError",
    "ZeroProbabilityError",
]
