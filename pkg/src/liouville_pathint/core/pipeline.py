"""Сконфигурированные расчеты, стоящие за подкомандами CLI."""

import logging
from dataclasses import asdict
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..exceptions import NotCompletelyPositiveError, RejectedInputError, UnsupportedFormError
from ..models.oscillator import OscillatorModelParams
from ..models.representation import FockRepresentation, GridRepresentation, Representation
from ..models.run_config import InitialStateSpec, OperatorSpec, OutputKind, RunConfig, to_complex
from ..utils.operators import PAULI_LETTERS, PAULIS, SIGMA_MINUS, SIGMA_PLUS, bloch_state, coherent_state, random_operator
from .channels import choi_matrix, kraus_decomposition
from .gates4 import gate_matrix
from .lindblad import (
    LindbladGenerator,
    build_generator,
    build_oscillator_generator,
    oscillator_coefficients,
    oscillator_hamiltonian,
    oscillator_lindblad_operators,
    quadrature_operators,
)
from .liouville_core import MatrixOperator, SuperOperator, superoperator_algebra_residuals
from .oracle import MomentState, moment_trajectory, stationary_moments
from .phase_space import (
    GaussianShortTimeKernel,
    kernel_from_superoperator,
    superoperator_symbol,
)
from .propagator import QuantumOperation, TrotterPropagator, short_time_kernel
from .storage_manager import ArtifactStore
from .symbols import (
    SYMBOL_TOL,
    OperatorPolynomial,
    QuadraticSymbolForm,
    classify_symbol,
    lindblad_symbol_form,
    named_terms,
    oscillator_polynomials,
)

logger = logging.getLogger(__name__)

NAMED_QUBIT_OPERATORS = {"minus": SIGMA_MINUS, "plus": SIGMA_PLUS}
# 4-индексные массивы большего размера сохраняются только срезами
MAX_DUMP_POINTS = 16


def build_representation(config: RunConfig) -> Representation:
    spec = config.representation
    if spec.fock is not None:
        return FockRepresentation(spec.fock.dim)
    return GridRepresentation(spec.grid.points, spec.grid.length)


def pauli_operator(label: str, dim: int) -> np.ndarray:
    """Именованный оператор кубита ("minus", "plus") или тензорное произведение букв Паули ("X", "ZI", ...)."""
    key = label.strip()
    if key.lower() in NAMED_QUBIT_OPERATORS:
        matrix = NAMED_QUBIT_OPERATORS[key.lower()]
    else:
        letters = key.upper()
        if not letters or any(c not in PAULI_LETTERS for c in letters):
            raise RejectedInputError(f"unknown Pauli label {label!r}")
        matrix = np.array([[1.0 + 0j]])
        for c in letters:
            matrix = np.kron(matrix, PAULIS[PAULI_LETTERS.index(c)])
    if matrix.shape[0] != dim:
        raise RejectedInputError(f"Pauli label {label!r} acts on dimension {matrix.shape[0]}, not {dim}")
    return matrix


def build_polynomial(spec: OperatorSpec, hbar: float) -> Optional[OperatorPolynomial]:
    if spec.polynomial is None:
        return None
    terms: Dict[Tuple[int, int], complex] = {}
    for term in spec.polynomial:
        terms[(term.q, term.p)] = terms.get((term.q, term.p), 0j) + to_complex(term.coeff)
    return OperatorPolynomial(terms, hbar) * to_complex(spec.scale)


def build_operator(
        spec: OperatorSpec,
        representation: Representation,
        hbar: float,
        quadratures: Optional[Tuple[MatrixOperator, MatrixOperator]] = None
) -> MatrixOperator:
    dim = representation.dim
    if spec.pauli is not None:
        matrix = pauli_operator(spec.pauli, dim)
    elif spec.matrix is not None:
        matrix = np.array([[to_complex(v) for v in row] for row in spec.matrix], dtype=complex)
        if matrix.shape != (dim, dim):
            raise RejectedInputError(f"operator matrix is {matrix.shape}, representation has dimension {dim}")
    else:
        q, p = quadratures or quadrature_operators(representation, hbar=hbar)
        return build_polynomial(spec, hbar).to_matrix(q, p)
    return MatrixOperator(to_complex(spec.scale) * matrix, representation)


def oscillator_params(config: RunConfig) -> Optional[OscillatorModelParams]:
    generator = config.generator
    if generator.oscillator is not None:
        spec = generator.oscillator
        return OscillatorModelParams(
            mass=spec.mass, omega=spec.omega, mu=spec.mu, lam=spec.lam,
            d_qq=spec.d_qq, d_pp=spec.d_pp, d_pq=spec.d_pq, hbar=config.hbar,
        )
    if generator.amplitudes is not None:
        spec = generator.amplitudes
        coefficients = oscillator_coefficients(
            [to_complex(v) for v in spec.a], [to_complex(v) for v in spec.b], config.hbar
        )
        return OscillatorModelParams.from_coefficients(
            coefficients, mass=spec.mass, omega=spec.omega, mu=spec.mu, hbar=config.hbar
        )
    return None


def grid_wavepacket(grid: GridRepresentation, alpha: complex, mass: float, omega: float, hbar: float) -> np.ndarray:
    """Матрица плотности когерентного состояния на сетке, нормированная с мерой dx."""
    width = np.sqrt(hbar / (mass * (omega if omega > 0 else 1.0)))
    x0 = np.sqrt(2.0) * width * alpha.real
    p0 = np.sqrt(2.0) * hbar / width * alpha.imag
    x = grid.positions
    psi = np.exp(-0.5 * ((x - x0) / width) ** 2 + 1j * p0 * x / hbar)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


class RunPipeline:
    """Строит генератор и начальное состояние по RunConfig и выполняет нужный расчет."""

    def __init__(self, config: RunConfig, store: ArtifactStore, tol: float = 1e-10):
        self.config = config
        self.store = store
        self.tol = tol
        self.hbar = config.hbar
        self.representation = build_representation(config)
        self.params = oscillator_params(config)
        self.logger = logging.getLogger(__name__)

        if self.params is not None:
            mass, omega = self.params.mass, self.params.omega
        else:
            mass, omega = 1.0, 1.0
        self.quadratures = quadrature_operators(self.representation, mass, omega, self.hbar)
        self._generator: Optional[SuperOperator] = None

    # -- составные части ------------------------------------------------

    @property
    def generator(self) -> SuperOperator:
        if self._generator is None:
            self._generator = self._build_generator()
        return self._generator

    def _build_generator(self) -> SuperOperator:
        spec = self.config.generator
        rep = self.representation
        if spec.oscillator is not None:
            return build_oscillator_generator(self.params, rep)
        if spec.amplitudes is not None:
            q, p = self.quadratures
            a = [to_complex(v) for v in spec.amplitudes.a]
            b = [to_complex(v) for v in spec.amplitudes.b]
            lindblad = LindbladGenerator(
                oscillator_hamiltonian(self.params, q, p),
                oscillator_lindblad_operators(a, b, q, p),
                self.hbar,
            )
            return build_generator(lindblad)
        hamiltonian = build_operator(spec.hamiltonian, rep, self.hbar, self.quadratures)
        operators = tuple(build_operator(v, rep, self.hbar, self.quadratures) for v in spec.lindblad)
        return build_generator(LindbladGenerator(hamiltonian, operators, self.hbar))

    def symbol_form(self) -> Optional[QuadraticSymbolForm]:
        """Символ в замкнутой форме, если генератор задан полиномами от (Q, P)."""
        spec = self.config.generator
        if self.params is not None:
            hamiltonian, operators = oscillator_polynomials(self.params)
            return lindblad_symbol_form(hamiltonian, operators)
        hamiltonian = build_polynomial(spec.hamiltonian, self.hbar)
        operators = [build_polynomial(v, self.hbar) for v in spec.lindblad]
        if hamiltonian is None or any(v is None for v in operators):
            return None
        return lindblad_symbol_form(hamiltonian, operators)

    def initial_state(self, spec: Optional[InitialStateSpec] = None) -> MatrixOperator:
        spec = spec or self.config.initial_state
        rep = self.representation
        dim = rep.dim
        if spec is None:
            raise RejectedInputError("this computation needs an initial_state")
        if spec.matrix is not None:
            rho = np.array([[to_complex(v) for v in row] for row in spec.matrix], dtype=complex)
            if rho.shape != (dim, dim):
                raise RejectedInputError(f"initial matrix is {rho.shape}, representation has dimension {dim}")
        elif spec.bloch is not None:
            if dim != 2:
                raise RejectedInputError(f"a Bloch vector needs a two-level system, not dimension {dim}")
            rho = bloch_state(spec.bloch)
        elif isinstance(rep, GridRepresentation):
            alpha = to_complex(spec.coherent) if spec.coherent is not None else 0j
            if spec.fock is not None and spec.fock != 0:
                raise RejectedInputError("on a grid only the fock ground state (0) is available")
            mass, omega = (self.params.mass, self.params.omega) if self.params else (1.0, 1.0)
            rho = grid_wavepacket(rep, alpha, mass, omega, self.hbar)
        elif spec.fock is not None:
            if spec.fock >= dim:
                raise RejectedInputError(f"fock level {spec.fock} is outside the truncation {dim}")
            rho = np.zeros((dim, dim), dtype=complex)
            rho[spec.fock, spec.fock] = 1.0
        else:
            rho = coherent_state(dim, to_complex(spec.coherent))
        return MatrixOperator(rho, rep)

    def operation(self) -> QuantumOperation:
        time = self.config.time
        propagator = TrotterPropagator(self.generator, time.mode.value)
        return propagator.propagate(time.t0, time.t, time.slices)

    # -- подкоманды ------------------------------------------------------

    def propagate(self) -> Dict[str, Any]:
        time = self.config.time
        rho0 = self.initial_state()
        propagator = TrotterPropagator(self.generator, time.mode.value)
        rows: List[Dict[str, float]] = []
        rho = rho0
        for t, rho in propagator.trajectory(rho0, time.t0, time.t, time.slices):
            entries = rho.entries
            rows.append({
                "t": t,
                "trace": float(np.trace(entries).real),
                "purity": float(np.vdot(entries, entries).real),
                "rho_ee": float(entries[0, 0].real),
            })
        drift = abs(rows[-1]["trace"] - 1.0)
        if drift > self.tol:
            self.logger.warning(f"⚠️  След ушел на {drift:.3e} за {time.slices} шагов")

        outputs = set(self.config.outputs)
        if OutputKind.TRAJECTORY in outputs:
            self.store.save_table("trajectory.csv", pd.DataFrame(rows, columns=["t", "trace", "purity", "rho_ee"]))
        if OutputKind.FINAL_STATE in outputs:
            self.store.save_json("final_state.json", {"t": time.t, "dim": rho.dim, "rho": rho.entries})
        if OutputKind.OPERATION in outputs:
            operation = propagator.propagate(time.t0, time.t, time.slices)
            self.store.save_json("operation.json", {
                "time_span": list(operation.time_span),
                "metadata": operation.metadata,
                "superoperator": operation.superop.matrix,
            })
        return self.store.summary({"slices": time.slices, "final_trace": rows[-1]["trace"], "trace_drift": drift})

    def kernel(self) -> Dict[str, Any]:
        rep = self.representation
        if not isinstance(rep, GridRepresentation):
            raise RejectedInputError("kernel needs a grid representation")
        tau = self.config.time.tau
        if not tau > 0:
            raise RejectedInputError("kernel needs a positive slice length (t > t0)")
        n = rep.points
        centre = n // 2
        x = rep.positions
        try:
            form = self.symbol_form()
        except UnsupportedFormError as e:
            self.logger.info(f"Нет замкнутой формы шага ({e}); используем генератор напрямую")
            form = None

        extra: Dict[str, Any] = {"tau": tau}
        if form is not None:
            slice_kernel = GaussianShortTimeKernel(form, tau, rep)
            values = slice_kernel.evaluate(x[:, None], x[centre], x[None, :], x[centre])
            symbol_values = form.evaluate(x[centre], x[centre], rep.momenta(self.hbar)[:, None], rep.momenta(self.hbar)[None, :])
            try:
                verdict = classify_symbol(form)
                reducible, reason = verdict.reducible, verdict.reason
            except UnsupportedFormError as e:
                reducible, reason = False, str(e)
            extra.update({"method": "gaussian", "mode": slice_kernel.mode, "reducible": reducible, "reason": reason})
            self.store.save_json("symbol_form.json", {
                "hbar": self.hbar,
                "monomials": dict(named_terms(form, SYMBOL_TOL)),
                "reducible": reducible,
                "reason": reason,
            })
            full = slice_kernel.to_grid().values if n <= MAX_DUMP_POINTS else None
        else:
            superop = short_time_kernel(self.generator, tau)
            kernel = kernel_from_superoperator(superop)
            symbol = superoperator_symbol(self.generator, self.hbar)
            values = kernel.values[:, centre, :, centre]
            symbol_values = symbol.values[centre, centre]
            extra.update({"method": "sliced"})
            full = kernel.values if n <= MAX_DUMP_POINTS else None

        self.store.save_table("kernel_slice.csv", _long_frame(("q", "y"), x, x, values))
        self.store.save_table("symbol_slice.csv", _long_frame(("p", "p_prime"), rep.momenta(self.hbar), rep.momenta(self.hbar), symbol_values))
        if full is not None:
            self.store.save_json("kernel.json", {
                "grid": {"points": n, "length": rep.length, "spacing": rep.spacing},
                "hbar": self.hbar,
                "tau": tau,
                "index_order": ["q", "q_prime", "y", "y_prime"],
                "values": full,
            })
        else:
            self.logger.info(f"Сетка из {n} точек: сохраняем только срезы")
        return self.store.summary(extra)

    def choi(self) -> Dict[str, Any]:
        operation = self.operation()
        choi = choi_matrix(operation)
        spectrum = choi.eigenvalues()
        self.store.save_json("choi.json", {
            "dim": choi.dim,
            "time_span": list(operation.time_span),
            "normalization": "sum_ij E(|i><j|) (x) |i><j|",
            "matrix": choi.matrix,
        })
        self.store.save_table("choi_eigenvalues.csv", pd.DataFrame({"index": np.arange(spectrum.size), "eigenvalue": spectrum}))
        extra: Dict[str, Any] = {"min_eigenvalue": float(spectrum[-1])}
        try:
            kraus = kraus_decomposition(choi)
        except NotCompletelyPositiveError as e:
            self.logger.warning(f"⚠️  {e}; операторы Крауса не сохранены")
            extra.update({"completely_positive": False, "kraus_rank": None})
            return self.store.summary(extra)
        self.store.save_json("kraus.json", {
            "rank": len(kraus),
            "completeness_defect": kraus.completeness_defect,
            "operators": [a.entries for a in kraus.operators],
        })
        extra.update({
            "completely_positive": True,
            "kraus_rank": len(kraus),
            "completeness_defect": kraus.completeness_defect,
        })
        return self.store.summary(extra)

    def gate_matrix(self) -> Dict[str, Any]:
        gate = gate_matrix(self.operation(), tol=self.tol)
        self.store.save_gate("gate_matrix.csv", gate)
        return self.store.summary({"n_qubits": gate.n_qubits, "trace_preserving": gate.trace_preserving})

    def moments(self) -> Dict[str, Any]:
        if self.params is None:
            raise RejectedInputError("moments need an oscillator or amplitudes generator")
        time = self.config.time
        if self.config.initial_state is not None:
            q, p = self.quadratures
            m0 = MomentState.from_density_matrix(self.initial_state(), q, p)
        else:
            # вакуум с собственным масштабом длины модели
            omega = self.params.omega if self.params.omega > 0 else 1.0
            m0 = MomentState(0.0, 0.0, 0.5 * self.hbar / (self.params.mass * omega), 0.5 * self.hbar * self.params.mass * omega, 0.0)
        rows = []
        for t, state in moment_trajectory(self.params, m0, time.t - time.t0, time.slices):
            rows.append({
                "t": time.t0 + t,
                "mean_q": state.mean_q,
                "mean_p": state.mean_p,
                "var_qq": state.var_qq,
                "var_pp": state.var_pp,
                "cov_qp": state.cov_qp,
                "energy": state.energy(self.params),
            })
        self.store.save_table("moments.csv", pd.DataFrame(rows))
        extra: Dict[str, Any] = {"steps": time.slices}
        try:
            extra["stationary"] = asdict(stationary_moments(self.params))
        except RejectedInputError:
            extra["stationary"] = None
        return self.store.summary(extra)


def _long_frame(names: Sequence[str], rows: np.ndarray, cols: np.ndarray, values: np.ndarray) -> pd.DataFrame:
    r, c = np.meshgrid(rows, cols, indexing="ij")
    values = np.asarray(values, dtype=complex)
    return pd.DataFrame({
        names[0]: r.reshape(-1),
        names[1]: c.reshape(-1),
        "re": values.real.reshape(-1),
        "im": values.imag.reshape(-1),
    })


def algebra_suite(
        seed: int,
        trials: int = 50,
        dims: Sequence[int] = (3, 4),
        hbars: Sequence[float] = (1.0, 0.5)
) -> pd.DataFrame:
    """Невязки соотношений Ли, Йордана и смешанных для L+- на воспроизводимых случайных тройках."""
    rng = np.random.default_rng(seed)
    rows = []
    for trial in range(trials):
        dim = dims[trial % len(dims)]
        hbar = hbars[(trial // len(dims)) % len(hbars)]
        a, b, c = (MatrixOperator(random_operator(dim, rng)) for _ in range(3))
        for relation, residual in superoperator_algebra_residuals(a, b, c, hbar).items():
            rows.append({"trial": trial, "dim": dim, "hbar": hbar, "relation": relation, "residual": residual})
    return pd.DataFrame(rows, columns=["trial", "dim", "hbar", "relation", "residual"])
