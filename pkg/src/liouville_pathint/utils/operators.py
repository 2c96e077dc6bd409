"""Elementary operator matrices: Paulis, ladder operators, grid operators, seeded randoms."""

from typing import Tuple

import numpy as np
import scipy.fft
import scipy.linalg

IDENTITY2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# index 0 is the excited level (sigma_z = +1), index 1 the ground level
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)
SIGMA_PLUS = SIGMA_MINUS.conj().T

PAULIS = (IDENTITY2, SIGMA_X, SIGMA_Y, SIGMA_Z)
PAULI_LETTERS = "IXYZ"


def annihilation(dim: int) -> np.ndarray:
    """Truncated ladder operator a with a|n> = sqrt(n)|n-1>."""
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)


def fock_quadratures(dim: int, mass: float, omega: float, hbar: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Position and momentum in a truncated number basis.

    Q = sqrt(hbar/2m w) (a + a^dag), P = i sqrt(hbar m w/2) (a^dag - a).
    A zero frequency uses w = 1 as the length scale.
    """
    scale_omega = omega if omega > 0 else 1.0
    a = annihilation(dim)
    a_dag = a.conj().T
    q = np.sqrt(hbar / (2.0 * mass * scale_omega)) * (a + a_dag)
    p = 1j * np.sqrt(hbar * mass * scale_omega / 2.0) * (a_dag - a)
    return q, p


def grid_quadratures(positions: np.ndarray, hbar: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Position (diagonal) and momentum (spectral derivative) on a periodic grid.

    P = F^-1 diag(p_k) F with p_k = 2 pi hbar * fftfreq(N, dx).
    """
    n = positions.size
    dx = positions[1] - positions[0]
    p_fft = 2.0 * np.pi * hbar * scipy.fft.fftfreq(n, d=dx)
    p = scipy.fft.ifft(p_fft[:, None] * scipy.fft.fft(np.eye(n), axis=0), axis=0)
    # symmetrize away the round-off of the transform pair
    p = 0.5 * (p + p.conj().T)
    return np.diag(positions).astype(complex), p


def coherent_state(dim: int, alpha: complex) -> np.ndarray:
    """Truncated coherent-state density matrix, renormalized after truncation."""
    n = np.arange(dim)
    log_fact = np.cumsum(np.log(np.maximum(n, 1)))
    amplitudes = np.exp(-0.5 * abs(alpha) ** 2 - 0.5 * log_fact) * alpha ** n
    amplitudes = amplitudes / np.linalg.norm(amplitudes)
    return np.outer(amplitudes, amplitudes.conj())


def bloch_state(vector) -> np.ndarray:
    """Qubit density matrix (I + r.sigma)/2."""
    rx, ry, rz = (float(c) for c in vector)
    return 0.5 * (IDENTITY2 + rx * SIGMA_X + ry * SIGMA_Y + rz * SIGMA_Z)


def random_operator(dim: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))


def random_density_matrix(dim: int, rng: np.random.Generator) -> np.ndarray:
    a = random_operator(dim, rng)
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from the phase-fixed QR of a Ginibre matrix."""
    q, r = scipy.linalg.qr(random_operator(dim, rng))
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases
