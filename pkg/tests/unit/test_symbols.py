"""Tests for operator polynomials, quadratic symbols and the reducibility classifier."""

import numpy as np
import pytest

from liouville_pathint.core.symbols import (
    OperatorPolynomial,
    QuadraticSymbolForm,
    classify_symbol,
    lindblad_symbol,
    lindblad_symbol_form,
    oscillator_polynomials,
    oscillator_symbol_form,
)
from liouville_pathint.exceptions import RejectedInputError, UnsupportedFormError
from liouville_pathint.models.grids import SymbolGrid
from liouville_pathint.models.oscillator import OscillatorModelParams


@pytest.fixture
def qp():
    return OperatorPolynomial.position(), OperatorPolynomial.momentum()


def test_momentum_position_product_is_reordered(qp):
    """PQ = QP - i hbar."""
    q, p = qp
    assert (p * q).terms == {(1, 1): 1, (0, 0): -1j}
    assert (q * p).terms == {(1, 1): 1}


def test_reordering_scales_with_hbar():
    q = OperatorPolynomial.position(0.5)
    p = OperatorPolynomial.momentum(0.5)
    assert (p * q).terms == {(1, 1): 1, (0, 0): -0.5j}
    # P^2 Q = Q P^2 - 2 i hbar P
    assert (p * p * q).terms == {(1, 2): 1, (0, 1): -1j}


def test_pq_symbol_of_qp(qp):
    q, p = qp
    assert (q * p).pq_symbol() == {(1, 1): 1, (0, 0): 1j}


def test_dag(qp):
    q, p = qp
    assert (q * p).dag().terms == {(1, 1): 1, (0, 0): -1j}
    assert (q * 2j).dag().terms == {(1, 0): -2j}


def test_is_hermitian(qp):
    q, p = qp
    assert (q * p + p * q).is_hermitian()
    assert (p * p * 0.5 + q * q).is_hermitian()
    assert not (q * p).is_hermitian()


def test_degree_and_scalars(qp):
    q, p = qp
    assert (p * p * q).degree == 3
    assert (1.0 + q).terms == {(0, 0): 1, (1, 0): 1}
    assert (q - q).terms == {}
    assert OperatorPolynomial.constant(0).degree == 0


def test_hbar_mismatch_rejected():
    with pytest.raises(RejectedInputError):
        OperatorPolynomial.position(1.0) + OperatorPolynomial.position(0.5)


def test_lindblad_symbol_matches_oscillator_form_up_to_constant():
    """The ordered Lindblad symbol and the closed-form exponent differ only by lam - mu."""
    params = OscillatorModelParams(mass=1.3, omega=0.7, mu=0.05, lam=0.1, d_qq=0.2, d_pp=0.3, d_pq=0.02)
    hamiltonian, operators = oscillator_polynomials(params)
    difference = lindblad_symbol_form(hamiltonian, operators) - oscillator_symbol_form(params)
    assert difference.constant == pytest.approx(params.lam - params.mu, abs=1e-10)
    non_constant = {k: v for k, v in difference.monomials(tol=1e-10).items() if k != (0, 0, 0, 0)}
    assert non_constant == {}


def test_hamiltonian_symbol_monomials(qp):
    q, p = qp
    form = lindblad_symbol_form(p * p * 0.5 + q * q * 0.5)
    assert form.named_monomials(tol=1e-14) == {
        "p*p": pytest.approx(-0.5j),
        "p'*p'": pytest.approx(0.5j),
        "q*q": pytest.approx(-0.5j),
        "q'*q'": pytest.approx(0.5j),
    }


def test_non_quadratic_forms_unsupported(qp):
    q, p = qp
    with pytest.raises(UnsupportedFormError):
        lindblad_symbol_form(q * q * q)
    with pytest.raises(UnsupportedFormError):
        lindblad_symbol_form(p * p, [q * q])
    with pytest.raises(UnsupportedFormError, match="position dependent"):
        QuadraticSymbolForm.from_monomials({(1, 0, 2, 0): 1.0})


def test_from_monomials_round_trip():
    monomials = {(0, 0, 0, 0): 0.5, (1, 0, 0, 0): 2.0, (0, 0, 1, 1): -1j, (0, 1, 0, 1): 3.0}
    form = QuadraticSymbolForm.from_monomials(monomials)
    assert form.monomials() == monomials
    assert form.cross_pp == -1j
    assert complex(form.evaluate(1.0, 2.0, 3.0, 4.0)) == pytest.approx(0.5 + 2.0 - 12j + 24.0)


def test_harmonic_oscillator_is_reducible(qp):
    q, p = qp
    mass, omega = 2.0, 1.5
    verdict = classify_symbol(lindblad_symbol_form(p * p * (0.5 / mass) + q * q * (0.5 * mass * omega ** 2)))
    assert verdict.reducible
    assert verdict.lagrangian.mass == pytest.approx(mass)
    assert verdict.lagrangian.c2 == pytest.approx(0.5 * mass * omega ** 2)
    assert verdict.lagrangian.b0 == pytest.approx(0.0)
    assert verdict.drift.e == {}
    assert verdict.divergent_measure_factor.startswith("delta(0)")


def test_momentum_diffusion_is_not_reducible():
    verdict = classify_symbol(oscillator_symbol_form(OscillatorModelParams(d_qq=0.1)))
    assert not verdict.reducible
    assert "p*p'" in verdict.reason
    assert verdict.cross_pp == pytest.approx(0.2)
    assert verdict.lagrangian is None


def test_friction_goes_to_the_dissipative_drift():
    verdict = classify_symbol(oscillator_symbol_form(OscillatorModelParams(lam=0.2, d_pp=0.1)))
    assert verdict.reducible
    assert verdict.drift.d[2] == pytest.approx(-0.2j)
    assert verdict.drift.d_prime[1] == pytest.approx(-0.2j)
    assert verdict.drift.e["q*q'"] == pytest.approx(0.2)


def test_mu_term_becomes_hamiltonian_drift():
    verdict = classify_symbol(oscillator_symbol_form(OscillatorModelParams(mu=0.3)))
    assert verdict.reducible
    assert verdict.lagrangian.b1 == pytest.approx(-0.3)
    assert verdict.lagrangian.coefficients()["q*qdot"] == pytest.approx(-0.3)
    assert all(abs(v) < 1e-12 for v in verdict.drift.d + verdict.drift.d_prime)


def test_position_only_symbol_unsupported(qp):
    q, _ = qp
    with pytest.raises(UnsupportedFormError):
        classify_symbol(lindblad_symbol_form(q * q))


def test_fit_recovers_quadratic_symbol(small_grid):
    form = oscillator_symbol_form(OscillatorModelParams(mass=1.3, omega=0.7, lam=0.1, d_qq=0.2, d_pp=0.3))
    fitted = QuadraticSymbolForm.fit(form.on_grid(small_grid))
    np.testing.assert_allclose(fitted.matrix, form.matrix, atol=1e-8)


def test_fit_rejects_cubic_samples(small_grid):
    x = small_grid.positions
    values = np.broadcast_to(x[:, None, None, None] ** 3, (small_grid.points,) * 4)
    with pytest.raises(UnsupportedFormError):
        QuadraticSymbolForm.fit(SymbolGrid(small_grid, values))


def test_lindblad_symbol_on_grid(qp, small_grid):
    q, p = qp
    hamiltonian = p * p * 0.5 + q * q * 0.5
    operators = [q * 0.3 + p * 0.1j]
    sampled = lindblad_symbol(hamiltonian, operators, small_grid)
    np.testing.assert_array_equal(sampled.values, lindblad_symbol_form(hamiltonian, operators).on_grid(small_grid).values)
    x = small_grid.positions
    momenta = small_grid.momenta(1.0)
    assert sampled.values[3, 5, 2, 7] == pytest.approx(
        complex(lindblad_symbol_form(hamiltonian, operators).evaluate(x[3], x[5], momenta[2], momenta[7]))
    )
