import json
import warnings

import numpy as np
import pytest
from scipy import integrate, special

from magharden import circle
from magharden.circle import CirclePotential
from magharden.errors import NotQuasiSelfAdjoint, ResolutionWarning

from conftest import random_potential


def test_grid_convention():
    x = circle.grid(8)
    assert x[0] == -np.pi
    assert np.allclose(np.diff(x), 2 * np.pi / 8)


@pytest.mark.parametrize("n", [3, 6, 100])
def test_bad_grid_sizes(n):
    with pytest.raises(ValueError):
        CirclePotential.from_samples(np.zeros(n))


def test_fourier_roundtrip():
    a = random_potential(0, n=64, kmax=10)
    b = CirclePotential.from_samples(a.samples)
    assert np.max(np.abs(b.samples - a.samples)) <= 1e-12 * np.max(np.abs(a.samples))
    assert np.allclose(b.fourier, a.fourier, atol=1e-14)


def test_fourier_convention():
    a = CirclePotential.from_fourier({1: 1.0}, 32)
    assert np.allclose(a.samples, np.exp(1j * a.x))
    assert a.coef(1) == pytest.approx(1.0)
    assert a(0.3) == pytest.approx(np.exp(0.3j))


def test_json_roundtrip():
    a = random_potential(1, n=32)
    b = CirclePotential.from_json(a.to_json())
    assert np.allclose(a.samples, b.samples, atol=1e-14)
    c = CirclePotential.from_dict({"samples": [[z.real, z.imag] for z in a.samples]})
    assert np.allclose(a.samples, c.samples)
    d = json.loads(a.to_json())
    assert d["n"] == 32


# mean
def test_mean_examples():
    assert circle.mean(CirclePotential.constant(1j)).mean == pytest.approx(1j)
    assert abs(circle.mean(CirclePotential.from_function(np.sin, 64)).mean) < 1e-15
    a = CirclePotential.from_function(lambda x: 0.3 + 0.7j * np.cos(x), 64)
    m = circle.mean(a)
    ref = integrate.quad(lambda x: 0.3, -np.pi, np.pi)[0] / (2 * np.pi)
    assert m.mean == pytest.approx(ref, abs=1e-15)
    assert m.mean == m.mean_re + 1j * m.mean_im


# antiderivative
def test_antiderivative_examples(isin):
    assert circle.antiderivative(CirclePotential.constant(1.0), 0.0) == pytest.approx(np.pi)
    assert abs(circle.antiderivative(CirclePotential.from_function(np.cos, 32), np.pi)) < 1e-14
    # quadrature oracle fixes the sign: int_{-pi}^0 sin = -2
    assert integrate.quad(np.sin, -np.pi, 0)[0] == pytest.approx(-2.0)
    assert circle.antiderivative(isin, 0.0) == pytest.approx(-2j, abs=1e-14)


def test_antiderivative_full_period():
    a = random_potential(2)
    assert circle.antiderivative(a, np.pi) == pytest.approx(2 * np.pi * circle.mean(a).mean, abs=1e-12)


def test_antiderivative_grid_matches_pointwise():
    a = random_potential(3, n=64)
    assert np.allclose(circle.antiderivative(a), circle.antiderivative(a, a.x), atol=1e-13)


def test_antiderivative_range():
    with pytest.raises(ValueError):
        circle.antiderivative(CirclePotential.constant(1.0), 4.0)


# spectrum
def test_spectrum_examples(isin):
    assert np.allclose(circle.spectrum(CirclePotential.constant(0.0), 1).eigenvalues, [-1, 0, 1])
    assert np.allclose(circle.spectrum(CirclePotential.constant(0.5), 0).eigenvalues, [-0.5])
    assert np.allclose(circle.spectrum(isin, 1).eigenvalues, [-1, 0, 1], atol=1e-15)


def test_eigenfunctions_solve_equation():
    a = random_potential(4, n=128)
    fam = circle.spectrum(a, 3)
    from magharden.galerkin import _apply_momentum

    for lam, psi in zip(fam.eigenvalues, fam.psi):
        assert np.max(np.abs(_apply_momentum(a.samples, psi) - lam * psi)) < 1e-10


def test_eigenfunctions_periodic():
    a = random_potential(5, n=128)
    fam = circle.spectrum(a, 2)
    # closed forms evaluated at x = pi continue the grid periodically
    x = np.pi
    prim = circle.antiderivative(a, x)
    psi_pi = np.exp(1j * (fam.eigenvalues * x + prim)) / np.sqrt(2 * np.pi)
    assert np.allclose(psi_pi, fam.psi[:, 0], atol=1e-12)


# biorthogonality
@pytest.mark.parametrize(
    "f,M",
    [(lambda x: 0 * x, 2), (lambda x: 1j * np.sin(x), 3), (lambda x: (1 + 1j) * np.cos(x), 4)],
)
def test_biorth_gram_examples(f, M):
    a = CirclePotential.from_function(f, 128)
    G = circle.biorth_gram(a, M)
    assert G.shape == (2 * M + 1, 2 * M + 1)
    assert np.max(np.abs(G - np.eye(2 * M + 1))) <= 1e-10


def test_biorth_gram_warns_when_underresolved():
    a = CirclePotential.from_fourier({7: 0.1}, 16)
    with pytest.warns(ResolutionWarning):
        circle.biorth_gram(a, 1)


# omega
def test_omega_examples(isin):
    assert np.allclose(circle.omega(CirclePotential.constant(0.0)).values, 1.0)
    c = 0.7 - 0.2j
    w = circle.omega(CirclePotential.constant(c)).values
    assert np.allclose(w, np.exp(-1j * c * np.pi))
    assert np.allclose(circle.omega(isin).values, np.exp(-np.cos(isin.x) - 1), atol=1e-13)
    assert np.allclose(circle.omega(isin).values * circle.omega_inv(isin).values, 1.0)


# metric
def test_metric_examples(isin):
    assert np.allclose(circle.metric_theta(CirclePotential.from_function(np.cos, 32)).values, 1.0)
    th = circle.metric_theta(isin).values.real
    assert np.allclose(th, np.exp(-2 * (np.cos(isin.x) + 1)), atol=1e-13)
    assert th[0] == pytest.approx(1.0)
    with pytest.raises(NotQuasiSelfAdjoint):
        circle.metric_theta(CirclePotential.constant(1j))


def test_theta_is_omega_modulus_squared():
    a = random_potential(6, qsa=True)
    w = circle.omega(a).values
    assert np.allclose(circle.metric_theta(a).values, np.conj(w) * w, atol=1e-12)


# xi
def test_xi_examples(isin):
    assert np.allclose(circle.xi_function(CirclePotential.from_function(np.sin, 32)).values, 1.0)
    assert np.allclose(circle.xi_function(CirclePotential.constant(1j)).values, np.exp(-np.pi))
    assert np.allclose(circle.xi_function(isin).values, np.exp(np.cos(isin.x) + 1), atol=1e-13)


def test_xi_factorization():
    a = random_potential(7, n=128)
    M = 3
    fam = circle.spectrum(a, M)
    xi = circle.xi_function(a).values.real
    e = circle.unitary_basis(a, M)
    assert np.max(np.abs(fam.psi - xi * e)) <= 1e-12
    assert np.max(np.abs(fam.phi - e / xi)) <= 1e-12


# quasi-self-adjointness and symmetry
def test_qsa_examples(isin):
    assert circle.quasi_self_adjoint(CirclePotential.from_function(np.cos, 32))
    assert circle.quasi_self_adjoint(isin)
    assert not circle.quasi_self_adjoint(CirclePotential.constant(1j))


def test_symmetry_examples():
    pt = circle.symmetry_class(CirclePotential.from_function(lambda x: np.cos(x) + 1j * np.sin(x), 32))
    assert pt["pt_symmetric"] and not pt["anti_p_self_adjoint"]
    ap = circle.symmetry_class(CirclePotential.from_function(lambda x: np.sin(x) + 1j * np.cos(x), 32))
    assert ap["anti_p_self_adjoint"] and not ap["pt_symmetric"]
    re = circle.symmetry_class(CirclePotential.from_function(np.cos, 32))
    assert re == {"self_adjoint": True, "pt_symmetric": True, "anti_p_self_adjoint": False}


def test_qsa_without_pt_witness():
    # zero-mean imaginary part, but Re a is not even: QSA holds, PT fails
    a = CirclePotential.from_function(lambda x: np.sin(x) + 1j * np.sin(x + 0.4), 64)
    assert circle.quasi_self_adjoint(a)
    assert not circle.symmetry_class(a)["pt_symmetric"]


# basis diagnostics
def test_riesz_examples(isin):
    assert circle.riesz_bounds(CirclePotential.from_function(np.cos, 32)) == pytest.approx((1.0, 1.0))
    lo, hi = circle.riesz_bounds(CirclePotential.constant(1j))
    assert lo == pytest.approx(np.exp(-2 * np.pi)) and hi == pytest.approx(np.exp(-2 * np.pi))
    assert circle.riesz_bounds(isin) == pytest.approx((1.0, np.exp(4)))


def test_bari_examples(isin):
    assert circle.bari_partial_sum(CirclePotential.from_function(np.cos, 32), 5) == 0.0
    s4, s8 = circle.bari_partial_sum(isin, 4), circle.bari_partial_sum(isin, 8)
    assert s4 / s8 == pytest.approx(9 / 17, rel=1e-12)
    # (1/2pi) int (xi - 1/xi)^2 with xi = e^{cos x + 1} is 2 cosh(2) I_0(2) - 2
    frozen = 2 * np.cosh(2) * special.i0(2) - 2
    assert circle.bari_partial_sum(isin, 0) == pytest.approx(frozen, rel=1e-12)
    assert circle.bari_slope(isin) == pytest.approx(frozen, rel=1e-12)


def test_condition_number_examples(isin):
    assert circle.condition_number(CirclePotential.from_function(np.cos, 32)) == pytest.approx(1.0)
    assert circle.condition_number(CirclePotential.constant(1j)) == pytest.approx(1.0)
    assert circle.condition_number(isin) == pytest.approx(np.e**2)
