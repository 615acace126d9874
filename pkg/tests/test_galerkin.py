import numpy as np
import pytest

from magharden import circle, galerkin
from magharden.circle import CirclePotential
from magharden.errors import NotQuasiSelfAdjoint

from conftest import random_potential


def test_momentum_matrix_examples():
    assert np.allclose(galerkin.momentum_matrix(CirclePotential.constant(0.0), 1).entries, np.diag([-1, 0, 1]))
    c = 0.3 + 0.2j
    P = galerkin.momentum_matrix(CirclePotential.constant(c), 3).entries
    assert np.allclose(P, np.diag(np.arange(-3, 4) - c))
    P = galerkin.momentum_matrix(CirclePotential.from_fourier({1: 1.0}, 32), 2).entries
    expect = np.diag(np.arange(-2, 3).astype(complex)) - np.eye(5, k=-1)
    assert np.allclose(P, expect)


def test_band_check():
    a = CirclePotential.from_fourier({7: 1.0}, 16)
    with pytest.raises(galerkin.InsufficientBand):
        galerkin.momentum_matrix(a, 8)


def test_adjoint_examples():
    a = CirclePotential.from_function(np.cos, 32)
    P = galerkin.momentum_matrix(a, 4).entries
    assert np.allclose(P, P.conj().T)
    assert np.allclose(galerkin.adjoint_matrix(CirclePotential.constant(1j), 2).entries, np.diag(np.arange(-2, 3) + 1j))
    b = CirclePotential.from_fourier({1: 1 + 1j}, 32)
    assert np.array_equal(galerkin.adjoint_matrix(b, 5).entries, galerkin.momentum_matrix(b, 5).entries.conj().T)


def test_lambda_min_examples():
    assert galerkin.lambda_min(CirclePotential.constant(0.0)).smallest_singular_sq == pytest.approx(0.0, abs=1e-15)
    assert galerkin.lambda_min(CirclePotential.constant(0.5)).smallest_singular_sq == pytest.approx(0.25, abs=1e-12)
    assert galerkin.lambda_min(CirclePotential.constant(1j)).smallest_singular_sq == pytest.approx(1.0, abs=1e-12)


def test_lambda_min_fields():
    a = random_potential(10)
    res = galerkin.lambda_min(a, 16)
    assert res.converged and res.truncation == 32
    ev = res.eigenvalues
    order = np.lexsort((ev.imag, ev.real))
    assert np.array_equal(ev, ev[order])
    assert res.smallest_singular_sq >= 0


def test_similarity_residual_examples(isin):
    assert galerkin.similarity_residual(CirclePotential.constant(0.4 + 0.1j)) <= 1e-10
    assert galerkin.similarity_residual(isin) <= 1e-8
    assert galerkin.similarity_residual(CirclePotential.from_function(lambda x: (1 + 1j) * np.cos(x), 256)) <= 1e-8


def test_similarity_residual_detects_wrong_transform():
    a = random_potential(11)
    # drop the mean correction: the residual must be O(1), proving the check is sensitive
    w = circle.omega(a).values
    E = galerkin._test_modes(256, 16)
    lhs = w * galerkin._apply_momentum(a.samples, E / w)
    wrong = np.linalg.norm(lhs - galerkin._apply_momentum(np.zeros(256), E), 2)
    assert wrong > 0.1


def test_metric_residual_examples(isin):
    assert galerkin.metric_residual(CirclePotential.from_function(np.cos, 256)) <= 1e-12
    assert galerkin.metric_residual(isin) <= 1e-8
    with pytest.raises(NotQuasiSelfAdjoint):
        galerkin.metric_residual(CirclePotential.constant(1j))


def test_fd_oracle_examples(isin):
    with pytest.raises(ValueError):
        galerkin.fd_momentum_matrix(CirclePotential.constant(0.0), 8)
    N = 128
    ev = np.sort(np.linalg.eigvals(galerkin.fd_momentum_matrix(CirclePotential.constant(0.0, N), N).entries).real)
    # central difference symbol sin(m h)/h
    for m in range(-4, 5):
        err = np.min(np.abs(ev - m))
        assert err <= abs(m) ** 3 * (2 * np.pi / N) ** 2 / 6 + 1e-12
    seq = [galerkin.fd_lambda(CirclePotential.constant(0.5, n), n) for n in (64, 256, 1024)]
    assert seq[0] < seq[1] < seq[2] < 0.25
    assert abs(seq[2] - 0.25) < 1e-4
    shifted = CirclePotential.from_function(lambda x: 0.3 + 1j * np.sin(x), 1024)
    assert abs(galerkin.fd_lambda(shifted, 1024) - galerkin.lambda_min(shifted).smallest_singular_sq) < 1e-4


def test_spectrum_deviation_central_window():
    a = random_potential(12)
    assert galerkin.spectrum_deviation(a, 64, 16) <= 1e-8
    with pytest.raises(ValueError):
        galerkin.spectrum_deviation(a, 4, 8)


def test_matrix_json_export():
    m = galerkin.momentum_matrix(CirclePotential.constant(0.5), 1)
    assert m.to_json()[1][1] == [-0.5, 0.0]
    assert list(m.modes) == [-1, 0, 1]
