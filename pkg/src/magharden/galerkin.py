"""Matrix discretizations of the circle momentum and residual checks.

Fourier-basis matrices are indexed ``m = -M..M``.  For ``a(x) = sum ahat_k e^{ikx}``
the Galerkin entries are ``P[m, n] = m*delta_mn - ahat_{m-n}``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from . import circle
from .circle import CirclePotential
from .errors import NotConverged

CONSISTENCY_TOL = 1e-8


class InsufficientBand(ValueError):
    pass


@dataclass(frozen=True)
class OperatorMatrix:
    entries: np.ndarray
    basis: str
    size: int

    @property
    def modes(self) -> np.ndarray:
        return np.arange(-self.size, self.size + 1)

    def to_json(self) -> list:
        return [[[z.real, z.imag] for z in row] for row in self.entries]


@dataclass(frozen=True)
class SpectralResult:
    eigenvalues: np.ndarray
    smallest_singular_sq: float
    truncation: int
    residual: float
    converged: bool


def _toeplitz_coeffs(a: CirclePotential, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    diff = np.subtract.outer(rows, cols)
    kmax = int(np.max(np.abs(diff))) if diff.size else 0
    c = a.coefficients(kmax)
    return c[diff + kmax]


def _check_band(a: CirclePotential, M: int) -> None:
    if 2 * M <= a.kmax:
        return
    edge = np.abs(a.fourier[np.abs(np.arange(-a.kmax, a.kmax + 1)) >= a.kmax - 1])
    if edge.max(initial=0.0) > 1e-12 * max(1.0, np.abs(a.fourier).max()):
        raise InsufficientBand(
            f"need coefficients up to |k| = {2 * M}; potential is not resolved at n = {a.n}"
        )


def momentum_matrix(a: CirclePotential, M: int) -> OperatorMatrix:
    _check_band(a, M)
    m = np.arange(-M, M + 1)
    P = np.diag(m.astype(complex)) - _toeplitz_coeffs(a, m, m)
    return OperatorMatrix(P, "fourier", M)


def adjoint_matrix(a: CirclePotential, M: int) -> OperatorMatrix:
    return momentum_matrix(a.conj(), M)


def image_matrix(a: CirclePotential, M: int) -> np.ndarray:
    """Exact action of the operator on modes ``|n| <= M``, rows spanning the whole image."""
    band = a.bandwidth()
    rows = np.arange(-M - band, M + band + 1)
    cols = np.arange(-M, M + 1)
    P = -_toeplitz_coeffs(a, rows, cols)
    P[band + np.arange(2 * M + 1), np.arange(2 * M + 1)] += cols
    return P


def _sigma_min_sq(a: CirclePotential, M: int) -> float:
    s = sla.svdvals(image_matrix(a, M))
    return float(s[-1] ** 2)


def sort_eigenvalues(ev: np.ndarray) -> np.ndarray:
    return ev[np.lexsort((ev.imag, ev.real))]


def lambda_min(a: CirclePotential, M: int = 16, tol: float = CONSISTENCY_TOL) -> SpectralResult:
    """Lowest point of the spectrum of ``P_a^* P_a`` from the truncated Fourier basis.

    The value is ``min ||P_a phi||^2 / ||phi||^2`` over trigonometric polynomials of
    degree ``M``, so it approaches the exact value from above.  The doubling rule
    compares ``M`` with ``2M``.
    """
    try:
        ev = sla.eigvals(momentum_matrix(a, M).entries)
        lam = _sigma_min_sq(a, M)
        lam2 = _sigma_min_sq(a, 2 * M)
    except (np.linalg.LinAlgError, ValueError) as exc:
        if isinstance(exc, InsufficientBand):
            raise
        raise NotConverged(f"dense solver failed: {exc}") from exc
    resid = abs(lam - lam2)
    return SpectralResult(sort_eigenvalues(ev), lam2, 2 * M, resid, resid <= tol)


def _spectral_derivative(values: np.ndarray) -> np.ndarray:
    """Derivative of periodic samples along the last axis, Nyquist mode dropped."""
    n = values.shape[-1]
    k = np.fft.fftfreq(n, 1.0 / n)
    k[n // 2] = 0
    return np.fft.ifft(1j * k * np.fft.fft(values, axis=-1), axis=-1)


def _apply_momentum(a_samples: np.ndarray, f: np.ndarray) -> np.ndarray:
    return -1j * _spectral_derivative(f) - a_samples * f


def _test_modes(n: int, M: int) -> np.ndarray:
    x = circle.grid(n)
    return np.exp(1j * np.outer(np.arange(-M, M + 1), x)) / np.sqrt(n)


def similarity_residual(a: CirclePotential, M: int = 16, n: int = 256) -> float:
    """Spectral norm of ``Omega P_a Omega^{-1} - P_<a>`` on the modes ``|m| <= M``.

    Multipliers act pointwise on an ``n``-point grid, derivatives are spectral,
    and the test modes are normalized in the discrete l2 norm.
    """
    a = a.resample(n) if a.n != n else a
    w = circle.omega(a).values
    E = _test_modes(n, M)
    lhs = w * _apply_momentum(a.samples, E / w)
    rhs = _apply_momentum(np.full(n, circle.mean(a).mean), E)
    return float(np.linalg.norm(lhs - rhs, 2))


def metric_residual(a: CirclePotential, M: int = 16, n: int = 256) -> float:
    """Spectral norm of ``Theta P_a Theta^{-1} - P_a^*`` on the modes ``|m| <= M``."""
    a = a.resample(n) if a.n != n else a
    theta = circle.metric_theta(a).values
    E = _test_modes(n, M)
    lhs = theta * _apply_momentum(a.samples, E / theta)
    rhs = _apply_momentum(np.conj(a.samples), E)
    return float(np.linalg.norm(lhs - rhs, 2))


def fd_momentum_matrix(a: CirclePotential, n: int) -> OperatorMatrix:
    """Periodic central-difference discretization on ``n`` grid points (oracle only)."""
    if n < 16:
        raise ValueError("finite-difference oracle needs n >= 16")
    h = 2 * np.pi / n
    x = circle.grid(n)
    D = (np.eye(n, k=1) - np.eye(n, k=-1)).astype(complex)
    D[-1, 0] = 1
    D[0, -1] = -1
    D /= 2 * h
    P = -1j * D - np.diag(a(x))
    return OperatorMatrix(P, "grid", n)


def fd_lambda(a: CirclePotential, n: int) -> float:
    s = sla.svdvals(fd_momentum_matrix(a, n).entries)
    return float(s[-1] ** 2)


def spectrum_deviation(a: CirclePotential, M: int, m_max: int) -> float:
    """Worst distance from ``m - <a>`` (``|m| <= m_max``) to the eigenvalues of the size-``M`` matrix.

    Truncation pollutes only the edge of the matrix spectrum, so the comparison is
    restricted to a central window ``m_max`` well below ``M``.
    """
    if m_max > M:
        raise ValueError("m_max must not exceed M")
    ev = sla.eigvals(momentum_matrix(a, M).entries)
    target = np.arange(-m_max, m_max + 1) - circle.mean(a).mean
    return float(np.max(np.min(np.abs(target[:, None] - ev[None, :]), axis=1)))
