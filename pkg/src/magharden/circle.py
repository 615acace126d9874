"""Closed-form objects for the magnetic momentum ``-i d/dx - a(x)`` on the circle.

Grid convention: ``x_j = -pi + 2*pi*j/N`` for ``j = 0..N-1``; Fourier convention
``a(x) = sum_k ahat_k exp(i k x)`` with ``|k| <= K = N/2 - 1``.  Integrals over a
period use the trapezoid rule, which is exact for trigonometric polynomials of
degree below ``N``.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .errors import NotQuasiSelfAdjoint, ResolutionWarning

QSA_TOL = 1e-12
PARITY_TOL = 1e-10

SQRT_2PI = np.sqrt(2 * np.pi)


def grid(n: int) -> np.ndarray:
    return -np.pi + 2 * np.pi * np.arange(n) / n


def _check_n(n: int) -> None:
    if n < 4 or n & (n - 1):
        raise ValueError(f"grid size must be a power of two >= 4, got {n}")


@dataclass(frozen=True)
class CirclePotential:
    """Complex potential on the circle held as grid samples and Fourier coefficients.

    ``fourier[k + K]`` is the coefficient of ``exp(i k x)``.  The Nyquist mode of
    the samples is discarded, so round-tripping is exact only for inputs with
    ``|k| <= K``.
    """

    samples: np.ndarray
    fourier: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def kmax(self) -> int:
        return self.n // 2 - 1

    @property
    def x(self) -> np.ndarray:
        return grid(self.n)

    @classmethod
    def from_samples(cls, samples) -> "CirclePotential":
        samples = np.asarray(samples, dtype=complex).copy()
        _check_n(samples.size)
        n = samples.size
        kmax = n // 2 - 1
        c = np.fft.fft(samples) / n
        ks = np.arange(-kmax, kmax + 1)
        # shift from grid starting at 0 to grid starting at -pi
        coeffs = c[ks % n] * (-1.0) ** ks
        samples.setflags(write=False)
        coeffs.setflags(write=False)
        return cls(samples, coeffs)

    @classmethod
    def from_fourier(cls, coeffs: Mapping[int, complex], n: int) -> "CirclePotential":
        _check_n(n)
        kmax = n // 2 - 1
        full = np.zeros(2 * kmax + 1, dtype=complex)
        for k, c in coeffs.items():
            if abs(k) > kmax:
                raise ValueError(f"mode {k} exceeds cutoff {kmax} for n={n}")
            full[k + kmax] += c
        ks = np.arange(-kmax, kmax + 1)
        samples = np.exp(1j * np.outer(grid(n), ks)) @ full
        samples.setflags(write=False)
        full.setflags(write=False)
        return cls(samples, full)

    @classmethod
    def from_function(cls, f: Callable[[np.ndarray], np.ndarray], n: int = 256) -> "CirclePotential":
        x = grid(n)
        return cls.from_samples(np.broadcast_to(np.asarray(f(x), dtype=complex), x.shape))

    @classmethod
    def constant(cls, c: complex, n: int = 64) -> "CirclePotential":
        return cls.from_fourier({0: c}, n)

    def coef(self, k: int) -> complex:
        if abs(k) > self.kmax:
            return 0j
        return complex(self.fourier[k + self.kmax])

    def coefficients(self, kmax: int) -> np.ndarray:
        """Coefficients for ``k = -kmax..kmax``, zero-padded beyond the cutoff."""
        out = np.zeros(2 * kmax + 1, dtype=complex)
        m = min(kmax, self.kmax)
        out[kmax - m : kmax + m + 1] = self.fourier[self.kmax - m : self.kmax + m + 1]
        return out

    def bandwidth(self, tol: float = 1e-14) -> int:
        """Largest ``|k|`` whose coefficient exceeds ``tol`` times the largest one."""
        mags = np.abs(self.fourier)
        scale = mags.max()
        if scale == 0:
            return 0
        idx = np.nonzero(mags > tol * scale)[0]
        return int(np.max(np.abs(idx - self.kmax)))

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        ks = np.arange(-self.kmax, self.kmax + 1)
        return np.exp(1j * np.multiply.outer(x, ks)) @ self.fourier

    @classmethod
    def _frozen(cls, samples, coeffs) -> "CirclePotential":
        samples, coeffs = np.array(samples, dtype=complex), np.array(coeffs, dtype=complex)
        samples.setflags(write=False)
        coeffs.setflags(write=False)
        return cls(samples, coeffs)

    # coefficient maps are exact: conj(a) has coefficients conj(ahat_{-k})
    def conj(self) -> "CirclePotential":
        return CirclePotential._frozen(np.conj(self.samples), np.conj(self.fourier[::-1]))

    def real(self) -> "CirclePotential":
        return CirclePotential._frozen(self.samples.real, 0.5 * (self.fourier + np.conj(self.fourier[::-1])))

    def imag(self) -> "CirclePotential":
        return CirclePotential._frozen(self.samples.imag, -0.5j * (self.fourier - np.conj(self.fourier[::-1])))

    def resample(self, n: int) -> "CirclePotential":
        """Trigonometric interpolation onto an ``n``-point grid."""
        _check_n(n)
        kmax = min(self.kmax, n // 2 - 1)
        return CirclePotential.from_fourier(
            {k: self.coef(k) for k in range(-kmax, kmax + 1)}, n
        )

    def to_json(self) -> str:
        terms = [[k, c.real, c.imag] for k, c in zip(range(-self.kmax, self.kmax + 1), self.fourier) if c != 0]
        return json.dumps({"n": self.n, "fourier": terms})

    @classmethod
    def from_dict(cls, d: Mapping) -> "CirclePotential":
        if "samples" in d:
            return cls.from_samples([complex(re, im) for re, im in d["samples"]])
        if "fourier" in d:
            return cls.from_fourier({int(k): complex(re, im) for k, re, im in d["fourier"]}, int(d["n"]))
        raise ValueError("potential needs a 'samples' or 'fourier' entry")

    @classmethod
    def from_json(cls, text: str) -> "CirclePotential":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class MeanDecomposition:
    mean: complex
    mean_re: float
    mean_im: float


@dataclass(frozen=True)
class Multiplier:
    values: np.ndarray
    label: str
    x: np.ndarray = field(repr=False)

    def sup(self) -> float:
        return float(np.max(np.abs(self.values)))


@dataclass(frozen=True)
class EigenFamily:
    indices: np.ndarray
    eigenvalues: np.ndarray
    psi: np.ndarray
    phi: np.ndarray
    x: np.ndarray = field(repr=False)


def mean(a: CirclePotential) -> MeanDecomposition:
    m = complex(a.coef(0))
    return MeanDecomposition(m, m.real, m.imag)


def _antiderivative_grid(a: CirclePotential) -> np.ndarray:
    ks = np.arange(-a.kmax, a.kmax + 1)
    c = a.fourier.copy()
    c[a.kmax] = 0
    with np.errstate(divide="ignore", invalid="ignore"):
        c = np.where(ks != 0, c / (1j * ks), 0)
    # periodic part of the primitive, evaluated on the grid through the FFT
    buf = np.zeros(a.n, dtype=complex)
    buf[ks % a.n] = c * (-1.0) ** ks
    periodic = np.fft.ifft(buf) * a.n
    return a.coef(0) * (a.x + np.pi) + periodic - periodic[0]


def antiderivative(a: CirclePotential, x=None):
    """``int_{-pi}^x a``, computed termwise from the Fourier series.

    With ``x=None`` the values on the potential's grid are returned.
    """
    if x is None:
        return _antiderivative_grid(a)
    xs = np.asarray(x, dtype=float)
    if np.any(xs < -np.pi - 1e-14) or np.any(xs > np.pi + 1e-14):
        raise ValueError("x must lie in [-pi, pi]")
    ks = np.arange(-a.kmax, a.kmax + 1)
    nz = ks != 0
    terms = a.fourier[nz] / (1j * ks[nz]) * (
        np.exp(1j * np.multiply.outer(xs, ks[nz])) - (-1.0) ** ks[nz]
    )
    out = a.coef(0) * (xs + np.pi) + terms.sum(axis=-1)
    return complex(out) if out.ndim == 0 else out


def _warn_resolution(a: CirclePotential) -> None:
    tail = np.abs(a.fourier)[np.abs(np.arange(-a.kmax, a.kmax + 1)) > a.n // 4]
    if tail.size and tail.max() > 1e-12:
        warnings.warn(
            f"potential has Fourier content {tail.max():.2e} beyond N/4; refine the grid",
            ResolutionWarning,
            stacklevel=3,
        )


def _primitives(a: CirclePotential) -> tuple[np.ndarray, np.ndarray]:
    """Grid primitives of ``Re a`` and ``Im a``; exactly zero for a vanishing part."""
    re = CirclePotential.from_samples(a.samples.real)
    im = CirclePotential.from_samples(a.samples.imag)
    return _antiderivative_grid(re).real, _antiderivative_grid(im).real


def spectrum(a: CirclePotential, M: int) -> EigenFamily:
    """Eigenvalues ``m - <a>`` for ``|m| <= M`` with the biorthogonal eigenfunction pair.

    ``psi_m = xi e_m`` and ``phi_m = e_m / xi`` with ``e_m`` the orthonormal
    eigenbasis for ``Re a``; this is the closed form, split so that a real
    potential gives ``psi_m == phi_m`` exactly.
    """
    if M < 0:
        raise ValueError("M must be non-negative")
    m_vals = np.arange(-M, M + 1)
    lam = m_vals - mean(a).mean
    xi = xi_function(a).values.real
    e = unitary_basis(a, M)
    return EigenFamily(m_vals, lam, xi * e, e / xi, a.x)


def inner(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Trapezoid-rule L2 inner product, antilinear in the first slot."""
    n = f.shape[-1]
    return (np.conj(f) @ g.T) * (2 * np.pi / n)


def biorth_gram(a: CirclePotential, M: int) -> np.ndarray:
    """Gram matrix ``G[n, m] = (phi_n, psi_m)``; equals the identity up to roundoff."""
    _warn_resolution(a)
    fam = spectrum(a, M)
    return inner(fam.phi, fam.psi)


def omega(a: CirclePotential) -> Multiplier:
    x = a.x
    vals = np.exp(1j * mean(a).mean * x - 1j * antiderivative(a))
    return Multiplier(vals, "omega", x)


def omega_inv(a: CirclePotential) -> Multiplier:
    w = omega(a)
    return Multiplier(1 / w.values, "omega_inv", w.x)


def quasi_self_adjoint(a: CirclePotential, tol: float = QSA_TOL) -> bool:
    return abs(mean(a).mean_im) <= tol


def metric_theta(a: CirclePotential, tol: float = QSA_TOL) -> Multiplier:
    """Metric ``exp(2 int_{-pi}^x Im a)`` that intertwines the operator with its adjoint."""
    if not quasi_self_adjoint(a, tol):
        raise NotQuasiSelfAdjoint(
            f"<Im a> = {mean(a).mean_im:.3e}; spectrum is not real, no bounded metric exists"
        )
    vals = np.exp(2 * antiderivative(a).imag)
    return Multiplier(vals.astype(complex), "theta", a.x)


def xi_function(a: CirclePotential) -> Multiplier:
    x = a.x
    vals = np.exp(mean(a).mean_im * x - _primitives(a)[1])
    return Multiplier(vals.astype(complex), "xi", x)


def unitary_basis(a: CirclePotential, M: int) -> np.ndarray:
    """Orthonormal eigenbasis ``e_m`` of the self-adjoint momentum with potential ``Re a``."""
    x = a.x
    m_vals = np.arange(-M, M + 1)
    prim = _primitives(a)[0]
    return np.exp(1j * (np.outer(m_vals - mean(a).mean_re, x) + prim)) / SQRT_2PI


def _parity(values: np.ndarray) -> np.ndarray:
    n = values.size
    return values[(-np.arange(n)) % n]


def symmetry_class(a: CirclePotential, tol: float = PARITY_TOL) -> dict[str, bool]:
    re, im = a.samples.real, a.samples.imag
    scale = max(1.0, float(np.max(np.abs(a.samples))))

    def even(f):
        return bool(np.max(np.abs(f - _parity(f))) <= tol * scale)

    def odd(f):
        return bool(np.max(np.abs(f + _parity(f))) <= tol * scale)

    return {
        "self_adjoint": bool(np.max(np.abs(im)) <= tol * scale),
        "pt_symmetric": even(re) and odd(im),
        "anti_p_self_adjoint": odd(re) and even(im),
    }


def riesz_bounds(a: CirclePotential) -> tuple[float, float]:
    """Frame bounds of the eigenfunction family, ``(min xi^2, max xi^2)``."""
    xi2 = xi_function(a).values.real ** 2
    return float(xi2.min()), float(xi2.max())


def bari_partial_sum(a: CirclePotential, M: int) -> float:
    fam = spectrum(a, M)
    diff = fam.psi - fam.phi
    return float(np.sum(np.abs(diff) ** 2) * 2 * np.pi / a.n)


def bari_slope(a: CirclePotential) -> float:
    """``||xi - 1/xi||^2 / (2 pi)``, the per-mode increment of :func:`bari_partial_sum`."""
    xi = xi_function(a).values.real
    return float(np.sum((xi - 1 / xi) ** 2) / a.n)


def condition_number(a: CirclePotential) -> float:
    w = np.abs(omega(a).values)
    return float(w.max() * (1 / w).max())
