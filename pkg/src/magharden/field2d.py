"""Complex magnetic fields in the plane, their transverse gauge and polar reduction.

A field ``B`` is a sum of parametric components.  Its transverse potential is

    A(x) = (-x2, x1) * int_0^1 B(t x) t dt,

and in polar coordinates ``A = (-sin th, cos th) a(r, th) / r`` with
``a(r, th) = int_0^r B(t cos th, t sin th) t dt``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate, special

from . import circle
from .circle import CirclePotential, Multiplier

KINDS = ("gaussian", "compact_bump", "disk_constant")
INTEGER_TOL = 1e-9
# Gaussian components are treated as supported on this many widths.
GAUSS_CUTOFF = 9.0
# int_0^1 exp(-1/(1-rho^2)) rho d rho = (e^{-1} - E1(1)) / 2
_BUMP_MOMENT = 0.5 * (np.exp(-1.0) - special.exp1(1.0))

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(20)
_PANELS = 8
_CHUNK = 4096


@dataclass(frozen=True)
class Component:
    kind: str
    center: tuple[float, float]
    scale: float
    amplitude: complex

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown component kind {self.kind!r}")
        if not self.scale > 0:
            raise ValueError("scale must be positive")

    def __call__(self, x1, x2) -> np.ndarray:
        d2 = ((np.asarray(x1) - self.center[0]) ** 2 + (np.asarray(x2) - self.center[1]) ** 2) / self.scale**2
        if self.kind == "gaussian":
            prof = np.exp(-0.5 * d2)
        elif self.kind == "compact_bump":
            inside = d2 < 1
            prof = np.zeros_like(d2, dtype=float)
            prof[inside] = np.exp(-1.0 / (1.0 - d2[inside]))
        else:
            prof = (d2 < 1).astype(float)
        return self.amplitude * prof

    @property
    def support_radius(self) -> float:
        """Radius of a disk about the origin containing the support (inf for Gaussians)."""
        if self.kind == "gaussian":
            return np.inf
        return float(np.hypot(*self.center) + self.scale)

    @property
    def ray_radius(self) -> float:
        return self.scale * (GAUSS_CUTOFF if self.kind == "gaussian" else 1.0)

    def integral(self) -> complex:
        """``int_{R^2} B``, in closed form."""
        s2 = self.scale**2
        if self.kind == "gaussian":
            return self.amplitude * 2 * np.pi * s2
        if self.kind == "compact_bump":
            return self.amplitude * 2 * np.pi * s2 * _BUMP_MOMENT
        return self.amplitude * np.pi * s2

    def ray_integral(self, r, theta) -> np.ndarray:
        """``int_0^r B(t e_theta) t dt``; ``r`` and ``theta`` broadcast elementwise."""
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        r = np.broadcast_to(np.asarray(r, dtype=float), theta.shape)
        return _ray_integral(self, r, theta)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "center": list(self.center),
            "scale": self.scale,
            "amplitude": [self.amplitude.real, self.amplitude.imag],
        }


@dataclass(frozen=True)
class ComplexField2D:
    components: tuple[Component, ...] = ()

    def __call__(self, x1, x2) -> np.ndarray:
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        out = np.zeros(np.broadcast(x1, x2).shape, dtype=complex)
        for c in self.components:
            out = out + c(x1, x2)
        return out

    @property
    def support_radius(self) -> float:
        return max((c.support_radius for c in self.components), default=0.0)

    @property
    def is_compact(self) -> bool:
        return np.isfinite(self.support_radius)

    def total_flux(self) -> complex:
        """``(1/2 pi) int_{R^2} B``."""
        return sum((c.integral() for c in self.components), 0j) / (2 * np.pi)

    def breakpoints(self, theta: float, r: float) -> list[float]:
        pts = []
        e = np.array([np.cos(theta), np.sin(theta)])
        for c in self.components:
            p = float(np.dot(c.center, e))
            q2 = float(np.dot(c.center, c.center)) - p * p
            disc = c.ray_radius**2 - q2
            if disc > 0:
                for t in (p - np.sqrt(disc), p + np.sqrt(disc)):
                    if 0 < t < r:
                        pts.append(t)
        return sorted(pts)

    def scaled(self, factor: complex) -> "ComplexField2D":
        return ComplexField2D(
            tuple(Component(c.kind, c.center, c.scale, c.amplitude * factor) for c in self.components)
        )

    def with_flux(self, flux: complex) -> "ComplexField2D":
        """Rescale every amplitude so that ``(1/2 pi) int B`` equals ``flux``."""
        cur = self.total_flux()
        if cur == 0:
            raise ValueError("cannot rescale a field with zero total flux")
        return self.scaled(flux / cur)

    def to_dict(self) -> dict:
        return {"components": [c.to_dict() for c in self.components]}

    @classmethod
    def from_dict(cls, d: dict) -> "ComplexField2D":
        comps = []
        for c in d.get("components", []):
            amp = c.get("amplitude", [1.0, 0.0])
            amp = complex(amp[0], amp[1]) if isinstance(amp, (list, tuple)) else complex(amp)
            comps.append(Component(c["kind"], tuple(c.get("center", (0.0, 0.0))), float(c["scale"]), amp))
        return cls(tuple(comps))

    @classmethod
    def from_json(cls, text: str) -> "ComplexField2D":
        return cls.from_dict(json.loads(text))


def gaussian(amplitude: complex = 1.0, scale: float = 1.0, center=(0.0, 0.0)) -> ComplexField2D:
    return ComplexField2D((Component("gaussian", tuple(center), scale, complex(amplitude)),))


def compact_bump(amplitude: complex = 1.0, scale: float = 1.0, center=(0.0, 0.0)) -> ComplexField2D:
    return ComplexField2D((Component("compact_bump", tuple(center), scale, complex(amplitude)),))


def disk_constant(amplitude: complex = 1.0, scale: float = 1.0, center=(0.0, 0.0)) -> ComplexField2D:
    return ComplexField2D((Component("disk_constant", tuple(center), scale, complex(amplitude)),))


# -- vector potentials --------------------------------------------------------


class VectorPotential:
    """Callable ``(x1, x2) -> (A1, A2)`` with complex components."""

    transverse = False

    def __call__(self, x1, x2):
        raise NotImplementedError


class CanonicalGauge(VectorPotential):
    """The transverse gauge of a field, evaluated through the polar reduction."""

    transverse = True

    def __init__(self, field: ComplexField2D):
        self.field = field

    def polar(self, r, theta) -> np.ndarray:
        rr, tt = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(theta, dtype=float))
        out = np.zeros(rr.size, dtype=complex)
        for comp in self.field.components:
            out += comp.ray_integral(rr.ravel(), tt.ravel())
        return out.reshape(rr.shape)

    def __call__(self, x1, x2):
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        r = np.hypot(x1, x2)
        th = np.arctan2(x2, x1)
        a = np.zeros(r.size, dtype=complex)
        for comp in self.field.components:
            a += comp.ray_integral(r.ravel(), th.ravel())
        a = a.reshape(r.shape)
        safe = np.where(r > 0, r * r, 1.0)
        g = np.where(r > 0, a / safe, 0.5 * self.field(0.0, 0.0))
        return -x2 * g, x1 * g


def _ray_integral(comp: Component, r: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """Ray integral for per-point radii (radius and angle paired elementwise)."""
    e1, e2 = np.cos(theta), np.sin(theta)
    c1, c2 = comp.center
    p = c1 * e1 + c2 * e2
    q2 = np.maximum(c1 * c1 + c2 * c2 - p * p, 0.0)
    if comp.kind == "gaussian":
        s = comp.scale

        def g(t):
            return -s * s * np.exp(-((t - p) ** 2) / (2 * s * s)) + p * s * np.sqrt(np.pi / 2) * special.erf(
                (t - p) / (s * np.sqrt(2))
            )

        return comp.amplitude * np.exp(-q2 / (2 * s * s)) * (g(r) - g(0.0))
    disc = comp.scale**2 - q2
    hit = disc > 0
    root = np.sqrt(np.where(hit, disc, 0.0))
    t1 = np.clip(p - root, 0.0, r)
    t2 = np.where(hit, np.clip(p + root, 0.0, r), t1)
    if comp.kind == "disk_constant":
        return comp.amplitude * 0.5 * (t2**2 - t1**2)
    # composite Gauss-Legendre over the chord, chunked to bound memory
    frac = np.linspace(0, 1, _PANELS + 1)
    out = np.empty(r.shape, dtype=complex)
    for s in range(0, r.size, _CHUNK):
        sl = slice(s, s + _CHUNK)
        edges = t1[sl, None] + (t2 - t1)[sl, None] * frac[None, :]
        lo, hi = edges[:, :-1], edges[:, 1:]
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        t = mid[..., None] + half[..., None] * _GL_NODES
        vals = comp(t * e1[sl, None, None], t * e2[sl, None, None]) * t
        out[sl] = np.sum(vals * _GL_WEIGHTS * half[..., None], axis=(1, 2))
    return out


class ABPotential(VectorPotential):
    """Aharonov-Bohm potential ``(-x2, x1) alpha / |x|^2``; singular at the origin."""

    transverse = True

    def __init__(self, alpha: complex):
        self.alpha = complex(alpha)

    def polar(self, r, theta) -> np.ndarray:
        return np.full(np.broadcast(np.asarray(r), np.asarray(theta)).shape, self.alpha)

    def __call__(self, x1, x2):
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        r2 = x1 * x1 + x2 * x2
        with np.errstate(divide="ignore", invalid="ignore"):
            g = np.where(r2 > 0, self.alpha / np.where(r2 > 0, r2, 1.0), 0.0)
        return -x2 * g, x1 * g


class GradientPotential(VectorPotential):
    """Exact potential ``A = grad F`` of a complex scalar ``F``; its field vanishes."""

    def __init__(self, F: Callable, grad: Callable):
        self.F = F
        self.grad = grad

    def __call__(self, x1, x2):
        return self.grad(np.asarray(x1, dtype=float), np.asarray(x2, dtype=float))


class SumPotential(VectorPotential):
    def __init__(self, *parts: VectorPotential):
        self.parts = parts

    def __call__(self, x1, x2):
        A1 = A2 = 0
        for p in self.parts:
            b1, b2 = p(x1, x2)
            A1 = A1 + b1
            A2 = A2 + b2
        return A1, A2


def gaussian_gradient(coeff: complex, scale: float = 1.0) -> GradientPotential:
    """``A = grad F`` with ``F = coeff * exp(-|x|^2 / (2 scale^2))``."""

    def F(x1, x2):
        return coeff * np.exp(-(x1 * x1 + x2 * x2) / (2 * scale**2))

    def grad(x1, x2):
        f = F(x1, x2) / scale**2
        return -x1 * f, -x2 * f

    return GradientPotential(F, grad)


# -- operations ---------------------------------------------------------------


def _quad_complex(f: Callable[[float], complex], lo: float, hi: float, points) -> complex:
    if hi <= lo:
        return 0j
    pts = [p for p in points if lo < p < hi] or None
    val, err = integrate.quad(f, lo, hi, points=pts, epsabs=1e-13, epsrel=1e-12, limit=200, complex_func=True)
    return complex(val)


def polar_potential(B: ComplexField2D, r: float, theta: float) -> complex:
    """``a(r, theta)`` by adaptive quadrature along the ray."""
    if r < 0:
        raise ValueError("r must be non-negative")
    if r == 0:
        return 0j
    c, s = np.cos(theta), np.sin(theta)
    return _quad_complex(lambda t: complex(B(t * c, t * s)) * t, 0.0, r, B.breakpoints(theta, r))


def polar_potential_many(B: ComplexField2D, r: float, theta) -> np.ndarray:
    """``a(r, theta)`` for an array of angles at one radius (closed forms and Gauss rules)."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    out = np.zeros(theta.shape, dtype=complex)
    if r <= 0:
        return out
    for comp in B.components:
        out += comp.ray_integral(r, theta)
    return out


def gauge_potential(B: ComplexField2D, x) -> np.ndarray:
    """Transverse potential at a point by adaptive quadrature of ``int_0^1 B(t x) t dt``."""
    x1, x2 = float(x[0]), float(x[1])
    rad = np.hypot(x1, x2)
    pts = [t / rad for t in B.breakpoints(np.arctan2(x2, x1), rad)] if rad > 0 else []
    g = _quad_complex(lambda t: complex(B(t * x1, t * x2)) * t, 0.0, 1.0, pts)
    return np.array([-x2 * g, x1 * g])


def slice_potential(B: ComplexField2D, r: float, n: int = 256) -> CirclePotential:
    """The circle potential ``theta -> a(r, theta)`` sampled on an ``n``-point grid."""
    return CirclePotential.from_samples(polar_potential_many(B, r, circle.grid(n)))


@dataclass(frozen=True)
class FluxProfile:
    radii: np.ndarray
    mean_re: np.ndarray
    mean_im: np.ndarray
    total_re: float
    total_im: float

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "mean_re", "mean_im"])
        for row in zip(self.radii, self.mean_re, self.mean_im):
            w.writerow([f"{v:.17g}" for v in row])
        return buf.getvalue()


def flux_profile(B: ComplexField2D, radii, n_theta: int = 256) -> FluxProfile:
    radii = np.asarray(radii, dtype=float)
    if np.any(radii <= 0) or np.any(np.diff(radii) <= 0):
        raise ValueError("radii must be positive and ascending")
    th = circle.grid(n_theta)
    means = np.array([polar_potential_many(B, r, th).mean() for r in radii])
    tot = B.total_flux()
    return FluxProfile(radii, means.real, means.imag, float(tot.real), float(tot.imag))


def dist_to_integers(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return np.abs(x - np.round(x))


def _flux_ok(mean_re, mean_im, tol) -> np.ndarray:
    return (dist_to_integers(mean_re) > tol) | (np.abs(mean_im) > tol)


def check_flux_condition(
    profile: FluxProfile | None = None,
    mode: str = "asymptotic",
    alpha: complex | None = None,
    tol: float = INTEGER_TOL,
) -> bool:
    """Flux hypotheses: limiting means, some radius, or the Aharonov-Bohm coupling."""
    if mode == "ab":
        if alpha is None:
            raise ValueError("ab mode needs alpha")
        alpha = complex(alpha)
        return bool(_flux_ok(alpha.real, alpha.imag, tol))
    if profile is None:
        raise ValueError(f"{mode} mode needs a flux profile")
    if mode == "asymptotic":
        return bool(_flux_ok(profile.total_re, profile.total_im, tol))
    if mode == "some_radius":
        return bool(np.any(_flux_ok(profile.mean_re, profile.mean_im, tol)))
    raise ValueError(f"unknown mode {mode!r}")


def curl(A: VectorPotential, points, h: float = 1e-5) -> np.ndarray:
    p = np.atleast_2d(np.asarray(points, dtype=float))
    x1, x2 = p[:, 0], p[:, 1]
    _, A2p = A(x1 + h, x2)
    _, A2m = A(x1 - h, x2)
    A1p, _ = A(x1, x2 + h)
    A1m, _ = A(x1, x2 - h)
    return (A2p - A2m) / (2 * h) - (A1p - A1m) / (2 * h)


def curl_residual(A: VectorPotential, B: ComplexField2D | None, points, h: float = 1e-5) -> float:
    """``max |rot A - B|`` over sample points (``B=None`` means the zero field)."""
    p = np.atleast_2d(np.asarray(points, dtype=float))
    target = np.zeros(len(p), dtype=complex) if B is None else B(p[:, 0], p[:, 1])
    return float(np.max(np.abs(curl(A, p, h) - target)))


def weight_w(a: CirclePotential) -> Multiplier:
    """``w(x) = exp(int_{-pi}^x Im a)``: turns the imaginary part into a weight."""
    vals = np.exp(circle.antiderivative(a).imag)
    return Multiplier(vals.astype(complex), "w", a.x)


def weighted_form_sides(a: CirclePotential, psi: np.ndarray) -> tuple[float, float]:
    """Both sides of ``int |P_a psi|^2 = int |P_{Re a}(w psi)|^2 w^{-2}``.

    ``psi`` is given by its samples on the potential's grid and must be periodic;
    ``w psi`` need not be, so its derivative is formed with the product rule.
    """
    psi = np.asarray(psi, dtype=complex)
    from .galerkin import _spectral_derivative

    w = weight_w(a).values.real
    dpsi = _spectral_derivative(psi)
    lhs = -1j * dpsi - a.samples * psi
    dphi = w * (a.samples.imag * psi + dpsi)
    rhs = (-1j * dphi - a.samples.real * w * psi) / w
    h = 2 * np.pi / a.n
    return float(np.sum(np.abs(lhs) ** 2) * h), float(np.sum(np.abs(rhs) ** 2) * h)
