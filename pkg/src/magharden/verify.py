"""Brute-force oracles: 2D quadrature of magnetic forms and direct Hardy checks."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.linalg as sla

from . import circle
from .circle import CirclePotential
from .field2d import VectorPotential
from .galerkin import _spectral_derivative
from .hardy import FnSequence

PASS_SLACK = 1e-6


# -- test functions -----------------------------------------------------------


@dataclass
class TestFunction2D:
    """A smooth test function with its analytic gradient."""

    __test__ = False  # keep pytest from collecting this class

    kind: str
    params: dict
    value: Callable = field(repr=False)
    grad: Callable = field(repr=False)
    extent: float = 0.0

    def __call__(self, x1, x2):
        return self.value(x1, x2)


def gaussian_packet(center=(0.0, 0.0), width: float = 1.0, k=(0.0, 0.0), amp: complex = 1.0) -> TestFunction2D:
    c1, c2 = center
    k1, k2 = k

    def value(x1, x2):
        return amp * np.exp(-((x1 - c1) ** 2 + (x2 - c2) ** 2) / (2 * width**2) + 1j * (k1 * x1 + k2 * x2))

    def grad(x1, x2):
        v = value(x1, x2)
        return v * (-(x1 - c1) / width**2 + 1j * k1), v * (-(x2 - c2) / width**2 + 1j * k2)

    ext = float(np.hypot(c1, c2) + 7 * width)
    return TestFunction2D("gaussian_packet", {"center": [c1, c2], "width": width, "k": [k1, k2]}, value, grad, ext)


def _bump(u):
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    ins = np.abs(u) < 1
    out[ins] = np.exp(-1.0 / (1.0 - u[ins] ** 2))
    return out


def _dbump(u):
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    ins = np.abs(u) < 1
    ui = u[ins]
    out[ins] = np.exp(-1.0 / (1.0 - ui**2)) * (-2 * ui / (1.0 - ui**2) ** 2)
    return out


def ring_bump(r_center: float, half_width: float, m: int = 0, amp: complex = 1.0) -> TestFunction2D:
    """``b((r - rc)/hw) e^{i m theta}``; vanishes near the origin when ``hw < rc``."""

    def parts(x1, x2):
        r = np.hypot(x1, x2)
        th = np.arctan2(x2, x1)
        u = (r - r_center) / half_width
        return r, th, u

    def value(x1, x2):
        r, th, u = parts(x1, x2)
        return amp * _bump(u) * np.exp(1j * m * th)

    def grad(x1, x2):
        r, th, u = parts(x1, x2)
        e = amp * np.exp(1j * m * th)
        safe = np.where(r > 0, r, 1.0)
        dr = _dbump(u) / half_width * e
        dth = _bump(u) * 1j * m / safe * e
        c, s = x1 / safe, x2 / safe
        return dr * c - dth * s, dr * s + dth * c

    return TestFunction2D(
        "ring_bump", {"r_center": r_center, "half_width": half_width, "m": m}, value, grad, r_center + half_width
    )


def fn_lift(n: float, width: float = 0.01, m: int = 0, angular=None) -> TestFunction2D:
    """Radial lift ``f_n(|x|) * Phi(theta)`` of the optimality profile.

    ``angular`` is an optional pair ``(Phi, Phi')`` of callables; default ``e^{i m theta}``.
    """
    fn = FnSequence(float(n), width)
    if angular is None:
        Phi = lambda th: np.exp(1j * m * th)
        dPhi = lambda th: 1j * m * np.exp(1j * m * th)
    else:
        Phi, dPhi = angular

    def value(x1, x2):
        r = np.hypot(x1, x2)
        safe = np.where(r > 0, r, 1.0)
        return np.where(r > 0, fn.f(safe), 0.0) * Phi(np.arctan2(x2, x1))

    def grad(x1, x2):
        r = np.hypot(x1, x2)
        safe = np.where(r > 0, r, 1.0)
        th = np.arctan2(x2, x1)
        dr = fn.df(safe) * Phi(th)
        dth = fn.f(safe) * dPhi(th) / safe
        c, s = x1 / safe, x2 / safe
        return dr * c - dth * s, dr * s + dth * c

    return TestFunction2D("fn_sequence", {"n": n, "width": width, "m": m}, value, grad, fn.support[1])


def random_bandlimited(seed: int, terms: int = 3, max_mode: int = 3, scale=(0.5, 1.5)) -> TestFunction2D:
    """Sum of ``c_j z^{m_j} exp(-|x - p_j|^2 / (2 s_j^2))`` with ``z = x1 +/- i x2``."""
    rng = np.random.default_rng(seed)
    coef = rng.normal(size=terms) + 1j * rng.normal(size=terms)
    modes = rng.integers(-max_mode, max_mode + 1, size=terms)
    widths = rng.uniform(*scale, size=terms)
    shifts = rng.normal(scale=0.5, size=(terms, 2))

    def _terms(x1, x2):
        for c, m, s, (p1, p2) in zip(coef, modes, widths, shifts):
            z = x1 + 1j * np.sign(m) * x2 if m else np.ones_like(x1, dtype=complex)
            g = np.exp(-((x1 - p1) ** 2 + (x2 - p2) ** 2) / (2 * s * s))
            yield c, int(abs(m)), int(np.sign(m)), s, p1, p2, z, g

    def value(x1, x2):
        out = 0j
        for c, m, sg, s, p1, p2, z, g in _terms(x1, x2):
            out = out + c * z**m * g
        return out

    def grad(x1, x2):
        d1 = d2 = 0j
        for c, m, sg, s, p1, p2, z, g in _terms(x1, x2):
            zm = z**m
            dz = m * z ** (m - 1) if m else 0.0
            d1 = d1 + c * g * (dz - zm * (x1 - p1) / (s * s))
            d2 = d2 + c * g * (1j * sg * dz - zm * (x2 - p2) / (s * s))
        return d1, d2

    ext = float(np.max(np.hypot(shifts[:, 0], shifts[:, 1]) + (max_mode + 7) * widths))
    return TestFunction2D("random_bandlimited", {"seed": seed, "terms": terms}, value, grad, ext)


def random_ring(seed: int, terms: int = 2, r_range=(0.5, 4.0), max_mode: int = 3) -> TestFunction2D:
    """Superposition of ring bumps supported away from the origin."""
    rng = np.random.default_rng(seed)
    parts = []
    for _ in range(terms):
        rc = rng.uniform(*r_range)
        hw = rng.uniform(0.2, 0.9) * rc
        m = int(rng.integers(-max_mode, max_mode + 1))
        amp = complex(rng.normal(), rng.normal())
        parts.append(ring_bump(rc, hw, m, amp))

    def value(x1, x2):
        return sum(p.value(x1, x2) for p in parts)

    def grad(x1, x2):
        g = [p.grad(x1, x2) for p in parts]
        return sum(a for a, _ in g), sum(b for _, b in g)

    return TestFunction2D(
        "random_ring", {"seed": seed, "terms": terms}, value, grad, max(p.extent for p in parts)
    )


def seeded_suite(count: int, seed: int = 0, avoid_origin: bool = False) -> list[TestFunction2D]:
    """Deterministic mix of packets and band-limited functions (rings only if ``avoid_origin``)."""
    rng = np.random.default_rng(seed)
    out = []
    for j in range(count):
        s = int(rng.integers(0, 2**31 - 1))
        if avoid_origin:
            out.append(random_ring(s))
        elif j % 3 == 0:
            r2 = np.random.default_rng(s)
            out.append(
                gaussian_packet(
                    tuple(r2.normal(scale=1.0, size=2)), float(r2.uniform(0.4, 1.5)), tuple(r2.normal(scale=1.0, size=2))
                )
            )
        elif j % 3 == 1:
            out.append(random_bandlimited(s))
        else:
            out.append(random_ring(s, r_range=(0.5, 3.0)))
    return out


# -- quadrature ---------------------------------------------------------------


@dataclass
class Grid2D:
    """Cell-centred tensor grid on ``[-L, L]^2``; never contains the origin."""

    L: float
    n: int

    def __post_init__(self):
        h = 2 * self.L / self.n
        x = -self.L + h * (np.arange(self.n) + 0.5)
        self.h = h
        self.x1, self.x2 = np.meshgrid(x, x, indexing="ij")
        self._A: dict[int, tuple] = {}

    @property
    def area(self) -> float:
        return self.h * self.h

    def potential(self, A: VectorPotential | None):
        if A is None:
            return 0.0, 0.0
        key = id(A)
        if key not in self._A:
            self._A[key] = (A, A(self.x1, self.x2))
        return self._A[key][1]


def quadratic_form_2d(A: VectorPotential | None, psi: TestFunction2D, grid: Grid2D) -> float:
    """``int |grad psi - i A psi|^2`` by the tensor midpoint rule."""
    A1, A2 = grid.potential(A)
    v = psi.value(grid.x1, grid.x2)
    g1, g2 = psi.grad(grid.x1, grid.x2)
    dens = np.abs(g1 - 1j * A1 * v) ** 2 + np.abs(g2 - 1j * A2 * v) ** 2
    return float(np.sum(dens) * grid.area)


def weighted_norm_2d(psi: TestFunction2D, weight: Callable | None, grid: Grid2D) -> float:
    v = np.abs(psi.value(grid.x1, grid.x2)) ** 2
    if weight is not None:
        v = v * weight(grid.x1, grid.x2)
    return float(np.sum(v) * grid.area)


def weight_compact(x1, x2):
    return 1.0 / (1.0 + x1 * x1 + x2 * x2)


def weight_log(x1, x2):
    r2 = x1 * x1 + x2 * x2
    return 1.0 / (1.0 + r2 * (0.5 * np.log(r2)) ** 2)


def weight_ab(x1, x2):
    return 1.0 / (x1 * x1 + x2 * x2)


WEIGHTS = {"compact": weight_compact, "log": weight_log, "ab": weight_ab}


@dataclass
class HardyReport:
    constant: float
    margins: list[float]
    quotients: list[float]
    functions: list[dict]
    grid: dict
    passed: bool

    def to_dict(self) -> dict:
        return {
            "constant": self.constant,
            "passed": self.passed,
            "grid": self.grid,
            "results": [
                dict(f, quotient=q, margin=m) for f, q, m in zip(self.functions, self.quotients, self.margins)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def check_hardy(
    A: VectorPotential | None,
    weight: Callable,
    c: float,
    suite: Sequence[TestFunction2D],
    grid: Grid2D,
    slack: float = PASS_SLACK,
) -> HardyReport:
    """Margins ``form/weighted_norm - c`` over a suite; passes iff every margin >= -slack."""
    qs = []
    for psi in suite:
        if psi.extent > grid.L:
            raise ValueError(f"test function extent {psi.extent:.3g} exceeds grid half-width {grid.L}")
        qs.append(quadratic_form_2d(A, psi, grid) / weighted_norm_2d(psi, weight, grid))
    margins = [q - c for q in qs]
    return HardyReport(
        c,
        margins,
        qs,
        [{"kind": p.kind, **p.params} for p in suite],
        {"L": grid.L, "n": grid.n},
        bool(all(m >= -slack for m in margins)),
    )


def polar_identity_check(A: VectorPotential, psi: TestFunction2D, grid: Grid2D, n_r: int = 400, n_theta: int = 256) -> float:
    """Relative gap between the Cartesian form and its polar reduction."""
    if not getattr(A, "transverse", False):
        raise ValueError("polar reduction needs a transverse potential")
    cart = quadratic_form_2d(A, psi, grid)
    # polar side: Gauss-Legendre in r on panels, trapezoid in theta
    rmax = psi.extent
    nodes, weights = np.polynomial.legendre.leggauss(20)
    panels = max(1, n_r // 20)
    edges = np.linspace(0.0, rmax, panels + 1)
    r = (0.5 * (edges[:-1, None] + edges[1:, None]) + 0.5 * np.diff(edges)[:, None] * nodes).ravel()
    wr = (0.5 * np.diff(edges)[:, None] * weights).ravel()
    th = circle.grid(n_theta)
    R_, T_ = np.meshgrid(r, th, indexing="ij")
    c, s = np.cos(T_), np.sin(T_)
    x1, x2 = R_ * c, R_ * s
    phi = psi.value(x1, x2)
    g1, g2 = psi.grad(x1, x2)
    dphi_r = g1 * c + g2 * s
    dphi_t = R_ * (-g1 * s + g2 * c)
    a = A.polar(R_, T_)
    dens = np.abs(dphi_r) ** 2 + np.abs(-1j * dphi_t - a * phi) ** 2 / R_**2
    polar = float(np.sum(dens * R_ * wr[:, None]) * (2 * np.pi / n_theta))
    return abs(cart - polar) / abs(cart)


# -- one-dimensional oracles --------------------------------------------------


@dataclass
class BoundReport:
    lhs: list[float]
    rhs: list[float]
    passed: list[bool]


def relative_bound_check(a: CirclePotential, psi_suite, eps: float) -> BoundReport:
    """``||a psi||^2 <= eps ||a||^2 ||psi'||^2 + ||a||^2 (1/eps + 1/(2 pi)) ||psi||^2``."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    h = 2 * np.pi / a.n
    na2 = float(np.sum(np.abs(a.samples) ** 2) * h)
    lhs, rhs, ok = [], [], []
    for psi in psi_suite:
        psi = np.asarray(psi, dtype=complex)
        l = float(np.sum(np.abs(a.samples * psi) ** 2) * h)
        d = float(np.sum(np.abs(_spectral_derivative(psi)) ** 2) * h)
        p = float(np.sum(np.abs(psi) ** 2) * h)
        r = eps * na2 * d + na2 * (1 / eps + 1 / (2 * np.pi)) * p
        lhs.append(l)
        rhs.append(r)
        ok.append(l <= r * (1 + 1e-12) + 1e-300)
    return BoundReport(lhs, rhs, ok)


def gamma_exterior_oracle(n: int = 4000, s_half: float = 60.0) -> float:
    """Minimize ``int g'^2 dt / int g^2 / t^2 dt`` on a log-spaced grid with g = 0 at both ends."""
    t = np.exp(np.linspace(-s_half, s_half, n + 2))
    ht = np.diff(t)
    # stiffness from piecewise-linear elements, lumped mass for the weight 1/t^2
    main = 1 / ht[:-1] + 1 / ht[1:]
    off = -1 / ht[1:-1]
    mass = 0.5 * (ht[:-1] + ht[1:]) / t[1:-1] ** 2
    d = 1 / np.sqrt(mass)
    return float(sla.eigh_tridiagonal(main * d * d, off * d[:-1] * d[1:], select="i", select_range=(0, 0))[0][0])


def gamma_interior_oracle(r0: float, n: int = 2000) -> float:
    """Lowest eigenvalue of ``-(r f')'/r`` on ``(0, r0)`` with ``f(r0) = 0`` (cell-centred)."""
    h = r0 / n
    r = (np.arange(n) + 0.5) * h
    rf = np.arange(1, n + 1) * h  # faces r_{i+1/2}
    main = np.zeros(n)
    main[:-1] += rf[:-1] / h
    main[1:] += rf[:-1] / h
    main[-1] += r0 / (h / 2)
    off = -rf[:-1] / h
    mass = r * h
    d = 1 / np.sqrt(mass)
    return float(sla.eigh_tridiagonal(main * d * d, off * d[:-1] * d[1:], select="i", select_range=(0, 0))[0][0])


def constant_lambda_oracle(alpha: complex, mmax: int = 1000) -> float:
    """Brute force ``min_m |m - alpha|^2`` over ``|m| <= mmax``."""
    m = np.arange(-mmax, mmax + 1)
    return float(np.min(np.abs(m - complex(alpha)) ** 2))


def trapezoid_mean(f: Callable, n: int = 1 << 14) -> complex:
    """Periodic trapezoid average of ``f`` over ``[-pi, pi)``."""
    return complex(np.mean(f(circle.grid(n))))
