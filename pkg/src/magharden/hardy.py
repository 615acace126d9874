"""Local Hardy weights and certified lower bounds on Hardy constants.

Weights used below:

* compact fields:   1 / (1 + |x|^2)
* logarithmic:      1 / (1 + |x|^2 log^2 |x|)
* Aharonov-Bohm:    1 / |x|^2
"""

from __future__ import annotations

import csv
import io
import json
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy import integrate, interpolate, optimize, special

from . import circle, galerkin
from .errors import (
    FluxConditionFailed,
    HypothesisViolated,
    SupportExceedsR,
    TrivialField,
)
from .field2d import (
    ComplexField2D,
    FluxProfile,
    VectorPotential,
    check_flux_condition,
    dist_to_integers,
    slice_potential,
)

BESSEL_J0_ZERO = float(special.jn_zeros(0, 1)[0])
GAMMA_EXTERIOR = 0.25


# -- lambda curves ------------------------------------------------------------


@dataclass
class LambdaCurve:
    radii: np.ndarray
    lam: np.ndarray
    converged: np.ndarray
    mean_re: np.ndarray
    mean_im: np.ndarray
    mean_abs2: np.ndarray
    slices: np.ndarray = field(repr=False)
    total_re: float = np.nan
    total_im: float = np.nan

    @property
    def profile(self) -> FluxProfile:
        return FluxProfile(self.radii, self.mean_re, self.mean_im, self.total_re, self.total_im)

    def antiflux(self, tol: float = 1e-6) -> np.ndarray:
        return (dist_to_integers(self.mean_re) <= tol) & (np.abs(self.mean_im) <= tol)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "lambda", "mean_re", "mean_im", "converged", "antiflux"])
        rows = zip(self.radii, self.lam, self.mean_re, self.mean_im, self.converged, self.antiflux())
        for r, lam, mr, mi, ok, anti in rows:
            w.writerow([f"{r:.17g}", f"{lam:.17g}", f"{mr:.17g}", f"{mi:.17g}", int(bool(ok)), int(bool(anti))])
        return buf.getvalue()


def lambda_at(B: ComplexField2D, r: float, M: int = 16, n_theta: int = 256) -> galerkin.SpectralResult:
    return galerkin.lambda_min(slice_potential(B, r, n_theta), M)


def lambda_curve(B: ComplexField2D, radii, M: int = 16, n_theta: int = 256) -> LambdaCurve:
    """``r -> lambda_a(r)`` on a radius grid, each value checked by mode doubling."""
    radii = np.asarray(radii, dtype=float)
    if np.any(radii <= 0):
        raise ValueError("radii must be positive")
    lam, ok, slices = [], [], []
    for r in radii:
        a = slice_potential(B, r, n_theta)
        res = galerkin.lambda_min(a, M)
        lam.append(res.smallest_singular_sq)
        ok.append(res.converged)
        slices.append(a.samples)
    slices = np.array(slices)
    means = slices.mean(axis=1)
    tot = B.total_flux()
    return LambdaCurve(
        radii,
        np.array(lam),
        np.array(ok),
        means.real,
        means.imag,
        np.mean(np.abs(slices) ** 2, axis=1),
        slices,
        float(tot.real),
        float(tot.imag),
    )


def lipschitz_bounds(curve: LambdaCurve) -> np.ndarray:
    """Bound on ``|lambda(r2) - lambda(r1)|`` for each pair of adjacent radii."""
    sigma = np.max(np.abs(np.diff(curve.slices, axis=0)), axis=1)
    root = np.sqrt(np.maximum(curve.mean_abs2[:-1], curve.mean_abs2[1:]))
    return sigma**2 + 2 * sigma * root


def local_hardy_weight(curve: LambdaCurve, x) -> float:
    r = float(np.hypot(x[0], x[1]))
    if r < curve.radii[0] or r > curve.radii[-1]:
        raise ValueError(f"|x| = {r} outside the curve range [{curve.radii[0]}, {curve.radii[-1]}]")
    return float(np.interp(r, curve.radii, curve.lam) / r**2)


# -- one-dimensional constants and cut-offs -----------------------------------


@dataclass(frozen=True)
class Gamma1D:
    gamma_interior: float
    gamma_exterior: float
    gamma: float


def gamma_1d(r0: float) -> Gamma1D:
    """Constants of the radial Hardy-type inequalities inside and outside ``r0``.

    Inside: first Dirichlet eigenvalue of the disk of radius ``r0``, ``(j_{0,1}/r0)^2``.
    Outside: ``t = log(r/r0)`` turns the inequality into the half-line Hardy
    inequality with best constant ``1/4``.
    """
    if r0 <= 0:
        raise ValueError("r0 must be positive")
    gi = (BESSEL_J0_ZERO / r0) ** 2
    return Gamma1D(gi, GAMMA_EXTERIOR, min(gi, GAMMA_EXTERIOR))


def _phi(u):
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    pos = u > 0
    out[pos] = np.exp(-1.0 / u[pos])
    return out


def smooth_step(u):
    """C-infinity step: 0 for ``u <= -1``, 1 for ``u >= 1``, ``S(-u) = 1 - S(u)``."""
    v = (np.asarray(u, dtype=float) + 1) / 2
    a, b = _phi(v), _phi(1 - v)
    return a / (a + b)


@dataclass(frozen=True)
class CutoffFunction:
    """Smooth ``0 <= xi <= 1``; zero near ``r0``, one outside ``(r_lo, r_hi)``.

    With ``r_lo == 0`` the function also vanishes on ``[0, r0]``.
    """

    r0: float
    r_lo: float
    r_hi: float
    flat: float

    def __call__(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        up = smooth_step(2 * (r - (self.r0 + self.flat)) / (self.r_hi - self.r0 - self.flat) - 1)
        if self.r_lo <= 0:
            return np.where(r <= self.r0, 0.0, up)
        down = smooth_step(2 * ((self.r0 - self.flat) - r) / (self.r0 - self.flat - self.r_lo) - 1)
        return np.where(r <= self.r0, down, up)

    def derivative_sup(self, samples: int = 100_001) -> float:
        lo = self.r_lo if self.r_lo > 0 else 0.0
        r = np.linspace(lo, self.r_hi, samples)
        return float(np.max(np.abs(np.gradient(self(r), r))))


def build_cutoff(interval, r0: float | None = None, flat_fraction: float = 0.01) -> CutoffFunction:
    lo, hi = float(interval[0]), float(interval[1])
    if not (0 <= lo < hi) or not np.isfinite(hi):
        raise ValueError(f"degenerate interval {interval}")
    if r0 is None:
        r0 = 0.5 * (lo + hi)
    if not lo < r0 < hi:
        raise ValueError("r0 must lie inside the interval")
    flat = flat_fraction * (hi - lo)
    if r0 - flat <= lo and lo > 0 or r0 + flat >= hi:
        raise ValueError("interval too narrow for the flat zone")
    return CutoffFunction(r0, lo, hi, flat)


def weight_ratio_inf(r0: float) -> float:
    """``inf_{r>0} (1 + r^2 log^2 r) / (1 + r^2 log^2 (r/r0))``; both end limits are 1."""

    def ratio(r):
        return (1 + r * r * np.log(r) ** 2) / (1 + r * r * np.log(r / r0) ** 2)

    r = np.logspace(-6, 6, 200_001)
    vals = ratio(r)
    i = int(np.argmin(vals))
    best = min(1.0, float(vals[i]))
    if 0 < i < r.size - 1:
        res = optimize.minimize_scalar(
            lambda s: ratio(np.exp(s)), bounds=(np.log(r[i - 1]), np.log(r[i + 1])), method="bounded",
            options={"xatol": 1e-12},
        )
        best = min(best, float(res.fun))
    return best


def a_R(R: float) -> float:
    """``inf_{0<r<R} (1 + r^2) / (1 + r^2 log^2 r)``."""

    def ratio(r):
        return (1 + r * r) / (1 + r * r * np.log(r) ** 2)

    r = np.logspace(-8, np.log10(R), 100_001)
    vals = ratio(r)
    i = int(np.argmin(vals))
    best = float(vals[i])
    if 0 < i < r.size - 1:
        res = optimize.minimize_scalar(
            lambda s: ratio(np.exp(s)), bounds=(np.log(r[i - 1]), np.log(r[i + 1])), method="bounded",
            options={"xatol": 1e-12},
        )
        best = min(best, float(res.fun))
    return min(best, float(ratio(R)), 1.0)


# -- certified constants ------------------------------------------------------


@dataclass
class HardyEstimate:
    constant: float
    kind: str
    ledger: dict

    def to_dict(self) -> dict:
        return {"constant": self.constant, "kind": self.kind, "ledger": _jsonable(self.ledger)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def _interpolation_constant(g_over_4: float, local: float, penalty: float, ratio: float) -> float:
    return g_over_4 * local / (local + penalty) * ratio


def recompute(est: HardyEstimate) -> float:
    """Re-evaluate the final formula of an estimate from its ledger entries alone."""
    L = {k: v["value"] if isinstance(v, dict) else v for k, v in est.ledger.items()}
    if est.kind == "log_c_tilde":
        return _interpolation_constant(
            L["gamma"] / 4, L["nu"], L["xi_prime_sup"] ** 2 + L["gamma"] / 2, L["weight_ratio_inf"]
        )
    if est.kind == "compact_c":
        return 0.5 * min(L["c_tilde"] * L["a_R"], L["lambda_R"])
    if est.kind == "ab_c_inf":
        return L["lambda_alpha"]
    if est.kind == "robust_c_hat":
        return _interpolation_constant(
            L["gamma_R"] / 4, L["mu_A_R"], L["xi_prime_sup"] ** 2 + L["gamma_R"], L["weight_ratio_inf"]
        )
    raise ValueError(f"unknown kind {est.kind}")


def _entry(value, note: str) -> dict:
    return {"value": value, "note": note}


def select_interval(curve: LambdaCurve) -> tuple[float, int, int]:
    """``nu`` as half the largest ``lambda/r^2`` and the widest grid bracket around it."""
    q = curve.lam / curve.radii**2
    i = int(np.argmax(q))
    nu = 0.5 * float(q[i])
    lo = i
    while lo > 0 and q[lo - 1] >= nu:
        lo -= 1
    hi = i
    while hi < q.size - 1 and q[hi + 1] >= nu:
        hi += 1
    return nu, lo, hi


def hardy_constant_log(
    B: ComplexField2D, curve: LambdaCurve, M: int = 16, n_theta: int = 256, refine: int = 8
) -> HardyEstimate:
    """Constant for the weight ``1/(1 + |x|^2 log^2|x|)`` under the some-radius flux condition."""
    if not check_flux_condition(curve.profile, "some_radius") or np.max(curve.lam) <= 0:
        raise FluxConditionFailed("no radius with <Re a> not in Z or <Im a> != 0")
    nu, lo, hi = select_interval(curve)
    if hi == lo:
        # single qualifying grid point: bracket with its neighbours
        lo, hi = max(lo - 1, 0), min(hi + 1, curve.radii.size - 1)
    r_lo, r_hi = float(curve.radii[lo]), float(curve.radii[hi])
    # the threshold must hold on all of I, not just on the grid
    fine = np.linspace(r_lo, r_hi, refine * (hi - lo) + 1)
    q_fine = np.array([lambda_at(B, r, M, n_theta).smallest_singular_sq / r**2 for r in fine])
    nu_cert = min(nu, float(q_fine.min()))
    if nu_cert <= 0:
        raise FluxConditionFailed("lambda/r^2 vanishes inside the selected interval")
    r0 = 0.5 * (r_lo + r_hi)
    g = gamma_1d(r0)
    cut = build_cutoff((r_lo, r_hi), r0)
    xi_p = cut.derivative_sup()
    ratio = weight_ratio_inf(r0)
    c = _interpolation_constant(g.gamma / 4, nu_cert, xi_p**2 + g.gamma / 2, ratio)
    literal = _interpolation_constant(g.gamma / 4, nu_cert, 1.0 + g.gamma / 2, ratio)
    ledger = {
        "nu": _entry(nu_cert, "min of lambda/r^2 over I (grid rule nu = max/2, checked on a refined grid)"),
        "nu_grid": _entry(nu, "half the grid maximum of lambda/r^2"),
        "interval_I": _entry([r_lo, r_hi], "widest grid bracket with lambda/r^2 >= nu"),
        "r0": _entry(r0, "midpoint of I"),
        "gamma": _entry(g.gamma, "min(gamma_interior, gamma_exterior)"),
        "gamma_interior": _entry(g.gamma_interior, "(j_{0,1}/r0)^2"),
        "gamma_exterior": _entry(g.gamma_exterior, "half-line Hardy constant"),
        "xi_prime_sup": _entry(xi_p, "sup |xi'| of the cut-off, dense sampling"),
        "xi_sup": _entry(1.0, "sup |xi|"),
        "weight_ratio_inf": _entry(ratio, "inf_r (1+r^2 log^2 r)/(1+r^2 log^2(r/r0))"),
        "c_with_xi_sup": _entry(literal, "same formula with sup|xi|^2 = 1 in place of sup|xi'|^2"),
    }
    return HardyEstimate(c, "log_c_tilde", ledger)


def hardy_constant_compact(
    B: ComplexField2D, curve: LambdaCurve, R: float, M: int = 16, n_theta: int = 256
) -> HardyEstimate:
    """Constant for the weight ``1/(1+|x|^2)``; ``B`` supported in the disk of radius ``R``."""
    if not B.is_compact:
        raise SupportExceedsR("field is not compactly supported")
    if B.support_radius > R:
        raise SupportExceedsR(f"support radius {B.support_radius} exceeds R = {R}")
    if not check_flux_condition(curve.profile, "asymptotic"):
        raise FluxConditionFailed("total flux has integer real part and zero imaginary part")
    log_est = hardy_constant_log(B, curve, M, n_theta)
    lam_R = lambda_at(B, R, M, n_theta)
    aR = a_R(R)
    c = 0.5 * min(log_est.constant * aR, lam_R.smallest_singular_sq)
    ledger = dict(log_est.ledger)
    ledger.update(
        {
            "c_tilde": _entry(log_est.constant, "logarithmic constant"),
            "a_R": _entry(aR, "inf_{r<R} (1+r^2)/(1+r^2 log^2 r)"),
            "R": _entry(R, "radius of a disk containing supp B"),
            "lambda_R": _entry(lam_R.smallest_singular_sq, "lambda_a(R), constant for r >= R"),
            "c_min_without_half": _entry(
                min(log_est.constant * aR, lam_R.smallest_singular_sq),
                "min{c_tilde a_R, lambda(R)} before halving for the two-region sum",
            ),
        }
    )
    return HardyEstimate(c, "compact_c", ledger)


def lambda_constant(alpha: complex) -> float:
    """``dist(Re alpha, Z)^2 + (Im alpha)^2``: the value for a constant potential."""
    alpha = complex(alpha)
    return float(dist_to_integers(alpha.real) ** 2 + alpha.imag**2)


def ab_constant(alpha: complex) -> HardyEstimate:
    if not check_flux_condition(mode="ab", alpha=alpha):
        raise FluxConditionFailed("Re alpha is an integer and Im alpha = 0")
    lam = lambda_constant(alpha)
    return HardyEstimate(lam, "ab_c_inf", {"lambda_alpha": _entry(lam, "dist(Re a, Z)^2 + (Im a)^2")})


# -- magnetic Neumann threshold on a disk -------------------------------------


@dataclass(frozen=True)
class MuResult:
    value: float
    values: tuple[float, ...]
    grids: tuple[int, ...]
    rel_change: float
    converged: bool


_LINK_NODES, _LINK_WEIGHTS = np.polynomial.legendre.leggauss(4)


def _disk_form(A: VectorPotential, R: float, nr: int, ntheta: int):
    """Peierls-phase finite-volume form on a cell-centred polar grid of the disk."""
    dr = R / nr
    dth = 2 * np.pi / ntheta
    r = (np.arange(nr) + 0.5) * dr
    th = np.arange(ntheta) * dth
    idx = np.arange(nr * ntheta).reshape(nr, ntheta)

    # radial links (i, k) -> (i+1, k): integral of A . e_r dr
    ri = r[:-1, None] + 0.5 * dr * (1 + _LINK_NODES)[None, :]
    phase_r = np.zeros((nr - 1, ntheta), dtype=complex)
    for k in range(ntheta):
        c, s = np.cos(th[k]), np.sin(th[k])
        A1, A2 = A(ri * c, ri * s)
        phase_r[:, k] = 0.5 * dr * np.sum((A1 * c + A2 * s) * _LINK_WEIGHTS, axis=1)
    # angular links (i, k) -> (i, k+1): integral of A . e_theta r dtheta
    tk = th[:, None] + 0.5 * dth * (1 + _LINK_NODES)[None, :]
    phase_t = np.zeros((nr, ntheta), dtype=complex)
    for i in range(nr):
        c, s = np.cos(tk), np.sin(tk)
        A1, A2 = A(r[i] * c, r[i] * s)
        phase_t[i] = 0.5 * dth * r[i] * np.sum((-A1 * s + A2 * c) * _LINK_WEIGHTS, axis=1)

    rows, cols, vals = [], [], []

    def add(i_from, i_to, w, phase):
        U = np.exp(1j * phase)
        rows.extend([i_to, i_from, i_to, i_from])
        cols.extend([i_to, i_from, i_from, i_to])
        vals.extend([w, w * np.abs(U) ** 2, -w * U, -w * np.conj(U)])

    w_r = ((r[:-1] + 0.5 * dr) * dth / dr)[:, None] * np.ones((1, ntheta))
    add(idx[:-1].ravel(), idx[1:].ravel(), w_r.ravel(), phase_r.ravel())
    w_t = (dr / (r * dth))[:, None] * np.ones((1, ntheta))
    add(idx.ravel(), np.roll(idx, -1, axis=1).ravel(), w_t.ravel(), phase_t.ravel())
    n = nr * ntheta
    H = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    )
    mass = np.repeat(r * dr * dth, ntheta)
    return H, mass


def mu_disk_single(A: VectorPotential, R: float, nr: int, ntheta: int | None = None) -> float:
    ntheta = ntheta or 4 * nr
    H, mass = _disk_form(A, R, nr, ntheta)
    s = sp.diags(1 / np.sqrt(mass))
    S = (s @ H @ s).tocsc()
    S = 0.5 * (S + S.getH())
    vals = spla.eigsh(S, k=1, sigma=-0.05, which="LM", return_eigenvectors=False)
    return max(float(vals[0]), 0.0)


def mu_disk(A: VectorPotential, R: float, nr: int = 24, levels: int = 2, rtol: float = 0.05) -> MuResult:
    """Lowest eigenvalue of ``|grad_A psi|^2`` on the disk with natural boundary condition.

    Grids are refined by doubling; the reported value is the smallest one seen.
    """
    grids = tuple(nr * 2**j for j in range(levels))
    values = tuple(mu_disk_single(A, R, g) for g in grids)
    a, b = values[-2], values[-1]
    rel = abs(a - b) / max(abs(b), 1e-300)
    return MuResult(min(values), values, grids, rel, rel <= rtol or max(a, b) <= 1e-10)


# -- robust inequality --------------------------------------------------------


def k_R(A: VectorPotential, r0: float, r_max_factor: float = 1e4, n_r: int = 400, n_theta: int = 64) -> float:
    """``sup_{|x| >= r0} |Im A(x)| |x| log(|x|/r0)`` on a log-spaced polar grid."""
    r = r0 * np.logspace(0, np.log10(r_max_factor), n_r)
    th = circle.grid(n_theta)
    R_, T_ = np.meshgrid(r, th, indexing="ij")
    A1, A2 = A(R_ * np.cos(T_), R_ * np.sin(T_))
    mag = np.sqrt(np.imag(A1) ** 2 + np.imag(A2) ** 2)
    prof = np.max(mag * R_ * np.log(R_ / r0), axis=1)
    sup = float(prof.max())
    if sup == 0:
        return 0.0
    tail = prof[-n_r // 4 :]
    if np.any(np.diff(tail) > 1e-12 * sup) and tail[-1] > 1e-10:
        if prof[-1] >= sup * (1 - 1e-12):
            raise HypothesisViolated("|Im A| |x| log|x| does not decay on the search grid")
        warnings.warn("k_R profile still increasing at the edge of the search grid", RuntimeWarning)
    return sup


def robust_constant(
    A: VectorPotential, B: ComplexField2D, R: float, nr: int = 24, levels: int = 2
) -> HardyEstimate:
    """Constant for the weight ``1/(1+|x|^2 log^2|x|)`` valid for any potential of ``B``."""
    if not B.components or all(c.amplitude == 0 for c in B.components):
        raise TrivialField("the field vanishes identically")
    r0 = R / 2
    k = k_R(A, r0)
    if k >= 0.5:
        raise HypothesisViolated(f"k_R = {k:.3g} >= 1/2 at R = {R}")
    gamma_R = ((1 - 2 * k) / 2) ** 2
    mu = mu_disk(A, R, nr, levels)
    if mu.value <= 0:
        raise TrivialField("mu_A(R) vanishes")
    cut = build_cutoff((0.0, R), r0)
    xi_p = cut.derivative_sup()
    ratio = weight_ratio_inf(r0)
    c = _interpolation_constant(gamma_R / 4, mu.value, xi_p**2 + gamma_R, ratio)
    ledger = {
        "R": _entry(R, "disk radius"),
        "r0": _entry(r0, "R/2"),
        "k_R": _entry(k, "sup_{|x|>=r0} |Im A| |x| log(|x|/r0)"),
        "gamma_R": _entry(gamma_R, "((1 - 2 k_R)/2)^2"),
        "mu_A_R": _entry(mu.value, f"Neumann threshold, grids {mu.grids}, values {mu.values}"),
        "xi_prime_sup": _entry(xi_p, "sup |xi'|, xi = 0 on (0, r0], 1 beyond R"),
        "xi_sup": _entry(1.0, "sup |xi|"),
        "weight_ratio_inf": _entry(ratio, "inf_r (1+r^2 log^2 r)/(1+r^2 log^2(r/r0))"),
    }
    return HardyEstimate(c, "robust_c_hat", ledger)


# -- optimality sequence ------------------------------------------------------


@dataclass(frozen=True)
class FnSequence:
    """Mollified piecewise-logarithmic profile ``f_n`` in the variable ``t = log r``."""

    n: float
    width: float

    @property
    def breaks(self) -> tuple[float, float, float]:
        L = np.log(self.n)
        return L, 2 * L, 3 * L

    @property
    def delta(self) -> float:
        return self.width * np.log(self.n)

    def dg(self, t):
        t1, t2, t3 = self.breaks
        d = self.delta
        s = smooth_step((t - t1) / d) - 2 * smooth_step((t - t2) / d) + smooth_step((t - t3) / d)
        return s / np.log(self.n)

    def _table(self):
        t1, _, t3 = self.breaks
        d = self.delta
        t = np.linspace(t1 - d, t3 + d, 400_001)
        dg = self.dg(t)
        g = integrate.cumulative_trapezoid(dg, t, initial=0.0)
        return t, g, interpolate.CubicHermiteSpline(t, g, dg)

    def g(self, t):
        tt, _, spline = self._cached
        t = np.asarray(t, dtype=float)
        return np.where((t < tt[0]) | (t > tt[-1]), 0.0, spline(np.clip(t, tt[0], tt[-1])))

    def __post_init__(self):
        object.__setattr__(self, "_cached", self._table())

    def f(self, r):
        return self.g(np.log(np.asarray(r, dtype=float)))

    def df(self, r):
        r = np.asarray(r, dtype=float)
        return self.dg(np.log(r)) / r

    @property
    def support(self) -> tuple[float, float]:
        t1, _, t3 = self.breaks
        return float(np.exp(t1 - self.delta)), float(np.exp(t3 + self.delta))


@dataclass(frozen=True)
class OptimalityResult:
    n: float
    rayleigh: float
    numerator: float
    denominator: float


def optimality_sequence(n: float, R: float = 1.0, width: float = 0.01) -> OptimalityResult:
    """Radial quotient ``int |f'|^2 r dr / int |f|^2 r/(1+r^2) dr`` for the mollified ``f_n``."""
    if n < 3:
        raise ValueError("n must be at least 3")
    fn = FnSequence(float(n), width)
    if fn.support[0] <= R:
        raise ValueError(f"support of f_n starts at {fn.support[0]:.4g} <= R = {R}")
    t, g, _ = fn._cached
    num = integrate.trapezoid(fn.dg(t) ** 2, t)
    # r/(1+r^2) dr = r^2/(1+r^2) dt, written stably for large r
    den = integrate.trapezoid(g**2 / (1 + np.exp(-2 * t)), t)
    return OptimalityResult(float(n), float(num / den), float(num), float(den))
