"""Command-line front end.

    magharden <command> --input FILE --output FILE [--modes M] [--grid N]
              [--radii lo:hi:n] [--seed S]

Exit codes: 0 success, 1 input error, 2 not quasi-self-adjoint, 3 hypothesis gate
failure, 4 non-convergence, 5 verification FAIL.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import warnings

import numpy as np

from . import __version__, circle, galerkin, hardy, verify
from .circle import CirclePotential
from .errors import (
    FluxConditionFailed,
    HypothesisViolated,
    NotConverged,
    NotQuasiSelfAdjoint,
    SupportExceedsR,
    TrivialField,
)
from .field2d import (
    ABPotential,
    CanonicalGauge,
    ComplexField2D,
    SumPotential,
    check_flux_condition,
    flux_profile,
    gaussian_gradient,
)

EXIT_OK, EXIT_INPUT, EXIT_QSA, EXIT_GATE, EXIT_CONVERGENCE, EXIT_FAIL = range(6)
COMMANDS = ("spectrum", "metric", "lambda-curve", "hardy", "verify")
DEFAULT_RADII = "0.05:3:60"


class InputError(ValueError):
    pass


# -- helpers ------------------------------------------------------------------


def _c(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise InputError(f"complex number must be [re, im], got {v!r}")
        return complex(float(v[0]), float(v[1]))
    return complex(v)


def parse_radii(spec: str) -> np.ndarray:
    try:
        lo, hi, n = spec.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError as exc:
        raise InputError(f"--radii expects lo:hi:n, got {spec!r}") from exc
    if not (0 < lo < hi) or n < 2:
        raise InputError("--radii needs 0 < lo < hi and n >= 2")
    return np.linspace(lo, hi, n)


def _load(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        line = text.splitlines()[exc.lineno - 1] if exc.lineno - 1 < len(text.splitlines()) else ""
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}\n    {line}") from exc
    if not isinstance(data, dict):
        raise InputError(f"{path}: top-level JSON value must be an object")
    return data


def _write(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".magharden-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dump(obj) -> str:
    return json.dumps(hardy._jsonable(obj), indent=2, sort_keys=True) + "\n"


def _public(cfg: dict) -> dict:
    return {k: v for k, v in cfg.items() if k != "radii_array"}


def _potential(data: dict, grid: int | None) -> CirclePotential:
    try:
        a = CirclePotential.from_dict(data.get("potential", data))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"invalid potential: {exc}") from exc
    return a.resample(grid) if grid and grid != a.n else a


def _field(data: dict) -> ComplexField2D:
    try:
        return ComplexField2D.from_dict(data.get("field", data))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"invalid field: {exc}") from exc


# -- commands -----------------------------------------------------------------


def cmd_spectrum(data: dict, cfg: dict) -> dict:
    a = _potential(data, cfg["grid"])
    M = cfg["modes"]
    fam = circle.spectrum(a, M)
    M_mat = max(4 * M, 16)
    dev = galerkin.spectrum_deviation(a, M_mat, M)
    ev = galerkin.sort_eigenvalues(np.linalg.eigvals(galerkin.momentum_matrix(a, M_mat).entries))
    central = ev[np.abs(ev.real - circle.mean(a).mean_re) <= M + 0.5]
    return {
        "mean": _c(circle.mean(a).mean),
        "eigenvalues": [_c(z) for z in fam.eigenvalues],
        "galerkin_eigenvalues": [_c(z) for z in central],
        "galerkin_truncation": M_mat,
        "max_deviation": dev,
        "quasi_self_adjoint": circle.quasi_self_adjoint(a),
        "symmetry_class": circle.symmetry_class(a),
    }


def cmd_metric(data: dict, cfg: dict) -> dict:
    a = _potential(data, cfg["grid"])
    theta = circle.metric_theta(a)
    n = cfg["grid"] or 256
    return {
        "x": theta.x,
        "theta_samples": theta.values.real,
        "metric_residual": galerkin.metric_residual(a, cfg["modes"], n),
        "residual_grid": n,
    }


def cmd_lambda_curve(data: dict, cfg: dict) -> str:
    B = _field(data)
    curve = hardy.lambda_curve(B, cfg["radii_array"], cfg["modes"], cfg["grid"] or 256)
    head = "".join(f"# {line}\n" for line in _dump({"config": _public(cfg)}).splitlines())
    return head + curve.to_csv()


def _hardy_setup(data: dict, cfg: dict):
    """Return (estimate, potential, weight name) for a hardy config."""
    kind = data.get("kind")
    M, n_theta = cfg["modes"], cfg["grid"] or 256
    if kind == "ab":
        if "alpha" not in data:
            raise InputError("ab config needs 'alpha'")
        alpha = _complex(data["alpha"])
        return hardy.ab_constant(alpha), ABPotential(alpha), "ab"
    if kind not in ("compact", "log", "robust"):
        raise InputError(f"unknown hardy kind {kind!r}; expected compact, log, ab or robust")
    B = _field(data)
    if not B.components or all(c.amplitude == 0 for c in B.components):
        raise TrivialField("the field vanishes identically")
    A = CanonicalGauge(B)
    if kind == "robust":
        if "R" not in data:
            raise InputError("robust config needs 'R'")
        grad = data.get("gradient")
        if grad:
            A = SumPotential(A, gaussian_gradient(_complex(grad["coeff"]), float(grad.get("scale", 1.0))))
        est = hardy.robust_constant(A, B, float(data["R"]))
        return est, A, "log"
    curve = hardy.lambda_curve(B, cfg["radii_array"], M, n_theta)
    if kind == "log":
        return hardy.hardy_constant_log(B, curve, M, n_theta), A, "log"
    if "R" not in data:
        raise InputError("compact config needs 'R'")
    return hardy.hardy_constant_compact(B, curve, float(data["R"]), M, n_theta), A, "compact"


def cmd_hardy(data: dict, cfg: dict) -> dict:
    est, _, weight = _hardy_setup(data, cfg)
    return {"estimate": est.to_dict(), "weight": weight}


def cmd_verify(data: dict, cfg: dict) -> tuple[dict, bool]:
    check = data.get("check")
    seed = cfg["seed"]
    if check == "hardy":
        sub = data.get("hardy")
        if not isinstance(sub, dict):
            raise InputError("hardy check needs a 'hardy' object")
        est, A, weight = _hardy_setup(sub, cfg)
        c = float(data.get("constant", est.constant))
        suite = verify.seeded_suite(int(data.get("count", 50)), seed, avoid_origin=(weight == "ab"))
        g = verify.Grid2D(float(data.get("L", 18.0)), int(data.get("n", 720)))
        rep = verify.check_hardy(A, verify.WEIGHTS[weight], c, suite, g)
        return {"estimate": est.to_dict(), "report": rep.to_dict()}, rep.passed
    if check == "polar":
        B = _field(data)
        A = CanonicalGauge(B)
        suite = verify.seeded_suite(int(data.get("count", 5)), seed)
        g = verify.Grid2D(float(data.get("L", 18.0)), int(data.get("n", 720)))
        gaps = [verify.polar_identity_check(A, psi, g) for psi in suite]
        ok = max(gaps) <= float(data.get("tol", 1e-4))
        return {"relative_gaps": gaps, "functions": [{"kind": p.kind, **p.params} for p in suite]}, ok
    if check == "optimality":
        B = _field(data)
        if check_flux_condition(flux_profile(B, [float(data.get("R", 1.0))]), "asymptotic"):
            raise InputError("optimality check expects a field whose total flux violates the flux condition")
        ns = [float(n) for n in data.get("n", [3, 10, 100, 1000])]
        res = [hardy.optimality_sequence(n, float(data.get("R", 1.0))) for n in ns]
        q = [r.rayleigh for r in res]
        c = float(data.get("constant", q[0]))
        ok = all(b < a for a, b in zip(q, q[1:])) and q[-1] < 0.1 * c
        out = {
            "n": ns,
            "rayleigh": q,
            "numerator": [r.numerator for r in res],
            "two_over_log_n": [2 / np.log(n) for n in ns],
            "would_be_constant": c,
            "margins": [x - c for x in q],
        }
        return out, ok
    raise InputError(f"unknown check {check!r}; expected hardy, polar or optimality")


# -- entry point --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="magharden", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", required=True, help="potential, field or config JSON")
    p.add_argument("--output", required=True, help="output path (JSON, CSV for lambda-curve)")
    p.add_argument("--modes", type=int, default=16, help="Fourier truncation M (default 16)")
    p.add_argument("--grid", type=int, default=None, help="grid size N (circle samples or angular nodes)")
    p.add_argument("--radii", default=DEFAULT_RADII, help=f"lo:hi:n (default {DEFAULT_RADII})")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.modes < 1:
            raise InputError("--modes must be positive")
        data = _load(args.input)
        cfg = {
            "command": args.command,
            "input": args.input,
            "modes": args.modes,
            "grid": args.grid,
            "radii": args.radii,
            "seed": args.seed,
            "threads": os.environ.get("MAGHARDEN_THREADS"),
            "version": __version__,
            "input_data": data,
        }
        cfg["radii_array"] = parse_radii(args.radii)
        code = EXIT_OK
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            if args.command == "lambda-curve":
                text = cmd_lambda_curve(data, cfg)
            else:
                if args.command == "spectrum":
                    result = cmd_spectrum(data, cfg)
                elif args.command == "metric":
                    result = cmd_metric(data, cfg)
                elif args.command == "hardy":
                    result = cmd_hardy(data, cfg)
                else:
                    result, ok = cmd_verify(data, cfg)
                    result["passed"] = ok
                    code = EXIT_OK if ok else EXIT_FAIL
                result["warnings"] = sorted({str(w.message) for w in caught})
                text = _dump({"config": _public(cfg), "result": result})
        _write(args.output, text)
        return code
    except (InputError, ValueError, KeyError, TypeError) as exc:
        print(f"magharden: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NotQuasiSelfAdjoint as exc:
        print(f"magharden: not quasi-self-adjoint: {exc}", file=sys.stderr)
        return EXIT_QSA
    except (FluxConditionFailed, SupportExceedsR, HypothesisViolated, TrivialField) as exc:
        print(f"magharden: hypothesis failed ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_GATE
    except NotConverged as exc:
        print(f"magharden: not converged: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
