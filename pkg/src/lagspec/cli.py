"""``lagspec`` command-line interface.

Exit codes: 0 success, 1 verification failure, 2 bad configuration,
3 no admissible ε, 4 unresolved crossing, 5 internal inconsistency.
"""
from __future__ import annotations

import argparse
import io
import json
import sys
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from .duistermaat import duistermaat_index
from .errors import (
    EpsilonInExceptionSet,
    InternalInconsistency,
    LagspecError,
    NoAdmissibleEpsilon,
    UnresolvedCrossing,
)
from .formats import PlaneFormatError, load_plane
from .identities import (
    total_failures,
    verify_hormander,
    verify_identities,
    verify_krein,
    verify_one_sided_limits,
)
from .linalg import DEFAULT_TOL, ToleranceConfig
from .maslov import hormander_check
from .models.interval import BC_NAMES, IntervalProblem, Potential, cauchy_data_plane
from .models.spectra import (
    Extension,
    cauchy_path,
    eigenvalues,
    shift_bounds,
    spectral_shift_direct,
    spectral_shift_predicted,
    spectrum_csv,
    sweep_csv,
    u_of_lam,
)
from .models.verify import CATALOG_PAIRS, verify_models

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_EPSILON, EXIT_CROSSING, EXIT_INTERNAL = range(6)

SUITES = ("identities", "limits", "hormander", "krein", "models")
DIMENSIONS = range(1, 7)


class ConfigError(ValueError):
    pass


# --- helpers --------------------------------------------------------------------------------

def _tolerances(args) -> ToleranceConfig:
    try:
        return DEFAULT_TOL.with_(rank_rel_tol=args.rank_tol, inertia_zero_tol=args.inertia_tol,
                                 root_tol=args.root_tol)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def parse_potential(spec: str) -> Potential:
    """``zero``, ``const:<c>`` or the path of an ``x,q`` CSV file."""
    if spec == "zero":
        return Potential.zero()
    if spec.startswith("const:"):
        try:
            return Potential.constant(float(spec[len("const:"):]))
        except ValueError as exc:
            raise ConfigError(f"bad constant potential {spec!r}") from exc
    try:
        return Potential.from_csv(spec)
    except (OSError, ValueError, KeyError) as exc:
        raise ConfigError(f"cannot read potential {spec!r}: {exc}") from exc


def _problem(args) -> IntervalProblem:
    try:
        return IntervalProblem(float(args.len), parse_potential(args.potential))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _extension(p: IntervalProblem, name: str, s: float) -> Extension:
    if name not in BC_NAMES:
        raise ConfigError(f"unknown boundary condition {name!r}; expected one of {', '.join(BC_NAMES)}")
    return Extension.from_catalog(p, name, s)


def _emit(text: str, args) -> None:
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- commands -------------------------------------------------------------------------------

def cmd_index(args) -> int:
    tol = _tolerances(args)
    try:
        planes = [load_plane(path, tol) for path in args.planes]
    except (OSError, PlaneFormatError) as exc:
        raise ConfigError(str(exc)) from exc
    L1, L2, L3 = planes
    if len({L.n for L in planes}) != 1:
        raise ConfigError("planes must have the same dimension n")
    i123 = duistermaat_index(L1, L2, L3, tol)
    i213 = duistermaat_index(L2, L1, L3, tol)
    d12 = L1.intersection_dim(L2, tol)
    swap = i123 + i213 == L1.n - d12
    out = io.StringIO()
    out.write(f"iD(L1,L2,L3) = {i123}\n")
    out.write(f"iD(L2,L1,L3) = {i213}\n")
    out.write(f"dim(L1∩L2) = {d12}\n")
    out.write(f"swap identity iD(L1,L2,L3) + iD(L2,L1,L3) = n - dim(L1∩L2): {'PASS' if swap else 'FAIL'}\n")
    _emit(out.getvalue(), args)
    return EXIT_OK if swap else EXIT_INTERNAL


def cmd_spectrum(args) -> int:
    tol = _tolerances(args)
    p = _problem(args)
    e = _extension(p, args.bc, args.s)
    a, b = args.window
    if not a <= b:
        raise ConfigError("window must satisfy a <= b")
    _emit(spectrum_csv(eigenvalues(e, (a, b), tol)), args)
    return EXIT_OK


def cmd_shift(args) -> int:
    tol = _tolerances(args)
    p = _problem(args)
    e1, e2 = _extension(p, args.bc1, args.s1), _extension(p, args.bc2, args.s2)
    lam = float(args.lam)
    direct = spectral_shift_direct(e1, e2, lam, tol)
    M = cauchy_data_plane(p, lam, tol)
    on_spectrum = M.intersection_dim(e1.plane, tol) or M.intersection_dim(e2.plane, tol)
    out = io.StringIO()
    if on_spectrum:
        # N(H; (-∞, λ]) is right-continuous, so compare with the value just above λ
        eta = 1e-6 * max(1.0, abs(lam))
        left = spectral_shift_predicted(e1, e2, lam - eta, tol)
        predicted = spectral_shift_predicted(e1, e2, lam + eta, tol)
        out.write(f"predicted_left = {left}\n")
    else:
        predicted = spectral_shift_predicted(e1, e2, lam, tol)
    sm, sp = shift_bounds(e1, e2, tol)
    ok = -sm <= direct <= sp
    out.write(f"direct = {direct}\n")
    out.write(f"predicted = {predicted}\n")
    out.write(f"sigma_minus = {sm}\n")
    out.write(f"sigma_plus = {sp}\n")
    out.write(f"bound -sigma_minus <= shift <= sigma_plus: {'PASS' if ok else 'FAIL'}\n")
    _emit(out.getvalue(), args)
    if direct != predicted:
        print(f"spectral shift routes disagree: direct {direct}, predicted {predicted}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK if ok else EXIT_FAIL


def _merge(report: Dict[str, Dict[str, object]], part: Dict[str, Dict[str, object]], tag: str) -> None:
    for name, entry in part.items():
        report[f"{name}[{tag}]"] = entry


def _model_zwz(tol: ToleranceConfig) -> Dict[str, Dict[str, object]]:
    p = IntervalProblem(1.0)
    path = cauchy_path(p, u_of_lam(-30.5), u_of_lam(120.5))
    failures: List[str] = []
    for spec1, spec2 in CATALOG_PAIRS:
        e1, e2 = Extension.from_catalog(p, *spec1), Extension.from_catalog(p, *spec2)
        if not hormander_check(path, e1.plane, e2.plane, tol).holds:
            failures.append(f"{e1.label}/{e2.label}")
    return {"zwz_model_path": {"trials": len(CATALOG_PAIRS), "failures": failures}}


def cmd_verify(args) -> int:
    tol = _tolerances(args)
    if args.trials < 1:
        raise ConfigError("--trials must be positive")
    report: Dict[str, Dict[str, object]] = {}
    per_n: Optional[Callable] = {
        "identities": verify_identities,
        "limits": verify_one_sided_limits,
        "krein": verify_krein,
    }.get(args.suite)
    if per_n is not None:
        for n in DIMENSIONS:
            _merge(report, per_n(n, args.trials, args.seed, tol), f"n={n}")
    elif args.suite == "hormander":
        report.update(verify_hormander(args.trials, args.seed, tol=tol))
        report.update(_model_zwz(tol))
    else:
        report.update(verify_models(args.seed, tol=tol))
    _emit(json.dumps(report, indent=2) + "\n", args)
    return EXIT_OK if total_failures(report) == 0 else EXIT_FAIL


def cmd_sweep(args) -> int:
    tol = _tolerances(args)
    p = _problem(args)
    a, b, steps = args.grid
    steps = int(steps)
    if steps < 1 or not a <= b:
        raise ConfigError("--grid needs a <= b and a positive number of steps")
    if args.kmax < 1:
        raise ConfigError("--kmax must be positive")
    grid = np.linspace(a, b, steps + 1)
    _emit(sweep_csv(p, args.family, grid, args.kmax, tol), args)
    return EXIT_OK


# --- parser ---------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", help="write the result here instead of stdout")
    common.add_argument("--rank-tol", type=float, default=DEFAULT_TOL.rank_rel_tol)
    common.add_argument("--inertia-tol", type=float, default=DEFAULT_TOL.inertia_zero_tol)
    common.add_argument("--root-tol", type=float, default=DEFAULT_TOL.root_tol)

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--len", type=float, default=1.0, help="interval length")
    model.add_argument("--potential", default="zero", help="zero, const:<c>, or an x,q CSV file")

    parser = argparse.ArgumentParser(prog="lagspec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", parents=[common], help="Duistermaat index of three JSON planes")
    p.add_argument("planes", nargs=3, metavar="PLANE")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("spectrum", parents=[common, model], help="eigenvalues of a catalog extension")
    p.add_argument("--bc", required=True)
    p.add_argument("--s", type=float, default=0.0)
    p.add_argument("--window", type=float, nargs=2, required=True, metavar=("A", "B"))
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("shift", parents=[common, model], help="spectral shift between two extensions")
    p.add_argument("--bc1", required=True)
    p.add_argument("--bc2", required=True)
    p.add_argument("--s1", type=float, default=0.0)
    p.add_argument("--s2", type=float, default=0.0)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.set_defaults(func=cmd_shift)

    p = sub.add_parser("verify", parents=[common], help="randomized theorem checks")
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", parents=[common, model], help="lowest eigenvalues along a family")
    p.add_argument("--family", choices=("delta", "delta_prime"), required=True)
    p.add_argument("--grid", type=float, nargs=3, required=True, metavar=("A", "B", "STEPS"))
    p.add_argument("--kmax", type=int, default=5)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (NoAdmissibleEpsilon, EpsilonInExceptionSet) as exc:
        code, msg = EXIT_EPSILON, exc
    except UnresolvedCrossing as exc:
        code, msg = EXIT_CROSSING, exc
    except InternalInconsistency as exc:
        code, msg = EXIT_INTERNAL, exc
    except (ConfigError, ValueError, OSError) as exc:
        code, msg = EXIT_CONFIG, exc
    except LagspecError as exc:
        code, msg = EXIT_INTERNAL, exc
    print(f"lagspec: {type(msg).__name__}: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
