"""Command line entry point.

Exit status: 0 when every check passes, 1 on a mathematical failure
(degenerate roots, contour failure, inconsistent data, failed tolerance),
2 on invalid input.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import problems
from .boundary_maps import (
    admittance_matrix,
    admittance_principal,
    field_symbol_E,
    field_symbol_H,
    impedance_matrix,
    impedance_principal,
)
from .errors import ContourFailure, DegenerateError, InconsistentData, InvalidMetricError, NearDegenerateError
from .metrics_geometry import BumpPerturbation, UnitFactor, boundary_cometric
from .recovery import (
    SymbolSampler,
    combined_jet_map,
    jet_residual_H,
    recover_normal_mu,
    recover_tangential,
    unit_directions,
)
from .symbol_calculus import (
    AUTO_CONDITION_LIMIT,
    coefficient_symbols,
    eigenvalues,
    factorization_residual,
    jordan_data,
    principal_B,
    principal_C,
    quadratic_residual,
)
from . import verify

EXIT_OK, EXIT_MATH, EXIT_INPUT = 0, 1, 2
RESIDUAL_TOL = 1e-10
JET_KERNEL_TOL = 1e-6


class InputError(Exception):
    pass


def _emit(obj, out=None):
    text = problems.dump_json(obj, out)
    if out is None:
        print(text)


def _load(path):
    try:
        return problems.load_instance(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read problem file {path}: {exc}") from exc


def _xi(inst, args):
    if getattr(args, "xi", None) is None:
        return inst.xi_t
    xi = np.asarray(args.xi, dtype=float)
    if np.linalg.norm(xi) == 0:
        raise InputError("xi_t must be nonzero")
    return xi


def cmd_gen(args) -> int:
    seed = problems.default_seed() if args.seed is None else args.seed
    inst = problems.generate(args.kind, seed)
    _emit(problems.instance_to_dict(inst), args.out)
    return EXIT_OK


def _route_report(eps, mu, xi):
    """Which route produced the right factor and why the Jordan route was skipped."""
    try:
        data = jordan_data(eps, mu, xi)
    except DegenerateError as exc:
        return {"route": "contour", "jordan": f"degenerate: {exc}"}
    if data.condition > AUTO_CONDITION_LIMIT:
        return {"route": "contour", "jordan": f"condition {data.condition:.3e}"}
    return {"route": "jordan", "condition": data.condition, "X": data.X, "J": data.J}


def cmd_symbols(args) -> int:
    inst = _load(args.input)
    xi = _xi(inst, args)
    eps, mu = inst.pair.eps_hat, inst.pair.mu_hat
    sym_h = coefficient_symbols(eps, mu, xi, inst.omega)
    sym_e = coefficient_symbols(mu, eps, xi, inst.omega)
    B = principal_B(eps, mu, xi, args.route)
    C = principal_C(eps, mu, xi, args.route)
    lam_e, lam_m = eigenvalues(eps, mu, xi)
    rng = np.random.default_rng(0)
    probes = rng.normal(size=20) + 1j * rng.normal(size=20)
    res = {
        "quadratic_B": quadratic_residual(sym_h, B),
        "quadratic_C": quadratic_residual(sym_e, C),
        "factorization_B": factorization_residual(sym_h, B, probes),
        "factorization_C": factorization_residual(sym_e, C, probes),
    }
    route_h, route_e = _route_report(eps, mu, xi), _route_report(mu, eps, xi)
    if route_h["route"] == "jordan":
        res["route_gap_B"] = float(
            np.linalg.norm(B - principal_B(eps, mu, xi, "contour")) / np.linalg.norm(B)
        )
    grid = unit_directions(args.directions)
    boundary = {
        "directions": grid,
        "impedance": [impedance_matrix(eps, d, inst.omega) for d in grid],
        "admittance": [admittance_matrix(mu, d, inst.omega) for d in grid],
    }
    out = {
        "xi_t": xi,
        "omega": inst.omega,
        "roots": {"xi_eps3": lam_e, "xi_mu3": lam_m},
        "H": {**_symbol_record(sym_h), "B": B, "routing": route_h},
        "E": {**_symbol_record(sym_e), "C": C, "routing": route_e},
        "boundary": boundary,
        "residuals": res,
        "pass": max(res.values()) <= RESIDUAL_TOL,
    }
    _emit(out, args.out)
    return EXIT_OK if out["pass"] else EXIT_MATH


def _symbol_record(sym):
    return {"T": sym.T, "A": sym.A, "Q": sym.Q, "G": sym.G, "F": sym.F, "R": sym.R}


def cmd_boundary_symbol(args) -> int:
    inst = _load(args.input)
    xi = _xi(inst, args)
    data = np.asarray(args.data, dtype=float)
    eps, mu = inst.pair.eps_hat, inst.pair.mu_hat
    if args.map == "impedance":
        value = impedance_principal(eps, xi, data, inst.omega)
        fsym = field_symbol_H(eps, mu, xi, data)
    else:
        value = admittance_principal(mu, xi, data, inst.omega)
        fsym = field_symbol_E(eps, mu, xi, data)
    out = {
        "map": args.map,
        "xi_t": xi,
        "data": data,
        "symbol": value,
        "field": fsym.field,
        "coefficients": [fsym.a, fsym.b],
    }
    _emit(out, args.out)
    return EXIT_OK


def cmd_recover(args) -> int:
    inst = _load(args.input)
    eps, mu = inst.pair.eps_hat, inst.pair.mu_hat
    directions = unit_directions(args.directions)
    if args.mode == "jets":
        return _recover_jets(eps, mu, args.kappa, directions, args.out)
    got_e = recover_tangential(SymbolSampler.from_metric(eps, inst.omega, "impedance"), directions)
    got_m = recover_tangential(SymbolSampler.from_metric(mu, inst.omega, "admittance"), directions)
    true_e, true_m = boundary_cometric(eps), boundary_cometric(mu)
    err = max(
        np.linalg.norm(got_e - true_e) / np.linalg.norm(true_e),
        np.linalg.norm(got_m - true_m) / np.linalg.norm(true_m),
    )
    out = {"mode": args.mode, "eps_tangential": got_e, "mu_tangential": got_m, "relative_error": err}
    ok = err <= RESIDUAL_TOL
    if args.mode == "normal":
        prime = mu[2] if args.normal_prime is None else np.asarray(args.normal_prime)
        verdict = recover_normal_mu(got_e, got_m, mu[2], prime, directions)
        out["normal_verdict"] = {
            "kind": verdict.kind, "factor": verdict.factor, "residual": verdict.residual, "note": verdict.note,
        }
        ok = ok and verdict.kind != "inconsistent"
    out["pass"] = ok
    _emit(out, args.out)
    return EXIT_OK if ok else EXIT_MATH


def _recover_jets(eps, mu, kappa, directions, dest) -> int:
    singular = {
        "H": np.linalg.svd(jet_residual_H(eps, mu, kappa, directions), compute_uv=False),
        "E": np.linalg.svd(combined_jet_map(eps, mu, kappa, directions), compute_uv=False),
    }
    kernel = {k: int(np.sum(v <= JET_KERNEL_TOL * v[0])) for k, v in singular.items()}
    ok = all(d == 0 for d in kernel.values())
    _emit({"mode": "jets", "kappa": kappa, "singular_values": singular, "kernel_dimension": kernel, "pass": ok}, dest)
    return EXIT_OK if ok else EXIT_MATH


def cmd_gauge_demo(args) -> int:
    seed = problems.default_seed() if args.seed is None else args.seed
    rng = np.random.default_rng(seed)
    if args.kind == "constant":
        h = UnitFactor()
    else:
        h = BumpPerturbation(args.amplitude, [0.0, 0.0, 0.0], args.width)
    report = verify.gauge_report(h, rng)
    limits = {m.name: m.threshold for m in verify.CHECKS["gauge"].metrics}
    rows = {k: {"value": v, "threshold": limits.get(k), "pass": v <= limits[k] if k in limits else None}
            for k, v in report.items()}
    ok = all(r["pass"] for r in rows.values() if r["pass"] is not None)
    _emit({"kind": args.kind, "seed": seed, "rows": rows, "pass": ok}, args.out)
    return EXIT_OK if ok else EXIT_MATH


def cmd_verify(args) -> int:
    seed = problems.default_seed() if args.seed is None else args.seed
    report = verify.run_suite(args.suite, args.samples, seed, args.jobs)
    for row in report.rows:
        print(verify.format_row(row))
    if args.json:
        problems.dump_json(report.to_dict(), args.json)
    print("PASS" if report.passed else f"FAIL (rerun with --seed {seed})")
    return EXIT_OK if report.passed else EXIT_MATH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="maxsym", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random problem instance")
    p.add_argument("--kind", choices=problems.KINDS, default="generic")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("symbols", help="coefficient symbols and right factors")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--xi", type=float, nargs=2, default=None)
    p.add_argument("--route", choices=("auto", "jordan", "contour"), default="auto")
    p.add_argument("--directions", type=int, default=8)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_symbols)

    p = sub.add_parser("boundary-symbol", help="principal impedance or admittance symbol")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--map", choices=("impedance", "admittance"), default="impedance")
    p.add_argument("--data", type=float, nargs=2, required=True)
    p.add_argument("--xi", type=float, nargs=2, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_boundary_symbol)

    p = sub.add_parser("recover", help="recover boundary cometrics from forward symbols")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--mode", choices=("tangential", "normal", "jets"), default="tangential")
    p.add_argument("--directions", type=int, default=16)
    p.add_argument("--kappa", type=int, choices=(1, 2, 3), default=1)
    p.add_argument("--normal-prime", type=float, nargs=3, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("gauge-demo", help="build a boundary-fixing gauge map and check it")
    p.add_argument("--kind", choices=("constant", "gaussian-bump"), default="gaussian-bump")
    p.add_argument("--amplitude", type=float, default=0.5)
    p.add_argument("--width", type=float, default=0.4)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gauge_demo)

    p = sub.add_parser("verify", help="run randomized property sweeps")
    p.add_argument("--suite", choices=sorted(verify.SUITES), default="all")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--json", default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, InvalidMetricError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DegenerateError, NearDegenerateError, ContourFailure, InconsistentData) as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
