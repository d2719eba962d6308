"""Randomized property sweeps with pinned tolerances.

Each check draws one independent instance per sample from
``numpy.random.default_rng(seed + index)`` and reports per-sample metrics;
the sweep keeps the worst value of each metric together with the seed that
produced it, so any failure can be replayed alone.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .boundary_maps import admittance_principal, impedance_principal
from .errors import DegenerateError, NearDegenerateError
from .metrics_geometry import (
    BumpPerturbation,
    GaugeMap,
    boundary_cometric,
    build_hat_pair,
    hat_relation_residual,
    pullback_cometric_field,
    volume_ratio,
)
from .problems import (
    random_direction,
    random_hat_pair,
    random_parameter_triple,
    random_spd,
    random_symmetric,
)
from .recovery import (
    SymbolSampler,
    combined_jet_map,
    compensating_normal,
    jet_residual_H,
    kernel_margin,
    recover_normal_mu,
    recover_tangential,
    stage_two_coefficients,
    sylvester_uniqueness_check,
)
from .symbol_calculus import (
    eigenvalues,
    factorization_residual,
    polynomial_roots,
    principal_B,
    principal_B_contour,
    principal_B_jordan,
    principal_C,
    principal_coefficients,
    quadratic_residual,
    spectrum_mismatch,
)
from .tensor_core import altdet_residual, cofactor_residual, wedge2

EQUISPACED = 32


def _angles(n: int = EQUISPACED) -> np.ndarray:
    theta = 2.0 * np.pi * np.arange(n) / n
    return np.column_stack([np.cos(theta), np.sin(theta)])


# ---------------------------------------------------------------------------
# per-sample checks; each returns {metric: value}


def sample_quadratic(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    pair = random_hat_pair(rng)
    eps, mu = pair.eps_hat, pair.mu_hat
    worst_b = worst_c = 0.0
    for xi_t in _angles():
        B = principal_B(eps, mu, xi_t)
        worst_b = max(worst_b, quadratic_residual(principal_coefficients(eps, mu, xi_t), B))
        C = principal_C(eps, mu, xi_t)
        worst_c = max(worst_c, quadratic_residual(principal_coefficients(mu, eps, xi_t), C))
    return {"quadratic_B": worst_b, "quadratic_C": worst_c}


def sample_routes(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    pair = random_hat_pair(rng)
    eps, mu = pair.eps_hat, pair.mu_hat
    worst = 0.0
    for xi_t in _angles():
        try:
            Bj = principal_B_jordan(eps, mu, xi_t)
        except (DegenerateError, NearDegenerateError):
            continue
        Bc = principal_B_contour(principal_coefficients(eps, mu, xi_t))
        worst = max(worst, np.linalg.norm(Bj - Bc) / np.linalg.norm(Bj))
    near = random_hat_pair(rng, "near-degenerate")
    xi_t = random_direction(rng)
    sym = principal_coefficients(near.eps_hat, near.mu_hat, xi_t)
    near_res = quadratic_residual(sym, principal_B_contour(sym))
    return {"route_gap": worst, "near_degenerate_quadratic": near_res}


def sample_spectrum(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    pair = random_hat_pair(rng)
    eps, mu = pair.eps_hat, pair.mu_hat
    mismatch = 0.0
    min_imag = np.inf
    pairing = 0.0
    for xi_t in _angles(8):
        B = principal_B(eps, mu, xi_t)
        lam_e, lam_m = eigenvalues(eps, mu, xi_t)
        mismatch = max(mismatch, spectrum_mismatch(B, [lam_e, lam_m, lam_m]))
        ev = np.linalg.eigvals(B)
        min_imag = min(min_imag, ev.imag.min() / np.linalg.norm(xi_t))
        roots = polynomial_roots(principal_coefficients(eps, mu, xi_t))
        upper = np.sort_complex(roots[roots.imag > 0])
        lower = np.sort_complex(np.conj(roots[roots.imag < 0]))
        if upper.size != 3 or lower.size != 3:
            pairing = np.inf
        else:
            pairing = max(pairing, np.max(np.abs(upper - lower)) / np.abs(roots).max())
    return {"spectrum_mismatch": mismatch, "min_imag_part": min_imag, "conjugate_pairing": pairing}


def sample_factorization(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    pair = random_hat_pair(rng)
    xi_t = random_direction(rng)
    sym = principal_coefficients(pair.eps_hat, pair.mu_hat, xi_t)
    B = principal_B(pair.eps_hat, pair.mu_hat, xi_t)
    samples = rng.normal(size=20) + 1j * rng.normal(size=20)
    return {"factorization": factorization_residual(sym, B, samples)}


def sample_impedance(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    pair = random_hat_pair(rng)
    xi_t = rng.normal(size=2)
    F = rng.normal(size=2)
    omega = rng.uniform(0.5, 2.0)
    z = impedance_principal(pair.eps_hat, xi_t, F, omega)
    y = admittance_principal(pair.mu_hat, xi_t, z, omega)
    parallel = abs(wedge2(xi_t, z)) / (np.linalg.norm(xi_t) * np.linalg.norm(z))
    scale = np.linalg.norm(z) * np.linalg.norm(xi_t) / omega
    return {"parallel": parallel, "composition": np.linalg.norm(y) / scale}


def sample_tangential(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    pair = random_hat_pair(rng)
    omega = rng.uniform(0.5, 2.0)
    out = {}
    for label, m, kind in (("eps", pair.eps_hat, "impedance"), ("mu", pair.mu_hat, "admittance")):
        truth = boundary_cometric(m)
        got = recover_tangential(SymbolSampler.from_metric(m, omega, kind))
        out[f"roundtrip_{label}"] = np.linalg.norm(got - truth) / np.linalg.norm(truth)
    return out


def sample_dichotomy(seed: int) -> dict:
    """Even seeds: generic boundary cometrics; odd seeds: proportional ones."""
    rng = np.random.default_rng(seed)
    eps_t = random_spd(rng, 2)
    normal = np.concatenate([rng.uniform(-1.0, 1.0, 2), [rng.uniform(0.5, 2.0)]])
    if seed % 2 == 0:
        mu_t = random_spd(rng, 2)
        prime = normal.copy()
        expected, factor = "equal", 1.0
    else:
        mu_t = rng.uniform(0.5, 2.0) * eps_t
        factor = rng.uniform(0.3, 3.0)
        prime = compensating_normal(eps_t, mu_t, normal, factor)
        expected = "proportional"
    verdict = recover_normal_mu(eps_t, mu_t, normal, prime)
    ok = verdict.kind == expected
    factor_err = abs(verdict.factor - factor) if ok else np.inf
    bump = rng.normal(size=3)
    bump *= rng.uniform(1e-3, 1e-1) * np.linalg.norm(prime) / np.linalg.norm(bump)
    perturbed = recover_normal_mu(eps_t, mu_t, normal, prime + bump)
    return {
        "misclassified": float(not ok),
        "factor_error": factor_err,
        "perturbation_missed": float(perturbed.kind != "inconsistent"),
    }


def _smooth_field(rng):
    """Affine cometric field that stays SPD on the unit box."""
    base = random_spd(rng) + np.eye(3)
    slopes = [0.2 * random_symmetric(rng) for _ in range(3)]

    def field(x):
        return base + sum(x[i] * slopes[i] for i in range(3))

    return field


def gauge_report(h, rng, size: float = 1.0) -> dict:
    """Measure the properties of the gauge map built from ``h`` on random data."""
    gauge = GaugeMap(h, size)
    eps_field = _smooth_field(rng)
    mu_field = _smooth_field(rng)

    boundary = 0.0
    symbols = 0.0
    for _ in range(4):
        x = np.array([*rng.uniform(-size, size, 2), 0.0])
        boundary = max(boundary, np.max(np.abs(gauge(x) - x)))
        xi_t = random_direction(rng)
        F = rng.normal(size=2)
        for fld, fn in ((eps_field, impedance_principal), (mu_field, admittance_principal)):
            pulled = pullback_cometric_field(gauge, fld)(x)
            a = fn(pulled, xi_t, F)
            b = fn(fld(x), xi_t, F)
            symbols = max(symbols, np.linalg.norm(a - b) / np.linalg.norm(b))

    det_err = 0.0
    ratio_err = 0.0
    deviation = 0.0
    g = random_spd(rng)
    center = getattr(h, "center", np.zeros(3))
    heights = gauge.threshold * np.array([1e-9, 0.1, 0.5, 0.9])
    for x3 in heights:
        for offset in (np.zeros(2), rng.uniform(-0.2, 0.2, 2) * size):
            x = np.array([center[0] + offset[0], center[1] + offset[1], x3])
            det = np.linalg.det(gauge.jacobian(x))
            det_err = max(det_err, abs(det - h(x)))
            ratio = volume_ratio(gauge, eps_field, g, x)
            ratio_err = max(ratio_err, abs(ratio * det - 1.0))
            deviation = max(deviation, abs(1.0 / ratio - 1.0))
    return {
        "boundary_moved": boundary,
        "det_minus_h": det_err,
        "symbol_gap": symbols,
        "volume_ratio_vs_jacobian": ratio_err,
        "deviation_vs_amplitude": abs(deviation - abs(h.amplitude)),
        "threshold": gauge.threshold,
    }


def sample_gauge(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    amplitude = rng.uniform(0.2, 0.8)
    width = rng.uniform(0.3, 0.5)
    center = np.array([*rng.uniform(-0.3, 0.3, 2), 0.0])
    return gauge_report(BumpPerturbation(amplitude, center, width), rng)


def sample_jets(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    pair = random_hat_pair(rng)
    eps, mu = pair.eps_hat, pair.mu_hat
    h_margin = e_margin = np.inf
    for kappa in (1, 2, 3):
        h_margin = min(h_margin, kernel_margin(jet_residual_H(eps, mu, kappa)))
        e_margin = min(e_margin, kernel_margin(combined_jet_map(eps, mu, kappa)))
    coeffs = stage_two_coefficients(eps, mu).reshape(-1, 3)
    stage2 = np.max(np.linalg.norm(coeffs, axis=1)) / np.linalg.norm(mu) ** 3
    syl = np.inf
    for xi_t in _angles(8):
        B = principal_B(eps, mu, xi_t)
        syl = min(syl, sylvester_uniqueness_check(principal_coefficients(eps, mu, xi_t), B) / np.linalg.norm(B))
    return {"kernel_H": h_margin, "kernel_E": e_margin, "stage_two": stage2, "sylvester": syl}


def sample_identities(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    g_inv = random_spd(rng)
    triple = random_parameter_triple(rng)
    pair = build_hat_pair(triple)
    return {
        "altdet": altdet_residual(g_inv),
        "cofactor": cofactor_residual(g_inv),
        "hat_backsubstitution": hat_relation_residual(triple, pair),
    }


# ---------------------------------------------------------------------------
# criteria and suites


@dataclass
class Metric:
    name: str
    threshold: float
    sense: str = "max"  # "max": worst = largest, must be <= threshold; "min": worst = smallest, must be >= threshold


@dataclass
class Check:
    key: str
    title: str
    sample: Callable[[int], dict]
    metrics: list
    samples: int
    time_limit: float | None = None


@dataclass
class Row:
    check: str
    metric: str
    value: float
    threshold: float
    sense: str
    passed: bool
    worst_seed: int | None = None


@dataclass
class Report:
    suite: str
    seed: int
    rows: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "pass": self.passed,
            "rows": [r.__dict__ for r in self.rows],
        }


CHECKS = {
    "quadratic": Check(
        "quadratic", "right factors solve the quadratic matrix equation", sample_quadratic,
        [Metric("quadratic_B", 1e-10), Metric("quadratic_C", 1e-10)], 1000, time_limit=120.0,
    ),
    "routes": Check(
        "routes", "Jordan and contour routes agree", sample_routes,
        [Metric("route_gap", 1e-8), Metric("near_degenerate_quadratic", 1e-10)], 1000,
    ),
    "spectrum": Check(
        "spectrum", "spectrum of the right factor", sample_spectrum,
        [Metric("spectrum_mismatch", 1e-9), Metric("min_imag_part", 0.0, "min"),
         Metric("conjugate_pairing", 1e-6)], 1000,
    ),
    "factorization": Check(
        "factorization", "factorization M = (xi3 - B*) T (xi3 - B)", sample_factorization,
        [Metric("factorization", 1e-10)], 200,
    ),
    "impedance": Check(
        "impedance", "impedance symbol is parallel to xi_t and annihilated by admittance",
        sample_impedance, [Metric("parallel", 1e-12), Metric("composition", 1e-12)], 1000,
    ),
    "tangential": Check(
        "tangential", "boundary cometrics recovered from principal symbols", sample_tangential,
        [Metric("roundtrip_eps", 1e-10), Metric("roundtrip_mu", 1e-10)], 200, time_limit=30.0,
    ),
    "dichotomy": Check(
        "dichotomy", "normal row of mu: equal, proportional or inconsistent", sample_dichotomy,
        [Metric("misclassified", 0.0), Metric("factor_error", 1e-9),
         Metric("perturbation_missed", 0.0)], 200,
    ),
    "gauge": Check(
        "gauge", "boundary-fixing gauge map", sample_gauge,
        [Metric("boundary_moved", 0.0), Metric("det_minus_h", 1e-10), Metric("symbol_gap", 1e-12),
         Metric("volume_ratio_vs_jacobian", 1e-9), Metric("deviation_vs_amplitude", 1e-6)], 3,
    ),
    "jets": Check(
        "jets", "jet-level linear maps have trivial kernels", sample_jets,
        [Metric("kernel_H", 1e-6, "min"), Metric("kernel_E", 1e-6, "min"),
         Metric("stage_two", 1e-8, "min"), Metric("sylvester", 0.0, "min")], 100,
    ),
    "identities": Check(
        "identities", "permutation identities and rescaled metric relation", sample_identities,
        [Metric("altdet", 1e-12), Metric("cofactor", 1e-12), Metric("hat_backsubstitution", 1e-13)], 1000,
    ),
}

SUITES = {
    "core": ["identities", "quadratic", "routes", "spectrum", "factorization", "impedance"],
    "recovery": ["tangential", "dichotomy", "gauge", "jets"],
}
SUITES["all"] = SUITES["core"] + SUITES["recovery"]


def _collect(fn, seeds, jobs):
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, seeds, chunksize=max(1, len(seeds) // (4 * jobs))))
    return [fn(s) for s in seeds]


def _passes(value: float, metric: Metric) -> bool:
    if metric.sense == "max":
        return value <= metric.threshold
    if metric.threshold == 0.0:
        return value > 0.0
    return value >= metric.threshold


def run_check(check: Check, samples: int | None = None, seed: int = 0, jobs: int = 1) -> list:
    n = check.samples if samples is None else samples
    seeds = [seed + i for i in range(n)]
    start = time.perf_counter()
    results = _collect(check.sample, seeds, jobs)
    elapsed = time.perf_counter() - start
    rows = []
    for metric in check.metrics:
        values = np.array([r[metric.name] for r in results], dtype=float)
        values = np.where(np.isnan(values), np.inf if metric.sense == "max" else -np.inf, values)
        idx = int(np.argmax(values) if metric.sense == "max" else np.argmin(values))
        worst = float(values[idx])
        passed = _passes(worst, metric)
        rows.append(Row(check.key, metric.name, worst, metric.threshold, metric.sense, bool(passed), seeds[idx]))
    if check.time_limit is not None:
        rows.append(Row(check.key, "seconds", elapsed, check.time_limit, "max", elapsed <= check.time_limit))
    return rows


def run_suite(suite: str = "all", samples: int | None = None, seed: int = 0, jobs: int = 1) -> Report:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    report = Report(suite, seed)
    for key in SUITES[suite]:
        report.rows.extend(run_check(CHECKS[key], samples, seed, jobs))
    return report


def format_row(row: Row) -> str:
    status = "PASS" if row.passed else "FAIL"
    op = "<=" if row.sense == "max" else ">"
    if row.sense == "min" and row.threshold > 0:
        op = ">="
    tail = f" (seed {row.worst_seed})" if row.worst_seed is not None and not row.passed else ""
    return f"[{status}] {row.check}.{row.metric} = {row.value:.3e} {op} {row.threshold:.1e}{tail}"
