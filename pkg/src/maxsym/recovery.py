"""Reconstruction of boundary metric data from principal boundary symbols.

The tangential cometric is read off the impedance (or admittance) symbol
up to nothing: the symbol determines ``|xi|_b / sqrt(det b)`` for the
boundary cometric ``b``, which pins ``b`` down. The normal row of ``mu``
is then tested against the compatibility identities between the normal
components of the root covectors and eigencovectors, and the jet-level
linear maps are assembled so that their kernels can be inspected.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .boundary_maps import (
    admittance_matrix,
    impedance_matrix,
    normal_eigen_components,
    normal_root_components,
)
from .errors import InconsistentData, InvalidMetricError
from .symbol_calculus import NU, SymbolSet, sylvester_sigma_min, upper_root
from .tensor_core import SIGMA, check_spd, star_of_wedge, wedge2

DEFAULT_DIRECTIONS = 16
MIN_NORMAL_DIRECTIONS = 8


def unit_directions(n: int = DEFAULT_DIRECTIONS) -> np.ndarray:
    """``n`` unit covectors spread over the half circle."""
    theta = np.pi * np.arange(n) / n
    return np.column_stack([np.cos(theta), np.sin(theta)])


class SymbolSampler:
    """Principal boundary symbol given as a 2x2 matrix valued map ``xi_t -> L``.

    ``kind`` is ``"impedance"`` (input: magnetic boundary data) or
    ``"admittance"`` (input: electric boundary data).
    """

    def __init__(self, fn: Callable, omega: float, kind: str = "impedance"):
        if kind not in ("impedance", "admittance"):
            raise ValueError(f"unknown sampler kind {kind!r}")
        self.fn = fn
        self.omega = float(omega)
        self.kind = kind

    def __call__(self, xi_t) -> np.ndarray:
        return np.asarray(self.fn(np.asarray(xi_t, dtype=float)), dtype=complex)

    @classmethod
    def from_metric(cls, m, omega: float, kind: str = "impedance") -> "SymbolSampler":
        builder = impedance_matrix if kind == "impedance" else admittance_matrix
        return cls(lambda xi: builder(m, xi, omega), omega, kind)

    @classmethod
    def from_table(cls, directions, matrices, omega: float, kind: str = "impedance"):
        """Sampler backed by tabulated symbols; lookups outside the table use
        the degree-one homogeneity along rays."""
        directions = np.asarray(directions, dtype=float)
        matrices = np.asarray(matrices, dtype=complex)
        units = directions / np.linalg.norm(directions, axis=1)[:, None]
        table = matrices / np.linalg.norm(directions, axis=1)[:, None, None]

        def lookup(xi):
            size = np.linalg.norm(xi)
            unit = xi / size
            hits = np.nonzero(np.linalg.norm(units - unit, axis=1) < 1e-12)[0]
            sign = 1.0
            if hits.size == 0:
                hits = np.nonzero(np.linalg.norm(units + unit, axis=1) < 1e-12)[0]
                sign = -1.0
            if hits.size == 0:
                raise KeyError(f"direction {xi} not tabulated")
            return sign * size * table[hits[0]]

        sampler = cls(lookup, omega, kind)
        sampler.directions = directions
        return sampler


def homogeneity_defect(sampler: SymbolSampler, directions, scales=(0.5, 2.0, 3.0)) -> float:
    """Largest relative violation of ``L(t xi) = t L(xi)`` for ``t > 0``."""
    worst = 0.0
    for xi in np.asarray(directions, dtype=float):
        base = sampler(xi)
        for t in scales:
            worst = max(worst, np.linalg.norm(sampler(t * xi) - t * base) / (t * np.linalg.norm(base)))
    return float(worst)


def symbol_lengths(sampler: SymbolSampler, directions, tol: float = 1e-8) -> np.ndarray:
    """``|xi|_b / sqrt(det b)`` per direction, read from the sampled symbol.

    The symbol is applied to the Euclidean rotation of ``xi``; the output
    must be a multiple of ``xi`` and the resulting length real and positive.
    """
    sign = 1.0 if sampler.kind == "impedance" else -1.0
    out = []
    for xi in np.asarray(directions, dtype=float):
        F = np.array([-xi[1], xi[0]])
        image = sampler(xi) @ F
        coeff = image @ xi / (xi @ xi)
        if np.linalg.norm(image - coeff * xi) > tol * np.linalg.norm(image):
            raise InconsistentData(f"symbol output is not parallel to xi_t at {xi}")
        q = sign * 1j * wedge2(xi, F) / (sampler.omega * coeff)
        if abs(q.imag) > tol * abs(q) or q.real <= 0:
            raise InconsistentData(f"symbol gives a non-positive length at {xi}")
        out.append(q.real)
    return np.array(out)


def _fit_quadratic_form(directions, values) -> np.ndarray:
    """Least-squares symmetric ``P`` with ``xi^T P xi = value``."""
    d = np.asarray(directions, dtype=float)
    design = np.column_stack([d[:, 0] ** 2, 2 * d[:, 0] * d[:, 1], d[:, 1] ** 2])
    if np.linalg.matrix_rank(design) < 3:
        raise InconsistentData("need at least three non-collinear directions")
    coeffs = np.linalg.lstsq(design, values, rcond=None)[0]
    return np.array([[coeffs[0], coeffs[1]], [coeffs[1], coeffs[2]]])


def recover_tangential(sampler: SymbolSampler, directions=None, tol: float = 1e-8) -> np.ndarray:
    """Boundary cometric ``b`` from a principal symbol sampler.

    With ``P = b / det b`` the squared lengths satisfy ``xi^T P xi``, and
    ``det P = 1 / det b`` so ``b = P / det P``.
    """
    if directions is None:
        directions = getattr(sampler, "directions", None)
        if directions is None:
            directions = unit_directions()
    directions = np.asarray(directions, dtype=float)
    lengths = symbol_lengths(sampler, directions, tol)
    P = _fit_quadratic_form(directions, lengths**2)
    try:
        check_spd(P, "recovered quadratic form")
    except InvalidMetricError as exc:
        raise InconsistentData(str(exc)) from exc
    return P / np.linalg.det(P)


def recover_tangential_mu(sampler: SymbolSampler, directions=None, tol: float = 1e-8) -> np.ndarray:
    if sampler.kind != "admittance":
        raise ValueError("expected an admittance sampler")
    return recover_tangential(sampler, directions, tol)


def multiples_test(eps_t, mu_t, tol: float = 1e-10):
    """Whether ``mu_t = a eps_t``; returns ``(flag, a)`` with ``a`` the best factor."""
    eps_t = np.asarray(eps_t)
    mu_t = np.asarray(mu_t)
    a = 0.5 * np.trace(np.linalg.solve(eps_t, mu_t))
    return bool(np.linalg.norm(mu_t - a * eps_t) <= tol * np.linalg.norm(mu_t)), float(a)


def compensating_normal(eps_t, mu_t, normal, factor: float) -> np.ndarray:
    """Normal row ``(c p, m33')`` that leaves the boundary data unchanged when
    ``mu_t = a eps_t``.

    ``m33'`` solves ``t^2 + sqrt(a) t = c (m33 + sqrt(a m33))`` with ``t = sqrt(m33')``.
    """
    flag, a = multiples_test(eps_t, mu_t)
    if not flag:
        raise ValueError("boundary cometrics are not multiples")
    if factor <= 0:
        raise ValueError("the factor must be positive")
    normal = np.asarray(normal, dtype=float)
    ra = np.sqrt(a)
    rhs = factor * (normal[2] + ra * np.sqrt(normal[2]))
    t = 0.5 * (-ra + np.sqrt(a + 4.0 * rhs))
    return np.array([factor * normal[0], factor * normal[1], t * t])


def compatibility_residuals(eps_t, mu_t, normal, normal_prime, directions=None):
    """Relative residuals of the two compatibility identities over ``directions``.

    ``(xi'_mu3 + xi_eps3) chi_mu3 = (xi_mu3 + xi_eps3) chi'_mu3`` in the chart
    of eps, and the analogous identity for ``chi_eps3`` in the chart of mu.
    """
    if directions is None:
        directions = unit_directions()
    diffs = np.zeros((2, len(directions)), dtype=complex)
    sizes = np.zeros((2, len(directions)))
    for n, xi in enumerate(np.asarray(directions, dtype=float)):
        r = normal_root_components(eps_t, mu_t, normal, xi)
        rp = normal_root_components(eps_t, mu_t, normal_prime, xi)
        c = normal_eigen_components(eps_t, mu_t, normal, xi)
        cp = normal_eigen_components(eps_t, mu_t, normal_prime, xi)
        lhs = (rp["mu_in_eps"] + r["eps_in_eps"]) * c["chi_mu_in_eps"]
        rhs = (r["mu_in_eps"] + r["eps_in_eps"]) * cp["chi_mu_in_eps"]
        diffs[0, n] = lhs - rhs
        sizes[0, n] = max(abs(lhs), abs(rhs))
        lhs = (rp["eps_in_mu"] + r["mu_in_mu"]) * c["chi_eps_in_mu"]
        rhs = (r["eps_in_mu"] + r["mu_in_mu"]) * cp["chi_eps_in_mu"]
        diffs[1, n] = lhs - rhs
        sizes[1, n] = max(abs(lhs), abs(rhs))
    scale = np.maximum(sizes.max(axis=1), 1e-300)
    return np.abs(diffs).max(axis=1) / scale


@dataclass
class Verdict:
    """Outcome of comparing two candidate normal rows of ``mu``.

    ``kind`` is ``"equal"``, ``"proportional"`` or ``"inconsistent"``;
    ``factor`` is the fitted ``c`` with ``p' = c p`` in the proportional case.
    """

    kind: str
    factor: Optional[float] = None
    residual: float = 0.0
    residuals: np.ndarray = field(default_factory=lambda: np.zeros(2))
    note: str = ""


def recover_normal_mu(eps_t, mu_t, normal, normal_prime, directions=None, tol: float = 1e-9) -> Verdict:
    """Decide whether two normal rows of ``mu`` give the same boundary symbols.

    Both rows share the boundary cometrics ``eps_t`` and ``mu_t``. If the
    compatibility identity fails anywhere on the sampled directions the data
    are inconsistent. Otherwise the rows are equal, or the boundary
    cometrics are multiples and the tangential parts of the rows are
    proportional.
    """
    if directions is None:
        directions = unit_directions()
    if len(directions) < MIN_NORMAL_DIRECTIONS:
        raise ValueError(f"need at least {MIN_NORMAL_DIRECTIONS} directions, got {len(directions)}")
    normal = np.asarray(normal, dtype=float)
    normal_prime = np.asarray(normal_prime, dtype=float)
    if normal[2] <= 0 or normal_prime[2] <= 0:
        raise InvalidMetricError("normal component mu^33 must be positive")
    residuals = compatibility_residuals(eps_t, mu_t, normal, normal_prime, directions)
    residual = float(residuals[0])
    if residual > tol:
        return Verdict("inconsistent", None, residual, residuals)
    if np.linalg.norm(normal - normal_prime) <= tol * np.linalg.norm(normal):
        return Verdict("equal", 1.0, residual, residuals)
    flag, _ = multiples_test(eps_t, mu_t)
    p, pp = normal[:2], normal_prime[:2]
    if flag and p @ p > 0:
        factor = float(p @ pp / (p @ p))
        return Verdict("proportional", factor, residual, residuals)
    return Verdict(
        "inconsistent", None, residual, residuals,
        note="identity holds on the sample but the rows differ without proportional cometrics",
    )


# ---------------------------------------------------------------------------
# jet-level linear maps


@dataclass
class JetPerturbation:
    """Order-``kappa`` perturbations ``eps = eps' + x3^kappa e_eps`` (same for mu)."""

    kappa: int
    e_eps: np.ndarray
    e_mu: np.ndarray

    def __post_init__(self):
        if self.kappa < 1:
            raise ValueError("kappa must be at least 1")
        self.e_eps = np.asarray(self.e_eps, dtype=float)
        self.e_mu = np.asarray(self.e_mu, dtype=float)

    def inverse_perturbation(self, base, which: str = "eps") -> np.ndarray:
        """Leading coefficient of ``x3^kappa`` in the inverse: ``-base^-1 e base^-1``."""
        e = self.e_eps if which == "eps" else self.e_mu
        base_inv = np.linalg.inv(base)
        return -base_inv @ e @ base_inv

    def root_det_perturbation(self, base, which: str = "eps") -> float:
        """Leading coefficient of ``x3^kappa`` in ``sqrt(det base^-1)``.

        From ``d sqrt(det X) = sqrt(det X) tr(X^-1 dX) / 2`` with ``X = base^-1``.
        """
        X = np.linalg.inv(base)
        dX = self.inverse_perturbation(base, which)
        return float(0.5 * np.sqrt(np.linalg.det(X)) * np.trace(np.linalg.solve(X, dX)))


SYM2_BASIS = [(0, 0), (0, 1), (1, 1)]
STAGE1_BASIS = [(0, 0), (0, 1), (1, 1), (0, 2), (1, 2)]


def _symmetric_unit(i, j) -> np.ndarray:
    e = np.zeros((3, 3))
    e[i, j] = e[j, i] = 1.0
    return e


def _curl_contraction(base_inv, e, covector, eigen, kappa):
    """``i kappa (base^-1)_{lq} sigma^{3jq} e_{jb} sigma^{dkb} xi_d chi_k``
    with ``q, j`` tangential."""
    cross = np.cross(covector, eigen)
    w = e @ cross
    rotated = np.einsum("jq,j->q", SIGMA[2], w)
    rotated[2] = 0.0
    return 1j * kappa * base_inv @ rotated


def jet_residual_H(eps, mu, kappa: int, directions=None) -> np.ndarray:
    """Linear map from the tangential block of ``delta(eps^-1)`` to the
    order-``kappa`` jet residual of the magnetic factorization.

    ``eps`` must be in boundary normal form. Columns correspond to the
    entries ``(11, 12, 22)``; rows stack the three components over all
    directions.
    """
    eps = np.asarray(eps)
    mu = np.asarray(mu)
    if directions is None:
        directions = unit_directions()
    eps_inv = np.linalg.inv(eps)
    det_inv = np.linalg.det(eps_inv)
    cols = []
    for i, j in SYM2_BASIS:
        e = _symmetric_unit(i, j)
        col = []
        for xi_t in np.asarray(directions, dtype=float):
            xi = np.array([xi_t[0], xi_t[1], upper_root(eps, xi_t)])
            chi = star_of_wedge(xi, np.linalg.solve(eps, mu @ xi), eps)
            col.append(_curl_contraction(eps_inv, e, xi, chi, kappa) / det_inv)
        cols.append(np.concatenate(col))
    return np.column_stack(cols)


def stage_two_coefficients(eps, mu, directions=None) -> np.ndarray:
    """``*_mu(nu ^ *_mu(chi_mu ^ xi_mu)) <nu, xi_mu>_mu`` stacked over directions."""
    eps = np.asarray(eps)
    mu = np.asarray(mu)
    if directions is None:
        directions = unit_directions()
    out = []
    for xi_t in np.asarray(directions, dtype=float):
        xi = np.array([xi_t[0], xi_t[1], upper_root(mu, xi_t)])
        chi = star_of_wedge(xi, np.linalg.solve(mu, eps @ xi), mu)
        inner = star_of_wedge(chi, xi, mu)
        out.append(star_of_wedge(NU, inner, mu) * (mu[2] @ xi))
    return np.concatenate(out)


def jet_residual_E(eps, mu, kappa: int, directions=None):
    """Linear maps of the electric-side jet residual.

    Returns ``(stage1, stage2)``. ``stage1`` maps the entries
    ``(11, 12, 22, 13, 23)`` of ``delta(mu^-1)``; ``stage2`` is a single
    column multiplying the ``33`` entry once the others vanish.
    """
    eps = np.asarray(eps)
    mu = np.asarray(mu)
    if directions is None:
        directions = unit_directions()
    mu_inv = np.linalg.inv(mu)
    cols = []
    for i, j in STAGE1_BASIS:
        e = _symmetric_unit(i, j)
        col = []
        for xi_t in np.asarray(directions, dtype=float):
            xi = np.array([xi_t[0], xi_t[1], upper_root(mu, xi_t)])
            chi = star_of_wedge(xi, np.linalg.solve(mu, eps @ xi), mu)
            col.append(_curl_contraction(mu_inv, e, xi, chi, kappa) / (1j * kappa))
        cols.append(np.concatenate(col))
    stage1 = np.column_stack(cols)
    stage2 = stage_two_coefficients(eps, mu, directions)[:, None]
    return stage1, stage2


def combined_jet_map(eps, mu, kappa: int, directions=None) -> np.ndarray:
    """Both electric stages as one map on the six entries of ``delta(mu^-1)``."""
    stage1, stage2 = jet_residual_E(eps, mu, kappa, directions)
    top = np.hstack([stage1, np.zeros((stage1.shape[0], 1))])
    bottom = np.hstack([np.zeros((stage2.shape[0], stage1.shape[1])), stage2])
    return np.vstack([top, bottom])


def kernel_margin(matrix) -> float:
    """``sigma_min / sigma_max``; zero means a nontrivial kernel."""
    s = np.linalg.svd(np.asarray(matrix), compute_uv=False)
    return float(s[-1] / s[0]) if s[0] > 0 else 0.0


def sylvester_uniqueness_check(symbols: SymbolSet | tuple, B) -> float:
    """Smallest singular value of ``Z -> (T^-1 A + B) Z + Z B``."""
    T, A, _ = symbols.principal() if isinstance(symbols, SymbolSet) else symbols
    return sylvester_sigma_min(np.linalg.solve(T, A) + B, B)
