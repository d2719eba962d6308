"""Small tensor algebra on R^3 and C^3 in explicit coordinates.

Conventions used throughout the package:

* A metric passed as ``m`` is a symmetric positive definite (2,0) tensor,
  i.e. an inner product on covectors, stored as a 3x3 array ``m[i, j] = m^{ij}``.
  Its inverse ``inv(m)`` is the (0,2) Riemannian metric on vectors.
* Bilinear forms never conjugate: ``<a, b>_m = m^{ij} a_i b_j`` even for
  complex covectors.
* Two-forms are stored as the three coefficients of
  ``(dx2^dx3, dx3^dx1, dx1^dx2)``, so ``a ^ b`` is the cross product of the
  coefficient vectors.
"""
from __future__ import annotations

import itertools

import numpy as np

from .errors import InvalidMetricError

SPD_RTOL = 1e-12


def levi_civita() -> np.ndarray:
    """Permutation symbol sigma_{ijk} as a 3x3x3 integer array."""
    sigma = np.zeros((3, 3, 3), dtype=int)
    for perm in itertools.permutations(range(3)):
        inversions = sum(perm[a] > perm[b] for a in range(3) for b in range(a + 1, 3))
        sigma[perm] = -1 if inversions % 2 else 1
    return sigma


SIGMA = levi_civita()
SIGMA2 = np.array([[0, 1], [-1, 0]])


def check_spd(m, name: str = "metric", rtol: float = SPD_RTOL) -> np.ndarray:
    """Return ``m`` as a float array or raise InvalidMetricError.

    Symmetry is checked to ``rtol * ||m||`` and positivity through the
    leading principal minors, each of which must exceed ``rtol * ||m||^k``.
    """
    m = np.asarray(m, dtype=float)
    n = m.shape[0]
    if m.ndim != 2 or m.shape != (n, n):
        raise InvalidMetricError(f"{name} must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidMetricError(f"{name} has non-finite entries")
    scale = np.linalg.norm(m)
    if scale == 0.0:
        raise InvalidMetricError(f"{name} is zero")
    if np.max(np.abs(m - m.T)) > rtol * scale:
        raise InvalidMetricError(f"{name} is not symmetric")
    for k in range(1, n + 1):
        if np.linalg.det(m[:k, :k]) <= rtol * scale**k:
            raise InvalidMetricError(f"{name} is not positive definite (minor {k})")
    return m


def is_spd(m, rtol: float = SPD_RTOL) -> bool:
    try:
        check_spd(m, rtol=rtol)
    except InvalidMetricError:
        return False
    return True


def bilinear(a, b, m) -> complex:
    """Complex-bilinear pairing ``m^{ij} a_i b_j`` (no conjugation)."""
    return np.asarray(a) @ np.asarray(m) @ np.asarray(b)


def wedge(a, b) -> np.ndarray:
    """Wedge of two 1-forms, returned in (dx2^dx3, dx3^dx1, dx1^dx2) order."""
    return np.cross(np.asarray(a), np.asarray(b))


def hodge_star_1form(a, m) -> np.ndarray:
    """Hodge star of a 1-form for the cometric ``m``; the result is a 2-form.

    Satisfies ``a ^ *a = <a, a>_m dV`` with ``dV = sqrt(det inv(m)) dx1^dx2^dx3``.
    """
    m = np.asarray(m)
    return (m @ np.asarray(a)) / np.sqrt(np.linalg.det(m))


def hodge_star_2form(beta, m) -> np.ndarray:
    """Hodge star of a 2-form for the cometric ``m``; the result is a 1-form."""
    m = np.asarray(m)
    return np.sqrt(np.linalg.det(m)) * np.linalg.solve(m, np.asarray(beta))


def star_of_wedge(a, b, m) -> np.ndarray:
    """``*_m (a ^ b)`` computed as ``(m a) x (m b) / sqrt(det m)``."""
    m = np.asarray(m)
    return np.cross(m @ np.asarray(a), m @ np.asarray(b)) / np.sqrt(np.linalg.det(m))


def wedge2(a, b):
    """Coefficient of dx1^dx2 in ``a ^ b`` for 2-component covectors."""
    return a[0] * b[1] - a[1] * b[0]


def boundary_hodge(w, m2):
    """Hodge star on the boundary for the 2x2 cometric ``m2``.

    A scalar is read as the coefficient of ``dx1^dx2`` and mapped to the
    function ``w * sqrt(det m2)``. A covector ``xi`` is mapped to the rotated
    covector ``xi_perp`` with ``<xi, xi_perp> = 0`` and
    ``xi ^ xi_perp = |xi|^2 dv``.
    """
    m2 = np.asarray(m2)
    if np.ndim(w) == 0:
        return w * np.sqrt(np.linalg.det(m2))
    u = m2 @ np.asarray(w)
    return np.array([-u[1], u[0]]) / np.sqrt(np.linalg.det(m2))


def raise_index(t, g):
    """``t^{ij} = g^{ik} t_k^j`` where ``g`` is the (0,2) metric."""
    return np.linalg.solve(np.asarray(g), np.asarray(t))


def lower_index(t, g):
    """Inverse of :func:`raise_index`: ``g_{ik} t^{kj}``."""
    return np.asarray(g) @ np.asarray(t)


def raise_lower(t, g, mode: str):
    if mode == "raise":
        return raise_index(t, g)
    if mode == "lower":
        return lower_index(t, g)
    raise ValueError(f"mode must be 'raise' or 'lower', got {mode!r}")


def altdet_residual(g_inv) -> float:
    """Relative residual of ``det(g^-1) sigma^{pqr} = sigma_{ijk} g^{pi} g^{qj} g^{rk}``."""
    g_inv = np.asarray(g_inv)
    lhs = np.linalg.det(g_inv) * SIGMA
    rhs = np.einsum("ijk,pi,qj,rk->pqr", SIGMA, g_inv, g_inv, g_inv)
    return float(np.max(np.abs(lhs - rhs)) / np.linalg.norm(g_inv) ** 3)


def cofactor_residual(g_inv) -> float:
    """Relative residual of the contracted double-permutation identity.

    ``sigma^{aqj} sigma^{dkb} g_{bj} = det(g) (g^{ad} g^{qk} - g^{ak} g^{qd})``
    with ``g_{bj}`` the matrix inverse of ``g^{..}``.
    """
    g_inv = np.asarray(g_inv)
    g = np.linalg.inv(g_inv)
    lhs = np.einsum("aqj,dkb,bj->aqdk", SIGMA, SIGMA, g)
    rhs = np.linalg.det(g) * (
        np.einsum("ad,qk->aqdk", g_inv, g_inv) - np.einsum("ak,qd->aqdk", g_inv, g_inv)
    )
    scale = np.linalg.det(g) * np.linalg.norm(g_inv) ** 2
    return float(np.max(np.abs(lhs - rhs)) / scale)
