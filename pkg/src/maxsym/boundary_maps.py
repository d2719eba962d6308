"""Principal symbols of the impedance and admittance maps and of the boundary fields.

Metrics are the rescaled cometrics in a boundary-fixing chart. Tangential
data (``F``, ``G``, ``xi_t``) are 2-component covectors on the boundary;
3-component inputs are pulled back by dropping the normal entry.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError
from .metrics_geometry import boundary_cometric
from .symbol_calculus import DEGENERACY_TOL, upper_root
from .tensor_core import bilinear, boundary_hodge, star_of_wedge, wedge2


def _tangential(v) -> np.ndarray:
    v = np.asarray(v)
    return v[:2]


def normal_pairing(m, xi) -> complex:
    """``<nu_m, xi>_m`` with ``nu_m`` the unit conormal ``dx3 / sqrt(m^33)``."""
    m = np.asarray(m)
    return complex(m[2] @ np.asarray(xi)) / np.sqrt(m[2, 2])


def _root_covector(m, xi_t) -> np.ndarray:
    xi_t = np.asarray(xi_t, dtype=float)
    return np.array([xi_t[0], xi_t[1], upper_root(m, xi_t)], dtype=complex)


def _boundary_symbol(m, xi_t, data, omega, sign):
    xi_t = np.asarray(xi_t, dtype=float)
    data = _tangential(data)
    tangential = boundary_cometric(m)
    area = boundary_hodge(wedge2(xi_t, data), tangential)
    pairing = normal_pairing(m, _root_covector(m, xi_t))
    return sign * xi_t * area / (omega * pairing)


def impedance_principal(eps, xi_t, F, omega: float = 1.0) -> np.ndarray:
    """Principal symbol of the magnetic-to-electric boundary map applied to ``F``.

    ``-xi_t *(xi_t ^ F) / (omega <nu, xi_eps>_eps)``, with the star taken
    for the boundary cometric induced by ``eps``.
    """
    return _boundary_symbol(eps, xi_t, F, omega, -1.0)


def admittance_principal(mu, xi_t, G, omega: float = 1.0) -> np.ndarray:
    """Principal symbol of the electric-to-magnetic boundary map applied to ``G``."""
    return _boundary_symbol(mu, xi_t, G, omega, 1.0)


def impedance_matrix(eps, xi_t, omega: float = 1.0) -> np.ndarray:
    """The 2x2 complex matrix of :func:`impedance_principal` acting on ``F``."""
    return np.column_stack([impedance_principal(eps, xi_t, e, omega) for e in np.eye(2)])


def admittance_matrix(mu, xi_t, omega: float = 1.0) -> np.ndarray:
    return np.column_stack([admittance_principal(mu, xi_t, e, omega) for e in np.eye(2)])


@dataclass
class FieldSymbol:
    """Principal field symbol ``a * eigencovector + b * root covector``."""

    a: complex
    b: complex
    field: np.ndarray
    eigencovector: np.ndarray
    root_covector: np.ndarray


def field_symbol_H(eps, mu, xi_t, F) -> FieldSymbol:
    """Principal symbol of the magnetic field with tangential boundary value ``F``.

    ``H = a chi_eps + b xi_mu`` where ``chi_eps = *_eps(xi ^ eps^-1 mu xi)``
    at ``xi3 = xi_eps3`` and ``xi_mu`` is the root covector of ``mu``.
    """
    eps = np.asarray(eps)
    mu = np.asarray(mu)
    xi_t = np.asarray(xi_t, dtype=float)
    F = _tangential(F)
    xi_e = _root_covector(eps, xi_t)
    xi_m = _root_covector(mu, xi_t)
    chi = star_of_wedge(xi_e, np.linalg.solve(eps, mu @ xi_e), eps)
    length = bilinear(xi_e, xi_e, mu)
    if abs(length) < DEGENERACY_TOL * np.linalg.norm(mu) * np.linalg.norm(xi_e) ** 2:
        raise DegenerateError(f"roots coincide at xi_t = {xi_t}; the field basis collapses")
    denom = normal_pairing(eps, xi_e) * length
    tangential = boundary_cometric(eps)
    a = boundary_hodge(wedge2(xi_t, F), tangential) / denom
    b = boundary_hodge(wedge2(F, chi[:2]), tangential) / denom
    return FieldSymbol(a, b, a * chi + b * xi_m, chi, xi_m)


def field_symbol_E(eps, mu, xi_t, G) -> FieldSymbol:
    """Principal symbol of the electric field with tangential boundary value ``G``."""
    return field_symbol_H(mu, eps, xi_t, G)


def divergence_residual(m, B, field, xi_t) -> complex:
    """``xi_a m^{ab} H_b + m^{3a} (B H)_a`` with ``a`` tangential in the first sum."""
    m = np.asarray(m)
    xi_t = np.asarray(xi_t, dtype=float)
    return complex(xi_t @ m[:2] @ field + m[2] @ (B @ field))


def electric_from_curl(eps, xi_t, B, field, omega: float = 1.0) -> np.ndarray:
    """Electric symbol ``-(1/omega) sqrt(det eps) eps^-1 curl`` of a magnetic symbol.

    The curl uses ``xi_t`` for tangential derivatives and ``B`` for the
    normal derivative.
    """
    eps = np.asarray(eps)
    xi_t = np.asarray(xi_t, dtype=float)
    xt = np.array([xi_t[0], xi_t[1], 0.0])
    curl = np.cross(xt, field) + np.cross(np.array([0.0, 0.0, 1.0]), B @ field)
    return -np.sqrt(np.linalg.det(eps)) * np.linalg.solve(eps, curl) / omega


# ---------------------------------------------------------------------------
# normal components in the boundary normal chart of eps


def normal_root_components(eps_t, mu_t, mu_normal, xi_t) -> dict:
    """Third components of the root covectors in both boundary normal charts.

    Keys ``eps_in_eps``, ``mu_in_mu``, ``mu_in_eps`` and ``eps_in_mu``;
    ``mu_normal = (mu^{13}, mu^{23}, mu^{33})`` in the chart of ``eps``.
    """
    xi_t = np.asarray(xi_t, dtype=float)
    len_e = np.sqrt(xi_t @ eps_t @ xi_t)
    len_m = np.sqrt(xi_t @ mu_t @ xi_t)
    m33 = mu_normal[2]
    cross = np.asarray(mu_normal[:2]) @ xi_t
    return {
        "eps_in_eps": 1j * len_e,
        "mu_in_mu": 1j * len_m,
        "mu_in_eps": -cross / m33 + 1j * len_m / np.sqrt(m33),
        "eps_in_mu": cross / np.sqrt(m33) + 1j * len_e * np.sqrt(m33),
    }


def normal_eigen_components(eps_t, mu_t, mu_normal, xi_t) -> dict:
    """Third components of the eigencovectors ``chi_mu`` (chart of eps) and
    ``chi_eps`` (chart of mu), in closed form."""
    eps_t = np.asarray(eps_t)
    mu_t = np.asarray(mu_t)
    xi_t = np.asarray(xi_t, dtype=float)
    p = np.asarray(mu_normal[:2])
    m33 = mu_normal[2]
    len_e = np.sqrt(xi_t @ eps_t @ xi_t)
    len_m = np.sqrt(xi_t @ mu_t @ xi_t)
    det_e = np.linalg.det(eps_t)
    det_m = np.linalg.det(mu_t)
    ex = eps_t @ xi_t
    mx = mu_t @ xi_t
    # sigma_{3ji} u^i v^j = v ^ u
    chi_mu = (
        wedge2(mx, ex) / (np.sqrt(det_m) * np.sqrt(m33))
        + 1j * len_m * wedge2(p, ex) / (np.sqrt(det_m) * m33)
    )
    chi_eps = (
        wedge2(ex, mx) * np.sqrt(m33) / np.sqrt(det_e)
        - 1j * len_e * wedge2(p, mx) / (np.sqrt(det_e) * np.sqrt(m33))
    )
    return {"chi_mu_in_eps": chi_mu, "chi_eps_in_mu": chi_eps}


def normal_E_symbol(eps_t, mu_t, mu_normal, xi_t, G) -> complex:
    """Normal component of the electric field symbol in the chart of eps.

    Depends on the boundary cometrics, the normal row of ``mu`` and ``G``.
    """
    eps_t = np.asarray(eps_t)
    mu_t = np.asarray(mu_t)
    xi_t = np.asarray(xi_t, dtype=float)
    G = _tangential(G)
    roots = normal_root_components(eps_t, mu_t, mu_normal, xi_t)
    chi = normal_eigen_components(eps_t, mu_t, mu_normal, xi_t)["chi_mu_in_eps"]
    len_e = np.sqrt(xi_t @ eps_t @ xi_t)
    len_m = np.sqrt(xi_t @ mu_t @ xi_t)
    perp = boundary_hodge(xi_t, eps_t)
    first = chi / (len_m * len_e * (roots["mu_in_eps"] + roots["eps_in_eps"]))
    first *= boundary_hodge(wedge2(xi_t, G), mu_t)
    second = -1j * np.sqrt(np.linalg.det(eps_t)) / (np.sqrt(np.linalg.det(mu_t)) * len_e)
    second *= boundary_hodge(wedge2(perp, G), mu_t)
    return complex(first + second)
