"""Symbols of the second-order boundary operator and their factorization.

Throughout, ``eps`` and ``mu`` are the rescaled cometrics (eps_hat, mu_hat)
in some boundary-fixing chart with the boundary at x3 = 0 and ``xi_t`` is a
real tangential covector. Matrices of symbols carry the row index ``l``
and column index ``k``, acting on field covectors by ``(M H)_l = M_l^k H_k``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .errors import ContourFailure, DegenerateError, NearDegenerateError
from .tensor_core import SIGMA, bilinear, check_spd, star_of_wedge

DEGENERACY_TOL = 1e-8
CONDITION_LIMIT = 1e8
AUTO_CONDITION_LIMIT = 1e3
CONTOUR_NODES = 256
NU = np.array([0.0, 0.0, 1.0])


# ---------------------------------------------------------------------------
# metric jets


@dataclass
class MetricJet:
    """Polynomial cometric field near a boundary point.

    The field is ``value + x1 d_tangential[0] + x2 d_tangential[1]
    + sum_k x3^k / k! d_normal[k-1]``, so every derivative needed by the
    lower-order symbols is defined exactly.
    """

    value: np.ndarray
    d_tangential: np.ndarray = field(default=None)
    d_normal: np.ndarray = field(default=None)

    def __post_init__(self):
        self.value = np.asarray(self.value, dtype=float)
        if self.d_tangential is None:
            self.d_tangential = np.zeros((2, 3, 3))
        if self.d_normal is None:
            self.d_normal = np.zeros((0, 3, 3))
        self.d_tangential = np.asarray(self.d_tangential, dtype=float).reshape(2, 3, 3)
        self.d_normal = np.asarray(self.d_normal, dtype=float).reshape(-1, 3, 3)

    @classmethod
    def constant(cls, value) -> "MetricJet":
        return cls(value)

    @property
    def order(self) -> int:
        return self.d_normal.shape[0]

    def local(self, x3: float = 0.0):
        """Value, gradient ``[a, i, j]`` and Hessian ``[a, b, i, j]`` at ``(0, 0, x3)``."""
        value = self.value.copy()
        grad = np.zeros((3, 3, 3))
        hess = np.zeros((3, 3, 3, 3))
        grad[:2] = self.d_tangential
        fact = 1.0
        for k, coeff in enumerate(self.d_normal, start=1):
            fact *= k
            value += x3**k / fact * coeff
            grad[2] += k * x3 ** (k - 1) / fact * coeff
            if k >= 2:
                hess[2, 2] += k * (k - 1) * x3 ** (k - 2) / fact * coeff
        return value, grad, hess

    def at(self, x3: float) -> "MetricJet":
        """Re-expand the field about ``(0, 0, x3)`` (tangential slopes are unchanged)."""
        value, grad, _ = self.local(x3)
        normal = []
        for j in range(self.order):
            acc = np.zeros((3, 3))
            for k in range(j + 1, self.order + 1):
                acc += self.d_normal[k - 1] * x3 ** (k - j - 1) / _factorial(k - j - 1)
            normal.append(acc)
        return MetricJet(value, self.d_tangential, np.array(normal).reshape(-1, 3, 3))


def _factorial(n: int) -> float:
    out = 1.0
    for k in range(2, n + 1):
        out *= k
    return out


def _as_jet(m) -> MetricJet:
    return m if isinstance(m, MetricJet) else MetricJet.constant(m)


# ---------------------------------------------------------------------------
# coefficient symbols


@dataclass
class SymbolSet:
    """Coefficient symbols of the operator, normalized so that
    ``M(xi3) = T xi3^2 + A xi3 + Q`` is the principal symbol."""

    T: np.ndarray
    A: np.ndarray
    Q: np.ndarray
    G: np.ndarray
    F: np.ndarray
    R: np.ndarray
    xi_t: np.ndarray
    omega: float

    def principal(self):
        return self.T, self.A, self.Q


def volume_ratio(eps, mu) -> float:
    """``sqrt(det mu^-1) / sqrt(det eps^-1)``."""
    return float(np.sqrt(np.linalg.det(eps) / np.linalg.det(mu)))


def principal_coefficients(eps, mu, xi_t):
    """``(T, A, Q)`` assembled entry by entry from their index formulas."""
    eps = np.asarray(eps)
    mu = np.asarray(mu)
    xi_t = np.asarray(xi_t, dtype=float)
    s = volume_ratio(eps, mu)
    eps_inv = np.linalg.inv(eps)
    eye = np.eye(3)
    e3 = eye[2]
    tan = np.array([1.0, 1.0, 0.0])
    xt = np.array([xi_t[0], xi_t[1], 0.0])

    mu_n = mu[:, 2]
    mu_xi = mu @ xt
    eps_xi = eps @ xt

    T = s * np.outer(eps_inv @ mu_n, mu_n) + eye * eps[2, 2] - np.outer(e3, eps[2])
    A = (
        s * (np.outer(eps_inv @ mu_n, mu_xi) + np.outer(eps_inv @ mu_xi, mu_n))
        + 2.0 * eye * (eps[2] @ xt)
        - np.outer(e3, eps_xi)
        - np.outer(tan * xt, eps[2])
    )
    Q = s * np.outer(eps_inv @ mu_xi, mu_xi) + eye * (xt @ eps_xi) - np.outer(tan * xt, eps_xi)
    return T, A, Q


def _divergence_vector(jet_value, jet_grad):
    """``v^k = d_a(sqrt(det m^-1) m^{ka}) / sqrt(det m^-1)``."""
    m_inv = np.linalg.inv(jet_value)
    log_rate = -0.5 * np.einsum("ij,aji->a", m_inv, jet_grad)
    return np.einsum("aka->k", jet_grad) + jet_value @ log_rate


def _divergence_vector_gradient(value, grad, hess):
    """``d_b v^k`` for the divergence vector, returned as ``[b, k]``."""
    m_inv = np.linalg.inv(value)
    trace = np.einsum("ij,aji->a", m_inv, grad)
    dm_inv_b = -np.einsum("ij,bjk,kl->bil", m_inv, grad, m_inv)
    d_trace = np.einsum("bij,aji->ba", dm_inv_b, grad) + np.einsum("ij,baji->ba", m_inv, hess)
    term1 = np.einsum("baka->bk", hess)
    term2 = -0.5 * np.einsum("bka,a->bk", grad, trace)
    term3 = -0.5 * np.einsum("ka,ba->bk", value, d_trace)
    return term1 + term2 + term3


def lower_order_coefficients(eps, mu, xi_t, omega: float = 1.0, x3: float = 0.0, convention: str = "operator"):
    """``(G, F, R)`` for jets ``eps`` and ``mu`` evaluated at ``(0, 0, x3)``.

    With ``convention="operator"`` the symbols are those of the operator
    itself: the curl-curl part differentiates ``(eps^-1)_{bj} / sqrt(det eps^-1)``
    as a whole and the second-derivative part of ``R`` carries the factor
    ``sqrt(det mu^-1) / sqrt(det eps^-1)``. ``convention="displayed"`` drops
    both, i.e. differentiates only ``eps^-1`` and leaves ``R`` unscaled.
    """
    if convention not in ("operator", "displayed"):
        raise ValueError(f"unknown convention {convention!r}")
    eps_val, eps_grad, _ = _as_jet(eps).local(x3)
    mu_val, mu_grad, mu_hess = _as_jet(mu).local(x3)
    xi_t = np.asarray(xi_t, dtype=float)
    xt = np.array([xi_t[0], xi_t[1], 0.0])

    s = volume_ratio(eps_val, mu_val)
    eps_inv = np.linalg.inv(eps_val)
    root_det = np.sqrt(np.linalg.det(eps_inv))
    d_eps_inv = -np.einsum("ij,ajk,kl->ail", eps_inv, eps_grad, eps_inv)
    if convention == "operator":
        # d_a[(eps^-1)_{bj} sqrt(det eps)] / sqrt(det eps)
        log_rate = 0.5 * np.einsum("ij,aji->a", eps_inv, eps_grad)
        d_eps_inv = d_eps_inv + np.einsum("a,bj->abj", log_rate, eps_inv)
    v = _divergence_vector(mu_val, mu_grad)

    # curl-curl pieces: K[l, a, j] = (eps^-1)_{lq} sigma^{ajq} / sqrt|eps^-1|
    K = np.einsum("lq,ajq->laj", eps_inv, SIGMA) / root_det
    sigma_tan = SIGMA[2].copy()
    sigma_tan[:, 2] = 0.0
    sigma_tan[2, :] = 0.0

    left = s * eps_inv
    G = -1j * left @ (np.einsum("qa,ak->qk", mu_val, mu_grad[:, :, 2]) + np.outer(mu_val[:, 2], v))
    d_eps_inv_tan = d_eps_inv.copy()
    d_eps_inv_tan[:, 2, :] = 0.0
    G = G + 1j * np.einsum("laj,abj,kb->lk", K, d_eps_inv_tan, sigma_tan) / root_det

    grad_mu_xi = np.einsum("akc,c->ak", mu_grad, xt)
    F = -1j * left @ (mu_val @ grad_mu_xi + np.outer(mu_val @ xt, v))
    sigma_xi = np.einsum("dkb,d->kb", SIGMA, xt)
    F = F + 1j * np.einsum("laj,abj,kb->lk", K, d_eps_inv, sigma_xi) / root_det

    dv = _divergence_vector_gradient(mu_val, mu_grad, mu_hess)
    weight = s if convention == "operator" else 1.0
    R = -(omega**2) * s * eps_inv @ mu_val - weight * eps_inv @ mu_val @ dv
    return G, F, R


def coefficient_symbols(eps, mu, xi_t, omega: float = 1.0, x3: float = 0.0, convention: str = "operator") -> SymbolSet:
    """All coefficient symbols of the magnetic-field operator.

    ``eps`` and ``mu`` may be plain matrices (constant fields) or
    :class:`MetricJet` instances. Swap the arguments to get the symbols of
    the electric-field operator.
    """
    eps_val = _as_jet(eps).local(x3)[0]
    mu_val = _as_jet(mu).local(x3)[0]
    check_spd(eps_val, "eps_hat")
    check_spd(mu_val, "mu_hat")
    T, A, Q = principal_coefficients(eps_val, mu_val, xi_t)
    G, F, R = lower_order_coefficients(eps, mu, xi_t, omega, x3, convention)
    return SymbolSet(T, A, Q, G, F, R, np.asarray(xi_t, dtype=float), float(omega))


def matrix_polynomial(symbols, xi3):
    """Evaluate ``T xi3^2 + A xi3 + Q``; ``xi3`` may be an array of points."""
    T, A, Q = symbols.principal() if isinstance(symbols, SymbolSet) else symbols
    xi3 = np.asarray(xi3)
    z = xi3[..., None, None]
    return T * z**2 + A * z + Q


def full_principal_symbol(eps, mu, xi):
    """Principal symbol for a full covector ``xi`` written without coefficients.

    ``s eps^-1 mu xi (mu xi)^T + <xi, xi>_eps I - xi (eps xi)^T``.
    """
    eps = np.asarray(eps)
    mu = np.asarray(mu)
    xi = np.asarray(xi)
    s = volume_ratio(eps, mu)
    mu_xi = mu @ xi
    return (
        s * np.outer(np.linalg.solve(eps, mu_xi), mu_xi)
        + bilinear(xi, xi, eps) * np.eye(3)
        - np.outer(xi, eps @ xi)
    )


def det_polynomial(symbols) -> np.ndarray:
    """Coefficients (highest degree first) of ``det M(xi3)``, degree 6.

    Obtained by sampling on a circle and inverting the discrete Fourier
    transform, which is exact for polynomials of degree below the node count.
    """
    T, A, Q = symbols.principal() if isinstance(symbols, SymbolSet) else symbols
    n = 8
    nodes = np.exp(2j * np.pi * np.arange(n) / n)
    scale = max(1.0, float(np.max(np.abs(Q))) ** 0.5)
    vals = np.linalg.det(matrix_polynomial((T, A, Q), scale * nodes))
    coeffs = np.fft.fft(vals) / n
    coeffs = coeffs[:7] / scale ** np.arange(7)
    return coeffs[::-1]


# ---------------------------------------------------------------------------
# characteristic roots


def upper_root(m, xi_t) -> complex:
    """Root with positive imaginary part of ``<xi, xi>_m = 0`` in ``xi3``.

    Equals ``-<nu, xi_t>_m / m^33 + i |xi_t|_b / sqrt(m^33)`` with ``b`` the
    induced boundary cometric.
    """
    m = np.asarray(m)
    xi_t = np.asarray(xi_t, dtype=float)
    m33 = m[2, 2]
    cross = m[2, :2] @ xi_t
    tang = xi_t @ m[:2, :2] @ xi_t
    disc = m33 * tang - cross**2
    return complex(-cross / m33, np.sqrt(max(disc, 0.0)) / m33)


def eigenvalues(eps, mu, xi_t):
    """``(xi_eps3, xi_mu3)``: the upper roots of ``|xi|_eps^2`` and ``|xi|_mu^2``.

    Zeros of ``det M`` are ``xi_eps3`` once and ``xi_mu3`` twice, plus the
    complex conjugates.
    """
    return upper_root(eps, xi_t), upper_root(mu, xi_t)


def polynomial_roots(symbols) -> np.ndarray:
    """All six zeros of ``det M`` from a companion linearization."""
    T, A, Q = symbols.principal() if isinstance(symbols, SymbolSet) else symbols
    n = T.shape[0]
    zero = np.zeros((n, n))
    eye = np.eye(n)
    lin_a = np.block([[zero, eye], [-Q, -A]])
    lin_b = np.block([[eye, zero], [zero, T]])
    return linalg.eigvals(lin_a, lin_b)


def _extend(xi_t, xi3) -> np.ndarray:
    return np.array([xi_t[0], xi_t[1], xi3], dtype=complex)


# ---------------------------------------------------------------------------
# principal factor via a Jordan chain


@dataclass
class JordanData:
    """Jordan chain ``X`` and block ``J`` with ``B = X J X^-1``."""

    X: np.ndarray
    J: np.ndarray
    xi_eps3: complex
    xi_mu3: complex
    chi: np.ndarray
    xi_mu: np.ndarray
    gamma: np.ndarray
    chain_factor: complex
    condition: float


def _check_gap(eps, mu, xi_t):
    lam_e, lam_m = eigenvalues(eps, mu, xi_t)
    size = np.linalg.norm(xi_t)
    if abs(lam_e - lam_m) < DEGENERACY_TOL * size:
        raise DegenerateError(
            f"roots coincide: |xi_eps3 - xi_mu3| = {abs(lam_e - lam_m):.3e} at xi_t = {xi_t}"
        )
    return lam_e, lam_m


def jordan_data(eps, mu, xi_t) -> JordanData:
    """Jordan chain for the right factor of the magnetic operator.

    Columns are the eigencovector ``chi`` at ``xi_eps3``, the covector
    ``xi`` at ``xi_mu3`` and the generalized covector
    ``gamma = nu + m zeta`` with ``zeta = eps^-1 mu xi``. The first two
    columns are rescaled to unit Euclidean norm, which makes every column
    homogeneous of degree 0 in ``xi_t``; the off-diagonal entry of ``J``
    absorbs the rescaling of ``xi``.
    """
    eps = np.asarray(eps)
    mu = np.asarray(mu)
    xi_t = np.asarray(xi_t, dtype=float)
    lam_e, lam_m = _check_gap(eps, mu, xi_t)
    s = volume_ratio(eps, mu)

    xi_e = _extend(xi_t, lam_e)
    chi = star_of_wedge(xi_e, np.linalg.solve(eps, mu @ xi_e), eps)

    xi_m = _extend(xi_t, lam_m)
    zeta = np.linalg.solve(eps, mu @ xi_m)
    denom = s * bilinear(xi_m, xi_m, mu @ np.linalg.solve(eps, mu)) + bilinear(xi_m, xi_m, eps)
    if abs(denom) < DEGENERACY_TOL * np.linalg.norm(xi_t) ** 2:
        raise DegenerateError("generalized eigencovector is undefined")
    coeff = -2.0 * s * bilinear(NU, xi_m, mu) / denom
    gamma = NU + coeff * zeta

    chi_n = np.linalg.norm(chi)
    xi_n = np.linalg.norm(xi_m)
    X = np.column_stack([chi / chi_n, xi_m / xi_n, gamma])
    J = np.array([[lam_e, 0, 0], [0, lam_m, xi_n], [0, 0, lam_m]], dtype=complex)
    cond = float(np.linalg.cond(X))
    return JordanData(X, J, lam_e, lam_m, chi, xi_m, gamma, xi_n, cond)


def principal_B_jordan(eps, mu, xi_t) -> np.ndarray:
    data = jordan_data(eps, mu, xi_t)
    if data.condition > CONDITION_LIMIT:
        raise NearDegenerateError(f"Jordan basis condition number {data.condition:.3e}")
    return data.X @ data.J @ np.linalg.inv(data.X)


# ---------------------------------------------------------------------------
# principal factor via contour integrals


@dataclass
class Contour:
    """Ellipse ``center + a cos t + i b sin t`` in the upper half plane."""

    center: complex
    a: float
    b: float

    def nodes(self, n: int):
        t = 2.0 * np.pi * np.arange(n) / n
        z = self.center + self.a * np.cos(t) + 1j * self.b * np.sin(t)
        dz = -self.a * np.sin(t) + 1j * self.b * np.cos(t)
        return z, dz

    def contains(self, z) -> bool:
        u = (z.real - self.center.real) / self.a
        v = (z.imag - self.center.imag) / self.b
        return u * u + v * v < 1.0


def enclosing_contour(roots) -> Contour:
    """Ellipse around the given upper-half-plane roots that stays above the real axis.

    Vertically it spans from half the lowest imaginary part to twice the
    highest; horizontally it is widened until every root sits well inside.
    """
    roots = np.asarray(roots)
    ys = roots.imag
    if np.any(ys <= 0):
        raise ContourFailure("roots to enclose must lie in the upper half plane")
    lo = 0.5 * ys.min()
    hi = 2.0 * ys.max()
    y0 = 0.5 * (lo + hi)
    b = 0.5 * (hi - lo)
    x0 = 0.5 * (roots.real.min() + roots.real.max())
    need = np.abs(roots.real - x0) / np.sqrt(1.0 - ((ys - y0) / b) ** 2)
    a = max(b, 1.5 * need.max())
    return Contour(complex(x0, y0), float(a), float(b))


def principal_B_contour(symbols, roots=None, n_nodes: int = CONTOUR_NODES) -> np.ndarray:
    """Right factor from ``(oint xi3 M^-1)(oint M^-1)^-1`` around the upper roots.

    ``roots`` only positions the contour; by default the upper-half-plane
    zeros of ``det M`` are found from a companion linearization.
    """
    T, A, Q = symbols.principal() if isinstance(symbols, SymbolSet) else symbols
    all_roots = polynomial_roots((T, A, Q))
    if roots is None:
        roots = all_roots[all_roots.imag > 0]
    contour = enclosing_contour(roots)
    inside = [contour.contains(r) for r in all_roots]
    if sum(inside) != 3 or any(contour.contains(r) for r in all_roots[all_roots.imag < 0]):
        raise ContourFailure("contour does not separate the upper and lower roots")
    z, dz = contour.nodes(n_nodes)
    scale = np.max(np.abs(z))
    gap = np.min(np.abs(z[:, None] - all_roots[None, :]))
    if gap < 1e-3 * scale:
        raise ContourFailure("a root lies too close to the contour")
    inv = np.linalg.inv(matrix_polynomial((T, A, Q), z))
    moment0 = np.einsum("n,nij->ij", dz, inv)
    moment1 = np.einsum("n,nij->ij", z * dz, inv)
    if np.linalg.cond(moment0) > 1e12:
        raise ContourFailure("zeroth contour moment is singular")
    return moment1 @ np.linalg.inv(moment0)


def principal_B(eps, mu, xi_t, route: str = "auto") -> np.ndarray:
    """Principal symbol of the right factor for the magnetic operator.

    ``route`` is ``"jordan"``, ``"contour"`` or ``"auto"``. The automatic
    route uses the Jordan chain while its basis is well conditioned and the
    contour integral otherwise, including at coincident roots.
    """
    if route == "jordan":
        return principal_B_jordan(eps, mu, xi_t)
    if route == "contour":
        return principal_B_contour(principal_coefficients(eps, mu, xi_t))
    if route != "auto":
        raise ValueError(f"unknown route {route!r}")
    try:
        data = jordan_data(eps, mu, xi_t)
    except DegenerateError:
        data = None
    if data is not None and data.condition <= AUTO_CONDITION_LIMIT:
        return data.X @ data.J @ np.linalg.inv(data.X)
    return principal_B_contour(principal_coefficients(eps, mu, xi_t))


def principal_C(eps, mu, xi_t, route: str = "auto") -> np.ndarray:
    """Principal right factor for the electric operator (roles of eps, mu swapped)."""
    return principal_B(mu, eps, xi_t, route)


# ---------------------------------------------------------------------------
# residuals


def quadratic_residual(symbols, B) -> float:
    """``||T B^2 + A B + Q|| / ||Q||``."""
    T, A, Q = symbols.principal() if isinstance(symbols, SymbolSet) else symbols
    return float(np.linalg.norm(T @ B @ B + A @ B + Q) / np.linalg.norm(Q))


def left_factor(symbols, B) -> np.ndarray:
    """``B*`` defined by matching the linear coefficient: ``-(A + T B) T^-1``."""
    T, A, Q = symbols.principal() if isinstance(symbols, SymbolSet) else symbols
    return -np.linalg.solve(T.T, (A + T @ B).T).T


def factorization_residual(symbols, B, xi3_samples) -> float:
    """Largest relative gap between ``M(xi3)`` and ``(xi3 - B*) T (xi3 - B)``."""
    T, A, Q = symbols.principal() if isinstance(symbols, SymbolSet) else symbols
    B_star = left_factor((T, A, Q), B)
    eye = np.eye(3)
    worst = 0.0
    for z in np.atleast_1d(xi3_samples):
        lhs = matrix_polynomial((T, A, Q), z)
        rhs = (z * eye - B_star) @ T @ (z * eye - B)
        scale = np.linalg.norm(T) * abs(z) ** 2 + np.linalg.norm(A) * abs(z) + np.linalg.norm(Q)
        worst = max(worst, np.linalg.norm(lhs - rhs) / scale)
    worst = max(worst, np.linalg.norm(Q - B_star @ T @ B) / np.linalg.norm(Q))
    return float(worst)


def spectrum_mismatch(B, targets) -> float:
    """Relative distance between the characteristic polynomial of ``B`` and
    ``prod (x - t)`` over ``targets``.

    Comparing coefficients avoids the square-root sensitivity of eigenvalues
    inside a Jordan block.
    """
    B = np.asarray(B)
    t = np.asarray(targets)
    size = max(np.max(np.abs(t)), 1e-300)
    got = np.array([np.trace(B), 0.5 * (np.trace(B) ** 2 - np.trace(B @ B)), np.linalg.det(B)])
    want = np.array([t.sum(), t[0] * t[1] + t[0] * t[2] + t[1] * t[2], t.prod()])
    return float(np.max(np.abs(got - want) / size ** np.arange(1, 4)))


def riccati_full_residual(eps, mu, xi_t, omega: float, x3_grid, step: float = 1e-4, route="auto"):
    """Split the Riccati residual along a normal segment into its orders.

    With ``D3 = -i d/dx3`` approximated by central differences, returns the
    largest relative order-2 residual ``T B^2 + A B + Q``, the largest
    order-1 remainder ``T D3 B + G B + F``, the largest order-0 remainder
    ``R`` and the largest ``||D3 B||``.
    """
    eps = _as_jet(eps)
    mu = _as_jet(mu)
    order2 = order1 = order0 = d3b_max = 0.0
    for x3 in np.atleast_1d(x3_grid):
        sym = coefficient_symbols(eps, mu, xi_t, omega, x3)
        B = principal_B(eps.local(x3)[0], mu.local(x3)[0], xi_t, route)
        B_plus = principal_B(eps.local(x3 + step)[0], mu.local(x3 + step)[0], xi_t, route)
        B_minus = principal_B(eps.local(x3 - step)[0], mu.local(x3 - step)[0], xi_t, route)
        d3b = -1j * (B_plus - B_minus) / (2.0 * step)
        order2 = max(order2, quadratic_residual(sym, B))
        order1 = max(order1, float(np.linalg.norm(sym.T @ d3b + sym.G @ B + sym.F)))
        order0 = max(order0, float(np.linalg.norm(sym.R)))
        d3b_max = max(d3b_max, float(np.linalg.norm(d3b)))
    return {"order2": order2, "order1": order1, "order0": order0, "d3_B": d3b_max}


# ---------------------------------------------------------------------------
# uniqueness of the lower-order correction


def sylvester_operator(left, right) -> np.ndarray:
    """Matrix of ``Z -> left Z + Z right`` acting on column-major ``vec(Z)``."""
    n = left.shape[0]
    eye = np.eye(n)
    return np.kron(eye, left) + np.kron(right.T, eye)


def sylvester_sigma_min(left, right) -> float:
    return float(np.linalg.svd(sylvester_operator(left, right), compute_uv=False)[-1])
