"""Rescaled metrics, boundary normal charts and boundary-fixing gauge maps."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import InvalidMetricError
from .tensor_core import check_spd


@dataclass(frozen=True)
class ParameterTriple:
    """Permittivity, permeability and background metric at one point.

    ``eps`` and ``mu`` are (1,1) tensors ``eps_k^j`` acting on covectors and
    ``g`` is the (0,2) metric. Raising with ``g`` must give SPD matrices.
    """

    eps: np.ndarray
    mu: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        g = check_spd(self.g, "g")
        object.__setattr__(self, "g", g)
        for name in ("eps", "mu"):
            t = np.asarray(getattr(self, name), dtype=float)
            check_spd(np.linalg.solve(g, t), f"g^-1 {name}")
            object.__setattr__(self, name, t)


@dataclass(frozen=True)
class HatPair:
    """Rescaled cometrics ``eps_hat^{ij}`` and ``mu_hat^{ij}``."""

    eps_hat: np.ndarray
    mu_hat: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "eps_hat", check_spd(self.eps_hat, "eps_hat"))
        object.__setattr__(self, "mu_hat", check_spd(self.mu_hat, "mu_hat"))

    def swapped(self) -> "HatPair":
        return HatPair(self.mu_hat, self.eps_hat)


def flat_inverse(t, g) -> np.ndarray:
    """``(t^-1)_flat``: the (0,2) tensor obtained by inverting ``g^{ik} t_k^j``."""
    return np.linalg.inv(np.linalg.solve(g, t))


def hat_metric(t, g) -> np.ndarray:
    """Solve ``X^-1 / sqrt(det X^-1) = (t^-1)_flat / sqrt(det g)`` for ``X``."""
    scaled = flat_inverse(t, g) / np.sqrt(np.linalg.det(g))
    inv_hat = scaled / np.linalg.det(scaled)
    inv_hat = 0.5 * (inv_hat + inv_hat.T)
    return np.linalg.inv(inv_hat)


def build_hat_pair(params: ParameterTriple) -> HatPair:
    eps_hat = hat_metric(params.eps, params.g)
    mu_hat = hat_metric(params.mu, params.g)
    return HatPair(0.5 * (eps_hat + eps_hat.T), 0.5 * (mu_hat + mu_hat.T))


def hat_relation_residual(params: ParameterTriple, pair: HatPair) -> float:
    """Largest relative back-substitution error over both rescaled metrics."""
    worst = 0.0
    for t, m in ((params.eps, pair.eps_hat), (params.mu, pair.mu_hat)):
        m_inv = np.linalg.inv(m)
        lhs = m_inv / np.sqrt(np.linalg.det(m_inv))
        rhs = flat_inverse(t, params.g) / np.sqrt(np.linalg.det(params.g))
        worst = max(worst, np.linalg.norm(lhs - rhs) / np.linalg.norm(rhs))
    return float(worst)


def boundary_cometric(m) -> np.ndarray:
    """Cometric induced on the boundary x3 = 0 by the 3x3 cometric ``m``.

    This is the Schur complement of ``m^{33}``; it equals the tangential
    block of ``m`` in a boundary normal chart for ``m``.
    """
    m = np.asarray(m)
    return m[:2, :2] - np.outer(m[:2, 2], m[2, :2]) / m[2, 2]


def bnc_jacobian(m) -> np.ndarray:
    """Jacobian of the boundary-fixing chart change that puts ``m`` in normal form.

    Pushing ``m`` forward with the returned matrix gives
    ``blockdiag(boundary_cometric(m), 1)``.
    """
    m = np.asarray(m)
    m33 = m[2, 2]
    jac = np.eye(3)
    jac[0, 2] = -m[0, 2] / m33
    jac[1, 2] = -m[1, 2] / m33
    jac[2, 2] = 1.0 / np.sqrt(m33)
    return jac


def bnc_jacobian_inverse(m) -> np.ndarray:
    m = np.asarray(m)
    m33 = m[2, 2]
    jac = np.eye(3)
    jac[0, 2] = m[0, 2] / np.sqrt(m33)
    jac[1, 2] = m[1, 2] / np.sqrt(m33)
    jac[2, 2] = np.sqrt(m33)
    return jac


def pushforward_metric(m, jac, kind: str = "cometric") -> np.ndarray:
    """Transform a metric under a chart change with Jacobian ``jac``.

    Cometrics (upper indices) go to ``jac m jac^T``; (0,2) metrics go to
    ``jac^-T m jac^-1``.
    """
    m = np.asarray(m)
    jac = np.asarray(jac)
    if kind == "cometric":
        return jac @ m @ jac.T
    if kind == "metric":
        jinv = np.linalg.inv(jac)
        return jinv.T @ m @ jinv
    raise ValueError(f"kind must be 'cometric' or 'metric', got {kind!r}")


def cometric_from_normal_data(tangential, normal) -> np.ndarray:
    """Rebuild a cometric from its boundary cometric and its third row.

    ``normal = (m^{13}, m^{23}, m^{33})``. The tangential block becomes
    ``tangential + p p^T / m^{33}`` with ``p = (m^{13}, m^{23})``.
    """
    tangential = np.asarray(tangential, dtype=float)
    p = np.asarray(normal[:2], dtype=float)
    m33 = float(normal[2])
    if m33 <= 0:
        raise InvalidMetricError("normal component m^33 must be positive")
    out = np.empty((3, 3))
    out[:2, :2] = tangential + np.outer(p, p) / m33
    out[:2, 2] = p
    out[2, :2] = p
    out[2, 2] = m33
    return out


@dataclass(frozen=True)
class BoundaryChart:
    """A hat pair expressed in the boundary normal chart of one of its members.

    ``reference`` names the metric that is in normal form (``"eps"`` or
    ``"mu"``). ``eps_tangential`` and ``mu_tangential`` are the induced
    boundary cometrics, which do not depend on the chart.
    """

    eps_hat: np.ndarray
    mu_hat: np.ndarray
    jacobian: np.ndarray
    reference: str
    eps_tangential: np.ndarray = field(init=False)
    mu_tangential: np.ndarray = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "eps_tangential", boundary_cometric(self.eps_hat))
        object.__setattr__(self, "mu_tangential", boundary_cometric(self.mu_hat))

    @property
    def pair(self) -> HatPair:
        return HatPair(self.eps_hat, self.mu_hat)

    @property
    def mu_normal(self) -> np.ndarray:
        return self.mu_hat[2].copy()

    @property
    def eps_normal(self) -> np.ndarray:
        return self.eps_hat[2].copy()


def to_boundary_normal(pair: HatPair, reference: str = "eps") -> BoundaryChart:
    """Move both metrics to the boundary normal chart of ``pair.<reference>_hat``."""
    if reference == "eps":
        jac = bnc_jacobian(pair.eps_hat)
    elif reference == "mu":
        jac = bnc_jacobian(pair.mu_hat)
    else:
        raise ValueError(f"reference must be 'eps' or 'mu', got {reference!r}")
    eps = pushforward_metric(pair.eps_hat, jac)
    mu = pushforward_metric(pair.mu_hat, jac)
    eps = 0.5 * (eps + eps.T)
    mu = 0.5 * (mu + mu.T)
    if reference == "eps":
        eps[:2, 2] = eps[2, :2] = 0.0
        eps[2, 2] = 1.0
    else:
        mu[:2, 2] = mu[2, :2] = 0.0
        mu[2, 2] = 1.0
    return BoundaryChart(eps, mu, jac, reference)


def is_boundary_normal(m, atol: float = 1e-12) -> bool:
    m = np.asarray(m)
    return bool(abs(m[2, 2] - 1.0) <= atol and np.all(np.abs(m[:2, 2]) <= atol))


# ---------------------------------------------------------------------------
# Boundary-fixing gauge maps


def smoothstep(t):
    """C-infinity step: 0 for t <= 0, 1 for t >= 1, with S(t) + S(1 - t) = 1."""
    t = np.asarray(t, dtype=float)
    inner = np.clip(t, 1e-300, 1.0 - 1e-16)
    left = np.exp(-1.0 / inner)
    right = np.exp(-1.0 / np.clip(1.0 - t, 1e-300, None))
    out = left / (left + right)
    return np.where(t <= 0, 0.0, np.where(t >= 1, 1.0, out))


PLATEAU_INNER = 0.25
PLATEAU_OUTER = 0.75


def plateau(s):
    """Even cutoff equal to 1 on |s| <= 1/4, vanishing for |s| >= 3/4.

    Because the smoothstep is antisymmetric about 1/2 the integral over R
    equals the sum of the two radii, i.e. exactly 1.
    """
    s = np.abs(np.asarray(s, dtype=float))
    return smoothstep((PLATEAU_OUTER - s) / (PLATEAU_OUTER - PLATEAU_INNER))


class BumpPerturbation:
    """Compactly supported perturbation ``h = 1 + amplitude * bump``.

    The bump is ``exp(1 - 1/(1 - r^2))`` with ``r = |x - center| / width``,
    so ``h`` equals ``1 + amplitude`` at the center and 1 outside the ball.
    """

    def __init__(self, amplitude: float, center, width: float):
        if amplitude <= -1.0:
            raise ValueError("amplitude must exceed -1 so that h stays positive")
        if width <= 0:
            raise ValueError("width must be positive")
        self.amplitude = float(amplitude)
        self.center = np.asarray(center, dtype=float)
        self.width = float(width)

    def _profile(self, x):
        r2 = np.sum((np.asarray(x, dtype=float) - self.center) ** 2) / self.width**2
        if r2 >= 1.0:
            return 0.0, 0.0
        val = np.exp(1.0 - 1.0 / (1.0 - r2))
        dval_dr2 = -val / (1.0 - r2) ** 2
        return val, dval_dr2

    def __call__(self, x) -> float:
        return 1.0 + self.amplitude * self._profile(x)[0]

    def gradient(self, x) -> np.ndarray:
        _, dval = self._profile(x)
        diff = np.asarray(x, dtype=float) - self.center
        return self.amplitude * dval * 2.0 * diff / self.width**2

    @property
    def sup(self) -> float:
        return 1.0 + max(self.amplitude, 0.0)

    def support_box(self):
        lo = self.center - self.width
        hi = self.center + self.width
        return lo, hi


class UnitFactor:
    """The trivial perturbation ``h = 1``."""

    amplitude = 0.0
    sup = 1.0

    def __call__(self, x) -> float:
        return 1.0

    def gradient(self, x) -> np.ndarray:
        return np.zeros(3)

    def support_box(self):
        return np.zeros(3), np.zeros(3)


QUAD_OPTS = dict(epsabs=1e-12, epsrel=1e-12, limit=200)


class GaugeMap:
    """Boundary-fixing diffeomorphism whose normal Jacobian near x3 = 0 is ``h``.

    ``Phi(x) = (x1, x2, f(x))`` with ``f`` built from ``h`` so that
    ``Phi`` is the identity on the boundary and outside the box
    ``[-size, size]^2 x [0, size]``, and ``det DPhi = h`` on the slab
    ``0 <= x3 < threshold``.
    """

    def __init__(self, h, size: float = 1.0):
        self.h = h
        self.size = float(size)
        lo, hi = h.support_box()
        if h.amplitude != 0.0:
            if np.any(np.abs(lo[:2]) > size) or np.any(np.abs(hi[:2]) > size) or hi[2] > size:
                raise ValueError("perturbation support is not inside the gauge box")
        sup_h1 = h.sup + 1.0
        self.a = 4.0 * sup_h1 + 3.0
        self.b = 2.0 * self.size / self.a * (sup_h1 + 1.0)
        self.c = 2.0 * self.size / self.a * sup_h1
        self.cutoff = self.size / self.a

    @property
    def threshold(self) -> float:
        """Height below which ``det DPhi = h`` holds exactly."""
        return PLATEAU_INNER * self.cutoff

    def _inner_weight(self, s):
        return plateau(s / self.cutoff)

    def _outer_weight(self, s):
        return plateau((s - self.b) / self.c)

    def _support_top(self) -> float:
        return PLATEAU_OUTER * self.cutoff

    def compensation(self, x1: float, x2: float) -> float:
        val, _ = integrate.quad(
            lambda s: (self.h(np.array([x1, x2, s])) - 1.0) * self._inner_weight(s),
            0.0, self._support_top(), **QUAD_OPTS,
        )
        return val / self.c

    def compensation_gradient(self, x1: float, x2: float) -> np.ndarray:
        out = np.empty(2)
        for k in range(2):
            val, _ = integrate.quad(
                lambda s: self.h.gradient(np.array([x1, x2, s]))[k] * self._inner_weight(s),
                0.0, self._support_top(), **QUAD_OPTS,
            )
            out[k] = val / self.c
        return out

    def _integrate(self, fn, upper):
        """Integrate ``fn`` over [0, upper], splitting at the support edges."""
        breaks = [0.0, self._support_top(), self.b - self.c, self.b + self.c]
        knots = sorted({min(max(p, 0.0), upper) for p in breaks} | {upper})
        total = 0.0
        for lo, hi in zip(knots[:-1], knots[1:]):
            if hi > lo:
                total += integrate.quad(fn, lo, hi, **QUAD_OPTS)[0]
        return total

    def normal_profile(self, x) -> float:
        x1, x2, x3 = (float(v) for v in x)
        if x3 <= 0.0:
            return 0.0
        d = self.compensation(x1, x2)

        def rate(s):
            return (
                (self.h(np.array([x1, x2, s])) - 1.0) * self._inner_weight(s)
                - d * self._outer_weight(s)
                + 1.0
            )

        return self._integrate(rate, x3)

    def normal_rate(self, x) -> float:
        """``df/dx3``, evaluated in closed form."""
        x1, x2, x3 = (float(v) for v in x)
        d = self.compensation(x1, x2)
        return float(
            (self.h(np.array([x1, x2, x3])) - 1.0) * self._inner_weight(x3)
            - d * self._outer_weight(x3)
            + 1.0
        )

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.array([x[0], x[1], self.normal_profile(x)])

    def jacobian(self, x) -> np.ndarray:
        x1, x2, x3 = (float(v) for v in x)
        jac = np.eye(3)
        jac[2, 2] = self.normal_rate(x)
        if x3 > 0.0:
            grad_d = self.compensation_gradient(x1, x2)
            for k in range(2):
                def rate(s, k=k):
                    return (
                        self.h.gradient(np.array([x1, x2, s]))[k] * self._inner_weight(s)
                        - grad_d[k] * self._outer_weight(s)
                    )
                jac[2, k] = self._integrate(rate, x3)
        return jac


def build_gauge_map(h, size: float = 1.0) -> GaugeMap:
    return GaugeMap(h, size)


def pullback_cometric_field(gauge: GaugeMap, field: Callable) -> Callable:
    """Pull a cometric field back through the gauge map.

    Covectors pull back as ``xi = DPhi^T xi'``, so the cometric becomes
    ``DPhi^-1 m'(Phi(x)) DPhi^-T``.
    """

    def pulled(x):
        jac = gauge.jacobian(x)
        jinv = np.linalg.inv(jac)
        return jinv @ field(gauge(x)) @ jinv.T

    return pulled


def pullback_parameters(gauge: GaugeMap, eps_field: Callable, mu_field: Callable):
    """Pull back a pair of rescaled cometric fields; returns two callables."""
    return pullback_cometric_field(gauge, eps_field), pullback_cometric_field(gauge, mu_field)


def volume_ratio(gauge: GaugeMap, eps_field: Callable, g, x) -> float:
    """Ratio of Riemannian volume densities of the pulled-back and original problems.

    The scalar ``det(g) det(eps_hat)`` does not depend on the chart, and the
    boundary normal representations of the two problems coincide. Comparing
    that scalar at ``x`` and at ``Phi(x)`` therefore gives the ratio of the
    volume densities at matching normal-chart points. For a constant
    background metric it equals ``1 / det DPhi``.
    """
    g = np.asarray(g)
    pulled = pullback_cometric_field(gauge, eps_field)(x)
    here = np.linalg.det(g) * np.linalg.det(pulled)
    there = np.linalg.det(g) * np.linalg.det(eps_field(gauge(x)))
    return float(np.sqrt(here / there))
