import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from maxsym.boundary_maps import impedance_principal
from maxsym.errors import InvalidMetricError
from maxsym.metrics_geometry import (
    BumpPerturbation,
    GaugeMap,
    HatPair,
    ParameterTriple,
    UnitFactor,
    bnc_jacobian,
    bnc_jacobian_inverse,
    boundary_cometric,
    build_hat_pair,
    cometric_from_normal_data,
    hat_metric,
    hat_relation_residual,
    is_boundary_normal,
    plateau,
    pullback_cometric_field,
    pullback_parameters,
    pushforward_metric,
    smoothstep,
    to_boundary_normal,
    volume_ratio,
)

from oracles import gradient_fd, spd_matrices

G_EXAMPLE = np.array([[2.0, 0.5, 0.0], [0.5, 1.0, 0.0], [0.0, 0.0, 0.5]])
S_EXAMPLE = np.array([[1.0, 0.2, 0.0], [0.2, 2.0, 1.0 / 3.0], [0.0, 1.0 / 3.0, 1.0]])
# exact rational evaluation of the defining relation
EPS_HAT_EXAMPLE = np.array([
    [0.6181318681318682, 0.12362637362637363, 0.0],
    [0.12362637362637363, 1.2362637362637363, 0.20604395604395603],
    [0.0, 0.20604395604395603, 0.6181318681318682],
])


def test_hat_metric_frozen_example():
    np.testing.assert_allclose(hat_metric(G_EXAMPLE @ S_EXAMPLE, G_EXAMPLE), EPS_HAT_EXAMPLE, rtol=1e-13, atol=1e-16)


def test_hat_metric_of_identity_is_identity():
    np.testing.assert_allclose(hat_metric(np.eye(3), np.eye(3)), np.eye(3))


@settings(max_examples=100)
@given(spd_matrices(), spd_matrices(), spd_matrices())
def test_hat_relation_back_substitution(g, s1, s2):
    triple = ParameterTriple(g @ s1, g @ s2, g)
    assert hat_relation_residual(triple, build_hat_pair(triple)) <= 1e-12


def test_parameter_triple_rejects_non_spd():
    with pytest.raises(InvalidMetricError):
        ParameterTriple(-np.eye(3), np.eye(3), np.eye(3))


@given(spd_matrices())
def test_boundary_normal_form(m):
    jac = bnc_jacobian(m)
    pushed = pushforward_metric(m, jac)
    assert is_boundary_normal(pushed, atol=1e-10)
    np.testing.assert_allclose(pushed[:2, :2], boundary_cometric(m), atol=1e-12)
    np.testing.assert_allclose(bnc_jacobian_inverse(m) @ jac, np.eye(3), atol=1e-12)
    # the chart change fixes the boundary: tangential covectors are untouched
    np.testing.assert_array_equal(jac[:2, :2], np.eye(2))


@given(spd_matrices(), spd_matrices())
def test_pushforward_of_metric_and_cometric_agree(m, jac_seed):
    jac = jac_seed + np.eye(3)
    co = pushforward_metric(m, jac, "cometric")
    met = pushforward_metric(np.linalg.inv(m), jac, "metric")
    np.testing.assert_allclose(np.linalg.inv(co), met, rtol=1e-9, atol=1e-10)
    with pytest.raises(ValueError):
        pushforward_metric(m, jac, "tensor")


@given(spd_matrices(2), st.floats(-1.0, 1.0), st.floats(-1.0, 1.0), st.floats(0.2, 3.0))
def test_cometric_from_normal_data_round_trip(tangential, p1, p2, m33):
    m = cometric_from_normal_data(tangential, [p1, p2, m33])
    np.testing.assert_allclose(boundary_cometric(m), tangential, atol=1e-12)
    np.testing.assert_allclose(m[2], [p1, p2, m33])


def test_cometric_from_normal_data_requires_positive_normal():
    with pytest.raises(InvalidMetricError):
        cometric_from_normal_data(np.eye(2), [0.0, 0.0, 0.0])


@given(spd_matrices(), spd_matrices())
def test_boundary_chart_keeps_boundary_cometrics(eps, mu):
    pair = HatPair(eps, mu)
    for ref in ("eps", "mu"):
        chart = to_boundary_normal(pair, ref)
        np.testing.assert_allclose(chart.eps_tangential, boundary_cometric(eps), atol=1e-12)
        np.testing.assert_allclose(chart.mu_tangential, boundary_cometric(mu), atol=1e-12)
        assert is_boundary_normal(getattr(chart, f"{ref}_hat"))
    with pytest.raises(ValueError):
        to_boundary_normal(pair, "g")


def test_smoothstep_and_plateau():
    t = np.linspace(-0.5, 1.5, 41)
    np.testing.assert_allclose(smoothstep(t) + smoothstep(1.0 - t), 1.0, atol=1e-15)
    assert smoothstep(0.0) == 0.0 and smoothstep(1.0) == 1.0
    np.testing.assert_array_equal(plateau([-0.25, 0.0, 0.2, 0.25]), 1.0)
    np.testing.assert_array_equal(plateau([0.75, -0.8, 2.0]), 0.0)
    area, _ = integrate.quad(lambda s: float(plateau(s)), -1.0, 1.0, epsabs=1e-13, points=[-0.75, -0.25, 0.25, 0.75])
    np.testing.assert_allclose(area, 1.0, atol=1e-12)


def test_bump_values_and_gradient():
    h = BumpPerturbation(0.5, [0.1, -0.1, 0.0], 0.4)
    np.testing.assert_allclose(h([0.1, -0.1, 0.0]), 1.5)
    assert h([0.6, 0.0, 0.0]) == 1.0
    x = np.array([0.2, 0.0, 0.1])
    np.testing.assert_allclose(h.gradient(x), gradient_fd(h, x), rtol=1e-7)
    with pytest.raises(ValueError):
        BumpPerturbation(-1.0, [0.0, 0.0, 0.0], 0.4)
    with pytest.raises(ValueError):
        BumpPerturbation(0.5, [0.0, 0.0, 0.0], 0.0)


@pytest.fixture(scope="module")
def gauge():
    return GaugeMap(BumpPerturbation(0.5, [0.0, 0.0, 0.0], 0.4))


def test_gauge_fixes_boundary(gauge):
    for x in ([0.0, 0.0, 0.0], [0.3, -0.2, 0.0], [0.9, 0.9, 0.0]):
        np.testing.assert_array_equal(gauge(x), x)


def test_gauge_is_identity_above_support(gauge):
    x = np.array([0.1, 0.05, 1.0])
    np.testing.assert_allclose(gauge(x), x, atol=1e-11)


def test_gauge_determinant_equals_h_near_boundary(gauge):
    for x3 in gauge.threshold * np.array([1e-6, 0.3, 0.99]):
        x = np.array([0.05, -0.1, x3])
        np.testing.assert_allclose(np.linalg.det(gauge.jacobian(x)), gauge.h(x), atol=1e-12)


def test_gauge_jacobian_matches_finite_differences(gauge):
    x = np.array([0.1, 0.05, 0.5 * gauge.threshold])
    fd = np.column_stack([gradient_fd(lambda y, k=k: gauge(y)[k], x, step=1e-4) for k in range(3)]).T
    np.testing.assert_allclose(gauge.jacobian(x), fd, atol=1e-7)


def test_gauge_rejects_support_outside_box():
    with pytest.raises(ValueError):
        GaugeMap(BumpPerturbation(0.5, [0.9, 0.0, 0.0], 0.4))


def test_unit_factor_gives_identity_map():
    gauge = GaugeMap(UnitFactor())
    x = np.array([0.2, 0.3, 0.05])
    np.testing.assert_allclose(gauge(x), x, atol=1e-14)
    np.testing.assert_allclose(gauge.jacobian(x), np.eye(3), atol=1e-14)


def test_pullback_preserves_boundary_symbols_and_changes_volume(gauge):
    rng = np.random.default_rng(4)
    base = np.eye(3) + 0.1 * rng.normal(size=(3, 3))
    base = base @ base.T
    slope = 0.1 * np.diag([1.0, -1.0, 0.5])

    def eps_field(x):
        return base + x[2] * slope

    pulled_eps, pulled_mu = pullback_parameters(gauge, eps_field, eps_field)
    x0 = np.array([0.05, 0.02, 0.0])
    for xi in (np.array([1.0, 0.0]), np.array([0.3, -0.8])):
        a = impedance_principal(pulled_eps(x0), xi, [0.2, 1.0])
        b = impedance_principal(eps_field(x0), xi, [0.2, 1.0])
        np.testing.assert_allclose(a, b, rtol=1e-12)
    np.testing.assert_allclose(pulled_mu(x0), pulled_eps(x0))

    g = np.diag([1.0, 2.0, 0.5])
    x = np.array([0.0, 0.0, 0.5 * gauge.threshold])
    ratio = volume_ratio(gauge, eps_field, g, x)
    det = np.linalg.det(gauge.jacobian(x))
    np.testing.assert_allclose(ratio * det, 1.0, atol=1e-10)
    assert abs(1.0 / ratio - 1.0) > 0.1


def test_pullback_cometric_field_formula(gauge):
    def field(x):
        return np.eye(3)

    x = np.array([0.1, 0.0, 0.5 * gauge.threshold])
    jinv = np.linalg.inv(gauge.jacobian(x))
    np.testing.assert_allclose(pullback_cometric_field(gauge, field)(x), jinv @ jinv.T)
