import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from maxsym.errors import DegenerateError
from maxsym.boundary_maps import (
    admittance_matrix,
    admittance_principal,
    divergence_residual,
    electric_from_curl,
    field_symbol_E,
    field_symbol_H,
    impedance_matrix,
    impedance_principal,
    normal_E_symbol,
    normal_eigen_components,
    normal_root_components,
)
from maxsym.metrics_geometry import (
    HatPair,
    boundary_cometric,
    bnc_jacobian,
    cometric_from_normal_data,
    pushforward_metric,
    to_boundary_normal,
)
from maxsym.symbol_calculus import eigenvalues, principal_B, principal_C, upper_root
from maxsym.tensor_core import boundary_hodge, wedge2

from oracles import directions, spd_matrices

pairs = st.floats(-2.0, 2.0, allow_nan=False).map(float)
covectors2 = st.tuples(pairs, pairs).map(np.array).filter(lambda v: np.linalg.norm(v) > 1e-3)


def test_impedance_example_identity_metric():
    # <nu, xi_eps> = i and *(xi ^ F) = 1, so the symbol is -xi / i = i xi
    out = impedance_principal(np.eye(3), [1.0, 0.0], [0.0, 1.0, 0.0], omega=1.0)
    np.testing.assert_allclose(out, [1j, 0.0])


def test_admittance_example_identity_metric():
    out = admittance_principal(np.eye(3), [1.0, 0.0], [0.0, 1.0], omega=1.0)
    np.testing.assert_allclose(out, [-1j, 0.0])


@given(spd_matrices(), directions(), st.floats(0.2, 3.0))
def test_parallel_data_is_annihilated(m, xi, scale):
    np.testing.assert_allclose(impedance_principal(m, xi, scale * xi), 0.0, atol=1e-14)
    np.testing.assert_allclose(admittance_principal(m, xi, scale * xi), 0.0, atol=1e-14)


@given(spd_matrices(), spd_matrices(), covectors2, covectors2, st.floats(0.3, 3.0))
def test_structure_of_boundary_symbols(eps, mu, xi, F, omega):
    z = impedance_principal(eps, xi, F, omega)
    scale = np.linalg.norm(xi) * np.linalg.norm(F) / omega
    assert abs(wedge2(xi, z)) <= 1e-12 * scale * np.linalg.norm(xi)
    y = admittance_principal(mu, xi, z, omega)
    assert np.linalg.norm(y) <= 1e-12 * np.linalg.norm(z) * np.linalg.norm(xi) / omega + 1e-300


@given(spd_matrices(), covectors2, covectors2)
def test_degree_one_homogeneity(eps, xi, F):
    np.testing.assert_allclose(impedance_principal(eps, 2.0 * xi, F), 2.0 * impedance_principal(eps, xi, F), rtol=1e-12)


@given(spd_matrices(), directions())
def test_matrices_act_linearly(eps, xi):
    F = np.array([0.3, -1.2])
    np.testing.assert_allclose(impedance_matrix(eps, xi) @ F, impedance_principal(eps, xi, F), atol=1e-13)
    np.testing.assert_allclose(admittance_matrix(eps, xi) @ F, admittance_principal(eps, xi, F), atol=1e-13)


@given(spd_matrices(), directions())
def test_chart_invariance_under_boundary_fixing_change(eps, xi):
    # moving eps to its own normal chart does not change the boundary symbol
    moved = pushforward_metric(eps, bnc_jacobian(eps))
    F = np.array([0.4, 0.9])
    np.testing.assert_allclose(impedance_principal(moved, xi, F), impedance_principal(eps, xi, F), rtol=1e-10)


@given(spd_matrices(), spd_matrices(), directions(), covectors2, st.floats(0.3, 3.0))
def test_magnetic_field_symbol(eps, mu, xi, F, omega):
    chart = to_boundary_normal(HatPair(eps, mu))
    eps, mu = chart.eps_hat, chart.mu_hat
    assume(_separated(eps, mu, xi))
    fs = field_symbol_H(eps, mu, xi, F)
    np.testing.assert_allclose(fs.field[:2], F, atol=1e-10 * np.linalg.norm(F))
    np.testing.assert_allclose(fs.field, fs.a * fs.eigencovector + fs.b * fs.root_covector)
    B = principal_B(eps, mu, xi)
    size = np.linalg.norm(mu) * np.linalg.norm(fs.field)
    assert abs(divergence_residual(mu, B, fs.field, xi)) <= 1e-10 * size
    # the electric field from the curl reproduces the impedance symbol
    E = electric_from_curl(eps, xi, B, fs.field, omega)
    np.testing.assert_allclose(E[:2], impedance_principal(eps, xi, F, omega), atol=1e-10 * np.linalg.norm(F) / omega)


def _separated(eps, mu, xi):
    lam_e, lam_m = eigenvalues(eps, mu, xi)
    return abs(lam_e - lam_m) > 1e-3 * abs(lam_e)


def test_field_symbol_rejects_coincident_roots():
    with pytest.raises(DegenerateError):
        field_symbol_H(np.eye(3), 2.0 * np.eye(3), [1.0, 0.5], [0.0, 1.0])


def test_field_symbol_for_parallel_data_has_no_eigen_part():
    fs = field_symbol_H(np.eye(3), np.diag([1.0, 2.0, 1.0]), [1.0, 0.5], [2.0, 1.0])
    assert fs.a == 0


@given(spd_matrices(), spd_matrices(), directions(), covectors2, st.floats(0.3, 3.0))
def test_electric_field_symbol_and_curl(eps, mu, xi, G, omega):
    chart = to_boundary_normal(HatPair(eps, mu))
    eps, mu = chart.eps_hat, chart.mu_hat
    assume(_separated(eps, mu, xi))
    fs = field_symbol_E(eps, mu, xi, G)
    np.testing.assert_allclose(fs.field[:2], G, atol=1e-10 * np.linalg.norm(G))
    C = principal_C(eps, mu, xi)
    assert abs(divergence_residual(eps, C, fs.field, xi)) <= 1e-10 * np.linalg.norm(eps) * np.linalg.norm(fs.field)
    # curl E = i omega mu H carries the opposite sign of the magnetic route
    H = -electric_from_curl(mu, xi, C, fs.field, omega)
    np.testing.assert_allclose(H[:2], admittance_principal(mu, xi, G, omega), atol=1e-10 * np.linalg.norm(G) / omega)


def _normal_data(rng):
    eps_t = rng.normal(size=(2, 2))
    eps_t = eps_t @ eps_t.T + 0.3 * np.eye(2)
    mu_t = rng.normal(size=(2, 2))
    mu_t = mu_t @ mu_t.T + 0.3 * np.eye(2)
    normal = np.array([*rng.uniform(-1.0, 1.0, 2), rng.uniform(0.5, 2.0)])
    eps = np.eye(3)
    eps[:2, :2] = eps_t
    return eps_t, mu_t, normal, eps, cometric_from_normal_data(mu_t, normal)


@pytest.mark.parametrize("seed", range(5))
def test_normal_components_match_direct_evaluation(seed):
    rng = np.random.default_rng(seed)
    eps_t, mu_t, normal, eps, mu = _normal_data(rng)
    xi = rng.normal(size=2)
    roots = normal_root_components(eps_t, mu_t, normal, xi)
    np.testing.assert_allclose(roots["eps_in_eps"], upper_root(eps, xi), atol=1e-13)
    np.testing.assert_allclose(roots["mu_in_eps"], upper_root(mu, xi), atol=1e-13)
    chart = to_boundary_normal(HatPair(eps, mu), "mu")
    np.testing.assert_allclose(roots["mu_in_mu"], upper_root(chart.mu_hat, xi), atol=1e-13)
    np.testing.assert_allclose(roots["eps_in_mu"], upper_root(chart.eps_hat, xi), atol=1e-13)

    G = rng.normal(size=2)
    chi = normal_eigen_components(eps_t, mu_t, normal, xi)
    np.testing.assert_allclose(chi["chi_mu_in_eps"], field_symbol_E(eps, mu, xi, G).eigencovector[2], atol=1e-12)
    in_mu = field_symbol_H(chart.eps_hat, chart.mu_hat, xi, G).eigencovector[2]
    np.testing.assert_allclose(chi["chi_eps_in_mu"], in_mu, atol=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_normal_electric_component(seed):
    rng = np.random.default_rng(10 + seed)
    eps_t, mu_t, normal, eps, mu = _normal_data(rng)
    xi = rng.normal(size=2)
    G = rng.normal(size=2)
    direct = field_symbol_E(eps, mu, xi, G).field[2]
    np.testing.assert_allclose(normal_E_symbol(eps_t, mu_t, normal, xi, G), direct, atol=1e-12)
    # degree zero in xi for fixed G
    np.testing.assert_allclose(normal_E_symbol(eps_t, mu_t, normal, 3.0 * xi, G), direct, atol=1e-12)


def test_normal_electric_component_for_data_along_xi():
    # G = xi kills the first term; the second is -i sqrt(det eps_t)/(sqrt(det mu_t)|xi|_eps) *(perp ^ xi)
    eps_t = np.diag([2.0, 1.0])
    mu_t = np.diag([1.0, 3.0])
    normal = np.array([0.2, -0.1, 1.5])
    xi = np.array([1.0, 1.0])
    perp = boundary_hodge(xi, eps_t)
    len_e = np.sqrt(xi @ eps_t @ xi)
    want = -1j * np.sqrt(2.0) / (np.sqrt(3.0) * len_e) * wedge2(perp, xi) * np.sqrt(3.0)
    np.testing.assert_allclose(normal_E_symbol(eps_t, mu_t, normal, xi, xi), want, atol=1e-14)
    eps = np.eye(3)
    eps[:2, :2] = eps_t
    mu = cometric_from_normal_data(mu_t, normal)
    np.testing.assert_allclose(want, field_symbol_E(eps, mu, xi, xi).field[2], atol=1e-13)


def test_boundary_cometric_used_for_admittance_is_chart_free():
    rng = np.random.default_rng(7)
    eps_t, mu_t, normal, eps, mu = _normal_data(rng)
    chart = to_boundary_normal(HatPair(eps, mu), "mu")
    np.testing.assert_allclose(boundary_cometric(chart.mu_hat), mu_t, atol=1e-13)
    xi, G = np.array([0.3, 1.0]), np.array([1.0, -0.5])
    np.testing.assert_allclose(admittance_principal(chart.mu_hat, xi, G), admittance_principal(mu, xi, G), rtol=1e-12)
