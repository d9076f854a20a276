import numpy as np
import pytest

import wulffkit as wk
from wulffkit import surfaces as sf
from wulffkit.errors import DegenerateChart, NotTransversal

A_MIX = np.diag([1.0, 1.0, 4.0])
F_MIX = wk.MinkowskiNorm.quadratic(A_MIX)


# ---------------------------------------------------------------- frames


def test_sphere_frame_second_form():
    fr = sf.sphere().frame_at([1.1, 0.7])
    assert np.allclose(fr.sec_form, -np.eye(2), atol=1e-9)
    assert fr.mean_curvature == pytest.approx(-2.0, abs=1e-9)


def test_frame_orthonormality():
    for patch, p in ((sf.sphere(), [0.9, 2.0]), (sf.catenoid(), [2.5, -0.7]),
                     (sf.ellipsoid((1.0, 1.3, 1.7)), [1.4, 0.3]),
                     (sf.circle(), [1.234]), (sf.line(), [0.8])):
        fr = patch.frame_at(p)
        B = np.vstack([fr.e, fr.nu[None, :]])
        assert np.max(np.abs(B @ B.T - np.eye(patch.dim))) < 1e-12


def test_catenoid_is_minimal():
    C = sf.catenoid()
    H = C.frames(C.sample_grid(9)).mean_curvature
    assert np.max(np.abs(H)) < 1e-8


def test_hyperplane_flat():
    fr = sf.hyperplane().frame_at([0.3, -0.4])
    assert np.max(np.abs(fr.sec_form)) < 1e-14


def test_circle_curvature_and_normal():
    fr = sf.circle(radius=2.0).frame_at([0.7])
    # outward normal, shape operator -D nu has curvature -1/R
    assert np.allclose(fr.nu, fr.x / 2.0, atol=1e-14)
    assert fr.sec_form[0, 0] == pytest.approx(-0.5, abs=1e-10)


def test_enneper_minimal_and_through_origin():
    En = sf.enneper(scale=0.8)
    H = En.frames(En.sample_grid(9)).mean_curvature
    assert np.max(np.abs(H)) < 1e-10
    assert np.linalg.norm(En.chart(np.zeros((1, 2)))[0]) < 1e-15


def test_graph_surface_frames_match_fd_chart():
    # analytic polynomial derivatives vs the generic FD fallback
    coeffs = [[0.0, 0.0, 0.3], [0.0, -0.2, 0.0], [0.5, 0.0, 0.0]]
    G = sf.graph_surface(coeffs, extent=1.0)
    G_fd = sf.ParametricPatch(2, G.chart, G.domain, name="fd-graph")
    p = np.array([[0.37, -0.41]])
    assert np.max(np.abs(G.dchart(p) - G_fd.dchart(p))) < 1e-9
    assert np.max(np.abs(G.d2chart(p) - G_fd.d2chart(p))) < 1e-6


def test_degenerate_chart_raises():
    bad = sf.ParametricPatch(
        2, lambda P: np.column_stack([P[:, 0], P[:, 0], np.zeros(len(P))]),
        [(0, 1), (0, 1)], name="collapsed")
    with pytest.raises(DegenerateChart):
        bad.frame_at([0.5, 0.5])


def test_transformed_catenoid_is_linear_image():
    T = sf.transformed_catenoid(A_MIX)
    C = sf.catenoid()
    P = np.array([[0.4, 0.9], [2.0, -0.5]])
    L = sf.sqrtm_spd(A_MIX)
    assert np.allclose(T.chart(P), C.chart(P) @ L.T, atol=1e-14)


# ------------------------------------------------- transversal decompositions


def test_sphere_normal_field_shape_operator():
    eq = sf.equiaffine_frame(sf.sphere(), sf.normal_field(), [1.1, 0.7])
    assert np.allclose(eq.shape_op, -np.eye(2), atol=1e-9)
    assert np.max(np.abs(eq.tau)) < 1e-10
    assert eq.affine_mean == pytest.approx(-2.0, abs=1e-9)


def test_constant_field_has_zero_shape_operator():
    eq = sf.equiaffine_frame(sf.sphere(), sf.constant_field([0.2, 0.1, 1.4]),
                             [1.1, 0.7])
    assert np.max(np.abs(eq.shape_op)) < 1e-12
    assert np.max(np.abs(eq.tau)) < 1e-12


def test_anisotropic_normal_is_equiaffine():
    for patch in (sf.sphere(), sf.ellipsoid((1.0, 1.3, 1.7)), sf.catenoid()):
        eb = sf.equiaffine_batch(patch, sf.anisotropic_normal_field(F_MIX),
                                 patch.sample_grid(5))
        assert np.max(np.abs(eb.tau)) < 1e-6


def test_transversality_guard():
    # constant field tangent to the sphere at the equator point
    with pytest.raises(NotTransversal):
        sf.equiaffine_frame(sf.sphere(), sf.constant_field([0.0, 0.0, 1.0]),
                            [np.pi / 2, 0.0])


def test_fundamental_form_support_relation():
    patch = sf.ellipsoid((1.0, 1.3, 1.7))
    eq = sf.equiaffine_frame(patch, sf.anisotropic_normal_field(F_MIX), [1.2, 0.6])
    assert np.max(np.abs(eq.fundamental * eq.support - eq.frame.sec_form)) < 1e-8


def test_weingarten_reconstruction():
    # D_{e_a} xi + S(e_a) - tau_a xi vanishes (finite-difference derivative)
    patch = sf.ellipsoid((1.0, 1.3, 1.7))
    xi = sf.anisotropic_normal_field(F_MIX)
    p = np.array([1.2, 0.6])
    eq = sf.equiaffine_frame(patch, xi, p)
    h = 1e-5
    for a in range(2):
        ca = eq.frame.param_dirs[:, a]
        W = (xi(patch, (p + h * ca)[None, :])[0]
             - xi(patch, (p - h * ca)[None, :])[0]) / (2 * h)
        S_ea = eq.frame.e.T @ eq.shape_op[:, a]
        recon = W + S_ea - eq.tau[a] * eq.xi
        assert np.max(np.abs(recon)) < 1e-6


def test_anisotropic_normal_support_euler():
    patch = sf.catenoid()
    fr = patch.frame_at([0.9, 0.4])
    nuF = sf.anisotropic_normal(F_MIX, fr)
    assert float(np.dot(nuF, fr.nu)) == pytest.approx(F_MIX.value(fr.nu), abs=1e-10)
    E = wk.MinkowskiNorm.euclidean(3)
    assert np.allclose(sf.anisotropic_normal(E, fr), fr.nu, atol=1e-14)


def test_anisotropic_normal_component_example():
    # quadratic diag(1,1,4) maps the vertical normal to (0,0,2)
    plane = sf.hyperplane(normal=(0, 0, 1))
    fr = plane.frame_at([0.0, 0.0])
    assert np.allclose(sf.anisotropic_normal(F_MIX, fr), [0.0, 0.0, 2.0], atol=1e-13)


# ------------------------------------------------------ mean curvatures


def test_anisotropic_mean_curvature_hyperplane_zero():
    plane = sf.hyperplane()
    val = sf.anisotropic_mean_curvature(F_MIX, plane, [0.3, 0.1])
    assert abs(val) < 1e-14


def test_anisotropic_mean_curvature_catenoid_euclidean():
    E = wk.MinkowskiNorm.euclidean(3)
    C = sf.catenoid()
    vals = sf.anisotropic_mean_curvature_batch(E, C, C.sample_grid(9))
    assert np.max(np.abs(vals)) < 1e-7


def test_transformed_catenoid_is_anisotropically_minimal():
    T = sf.transformed_catenoid(A_MIX)
    vals = sf.anisotropic_mean_curvature_batch(F_MIX, T, T.sample_grid(9))
    assert np.max(np.abs(vals)) < 1e-6


def test_mean_curvature_chain_rule_vs_divergence():
    patch = sf.ellipsoid((1.0, 1.3, 1.7))
    p = [1.2, 0.6]
    a = sf.anisotropic_mean_curvature(F_MIX, patch, p)
    b = sf.anisotropic_mean_curvature_fd(F_MIX, patch, p)
    assert a == pytest.approx(b, abs=1e-7)


# ------------------------------------------------------ surface calculus


def test_surface_divergence_constant_field():
    C = sf.catenoid()
    div = sf.surface_divergence(
        C, lambda pt, P: np.tile([1.0, 2.0, 3.0], (P.shape[0], 1)), [1.0, 0.4])
    assert abs(div) < 1e-8


def test_surface_divergence_position_field():
    for patch, p in ((sf.sphere(), [1.0, 0.4]), (sf.catenoid(), [2.0, 0.5]),
                     (sf.circle(), [0.9])):
        div = sf.surface_divergence(patch, lambda pt, P: pt.chart(P), p)
        assert div == pytest.approx(patch.n, abs=1e-6)


def test_surface_divergence_normal_on_sphere():
    div = sf.surface_divergence(sf.sphere(),
                                lambda pt, P: pt.frames(P).nu, [1.0, 0.4])
    assert div == pytest.approx(2.0, abs=1e-6)


def test_affine_tangential_parts():
    xi = np.array([0.3, -0.2, 1.5])
    nu = np.array([0.0, 0.0, 1.0])
    # V = xi collapses
    assert np.allclose(sf.affine_tangential(xi, xi, nu), 0.0, atol=1e-15)
    # tangent V is scaled by the support
    V = np.array([1.0, 2.0, 0.0])
    assert np.allclose(sf.affine_tangential(V, xi, nu), 1.5 * V, atol=1e-15)
    # xi = nu reduces to the Euclidean tangential projection
    W = np.array([0.5, -1.0, 2.0])
    assert np.allclose(sf.affine_tangential(W, nu, nu),
                       W - np.dot(W, nu) * nu, atol=1e-15)
    result = sf.affine_tangential(W, xi, nu)
    assert abs(np.dot(result, nu)) < 1e-12


# ---------------------------------------------- pointwise identity checks


XIS = [("normal", lambda: sf.normal_field()),
       ("anisotropic", lambda: sf.anisotropic_normal_field(F_MIX)),
       ("constant", lambda: sf.constant_field([0.3, -0.7, 0.55]))]


def _transversal_points(patch, xi_field, k=3, min_support=0.25):
    P = patch.sample_grid(k)
    fb = patch.frames(P)
    xi = xi_field(patch, P)
    supp = np.einsum("md,md->m", xi, fb.nu)
    pts = P[np.abs(supp) >= min_support]
    assert len(pts) > 0
    return pts


@pytest.mark.parametrize("xi_name,xi_maker", XIS)
def test_tangential_derivative_identity(xi_name, xi_maker):
    for patch in (sf.sphere(), sf.ellipsoid((1.0, 1.3, 1.7)), sf.catenoid()):
        xi = xi_maker()
        for p in _transversal_points(patch, xi)[:3]:
            res = sf.tangential_derivative_residuals(patch, xi, sf.position_field(), p)
            assert res.frame_residual < 1e-5
            assert res.divergence_residual < 1e-5


def test_tangential_derivative_constant_field_on_plane():
    plane = sf.hyperplane()
    xi = sf.constant_field([0.1, -0.2, 1.0])
    res = sf.tangential_derivative_residuals(plane, xi, sf.position_field(),
                                             [0.3, -0.2])
    assert res.frame_residual < 1e-8


@pytest.mark.parametrize("xi_name,xi_maker", XIS)
def test_divergence_of_constant_and_position(xi_name, xi_maker):
    for patch in (sf.sphere(), sf.ellipsoid((1.0, 1.3, 1.7)), sf.catenoid()):
        xi = xi_maker()
        for p in _transversal_points(patch, xi)[:3]:
            rb, rx = sf.divergence_residuals_constant_position(patch, xi, p)
            assert rb < 1e-5
            assert rx < 1e-5


def test_divergence_identities_sphere_arithmetic():
    # unit sphere with xi = nu: div x^{T_nu} = 0 = n * 1 + 1 * (-n)
    S = sf.sphere()
    _, rx = sf.divergence_residuals_constant_position(S, sf.normal_field(),
                                                      [1.1, 0.7])
    assert rx < 1e-8


@pytest.mark.parametrize("xi_name,xi_maker", XIS)
def test_product_rule(xi_name, xi_maker):
    c = np.array([0.2, 0.5, -0.4])

    def f_linear(patch, P):
        return patch.chart(P) @ c

    for patch in (sf.sphere(), sf.ellipsoid((1.0, 1.3, 1.7)), sf.catenoid()):
        xi = xi_maker()
        for p in _transversal_points(patch, xi)[:3]:
            res = sf.product_rule_residual(patch, xi, f_linear,
                                           sf.position_field(), p)
            assert res < 1e-5


def test_product_rule_with_gauge_weight():
    D = F_MIX.dual()

    def f_gauge(patch, P):
        return np.asarray(D.value(patch.chart(P)))

    E = sf.ellipsoid((1.0, 1.3, 1.7))
    res = sf.product_rule_residual(E, sf.anisotropic_normal_field(F_MIX),
                                   f_gauge, sf.position_field(), [1.2, 0.6])
    assert res < 1e-5


def test_shape_products_selfadjointness():
    for patch in (sf.sphere(), sf.ellipsoid((1.0, 1.3, 1.7)), sf.catenoid()):
        xi = sf.anisotropic_normal_field(F_MIX)
        for p in _transversal_points(patch, xi)[:3]:
            eq = sf.equiaffine_frame(patch, xi, p)
            s1, s2 = sf.shape_products_asymmetry(eq)
            assert s1 < 1e-6
            assert s2 < 1e-5


def test_codazzi_residual_small_for_equiaffine():
    for patch in (sf.ellipsoid((1.0, 1.3, 1.7)), sf.catenoid()):
        for xi in (sf.normal_field(), sf.anisotropic_normal_field(F_MIX)):
            assert sf.codazzi_residual(patch, xi, [0.8, 1.3]) < 1e-4


def test_codazzi_detects_non_equiaffine_field():
    wobble = sf.TransversalField(
        lambda pt, P: pt.frames(P).nu
        * (1.0 + 0.3 * np.sin(pt.chart(P)[:, 0]))[:, None], "wobble")
    assert sf.codazzi_residual(sf.ellipsoid((1.0, 1.3, 1.7)), wobble,
                               [0.8, 1.3]) > 1e-2
