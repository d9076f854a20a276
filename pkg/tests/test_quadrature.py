import math

import numpy as np
import pytest

import wulffkit as wk
from wulffkit import surfaces as sf
from wulffkit.quadrature import (ClippedRegionRule, ParamQuadrature, integrate,
                                 integrate_clipped, integrate_with_estimate,
                                 sublevel_energy)

def one(fb):
    return np.ones(fb.x.shape[0])


def test_rule_validation():
    with pytest.raises(ValueError):
        ParamQuadrature(order=1)
    with pytest.raises(ValueError):
        ClippedRegionRule(gauge=None, s=1.0, r=0.5)
    with pytest.raises(ValueError):
        ClippedRegionRule(gauge=None, s=-0.1, r=0.5)


def test_sphere_area():
    val = integrate(sf.sphere(), one, ParamQuadrature(order=8, base_grid=32))
    assert abs(val - 4 * np.pi) / (4 * np.pi) < 1e-8


def test_circle_length():
    val = integrate(sf.circle(), one, ParamQuadrature(order=8, base_grid=16))
    assert abs(val - 2 * np.pi) < 1e-10


def test_catenoid_band_closed_form():
    # area of the band |v| <= 1 from the 1D integral of 2 pi cosh^2 v
    val = integrate(sf.catenoid(v_max=1.0), one, ParamQuadrature(order=8, base_grid=16))
    exact = 2 * np.pi * (1.0 + math.sinh(1.0) * math.cosh(1.0))
    assert abs(val - exact) / exact < 1e-12


def test_gauss_legendre_polynomial_exactness():
    # degree 2*order-1 polynomials on a flat patch integrate exactly
    plane = sf.hyperplane(extent=1.0)
    for order in (2, 4, 6):
        deg = 2 * order - 1

        def f(fb, d=deg):
            return fb.P[:, 0] ** d + fb.P[:, 1] ** (d - 1)

        val = integrate(plane, f, ParamQuadrature(order=order, base_grid=1))
        # odd powers cancel over the symmetric square; compute the even part
        exact = 0.0
        if (deg - 1) % 2 == 0:
            exact += 2.0 * (2.0 / (deg - 1 + 1))
        assert val == pytest.approx(exact, abs=1e-12)


def test_ellipsoid_area_against_refined():
    E = sf.ellipsoid((1.0, 1.3, 1.7))
    val, est = integrate_with_estimate(E, one, ParamQuadrature(order=6, base_grid=12))
    ref = integrate(E, one, ParamQuadrature(order=10, base_grid=32))
    assert abs(val - ref) <= max(est, 1e-10 * ref)


def test_clipped_disk_area():
    D = wk.MinkowskiNorm.euclidean(3).dual()
    plane = sf.hyperplane(extent=1.5)
    res = integrate_clipped(plane, one,
                            ClippedRegionRule(gauge=D, s=0.0, r=1.0, max_depth=10),
                            ParamQuadrature(order=6, base_grid=16))
    assert abs(res.value - np.pi) / np.pi < 1e-4
    assert res.error_estimate > 0


def test_clipped_chord_lengths():
    # line y = d intersected with an annulus: 2(sqrt(r^2-d^2) - sqrt(s^2-d^2))
    d, s, r = 0.5, 0.6, 1.0
    D = wk.MinkowskiNorm.euclidean(2).dual()
    L = sf.line(offset=d, extent=4.0)
    res = integrate_clipped(L, one, ClippedRegionRule(gauge=D, s=s, r=r, max_depth=20),
                            ParamQuadrature(order=6, base_grid=16))
    exact = 2 * (math.sqrt(r**2 - d**2) - math.sqrt(s**2 - d**2))
    assert abs(res.value - exact) < 1e-6


def test_clipped_elliptic_region_on_plane():
    # quadratic gauge ball cut by the z=0 plane: ellipse of area pi*a*b with
    # a = sqrt(A11), b = sqrt(A22) for the dual sublevel {x A^-1 x < 1}
    A = np.diag([2.25, 0.64, 1.0])
    F = wk.MinkowskiNorm.quadratic(A)
    plane = sf.hyperplane(extent=2.0)
    res = integrate_clipped(plane, one,
                            ClippedRegionRule(gauge=F.dual(), s=0.0, r=1.0,
                                              max_depth=9),
                            ParamQuadrature(order=6, base_grid=16))
    exact = np.pi * 1.5 * 0.8
    assert abs(res.value - exact) / exact < 1e-4


def test_region_nesting_additivity():
    D = wk.MinkowskiNorm.euclidean(3).dual()
    C = sf.catenoid(v_max=1.3)
    q = ParamQuadrature(order=6, base_grid=16)
    a = integrate_clipped(C, one, ClippedRegionRule(D, 1.2, 1.6, 8), q)
    b = integrate_clipped(C, one, ClippedRegionRule(D, 1.6, 2.0, 8), q)
    c = integrate_clipped(C, one, ClippedRegionRule(D, 1.2, 2.0, 8), q)
    tol = a.error_estimate + b.error_estimate + c.error_estimate
    assert abs(a.value + b.value - c.value) <= max(tol, 1e-10)


def test_full_cover_equals_unclipped():
    D = wk.MinkowskiNorm.euclidean(3).dual()
    C = sf.catenoid(v_max=1.3)
    q = ParamQuadrature(order=6, base_grid=16)
    clipped = integrate_clipped(C, one, ClippedRegionRule(D, 0.0, 50.0, 8), q)
    plain = integrate(C, one, q)
    assert abs(clipped.value - plain) / plain < 1e-8
    assert clipped.error_estimate == 0.0
    assert not clipped.depth_exhausted


def test_depth_exhausted_flagged():
    D = wk.MinkowskiNorm.euclidean(3).dual()
    plane = sf.hyperplane(extent=1.5)
    res = integrate_clipped(plane, one, ClippedRegionRule(D, 0.0, 1.0, 2),
                            ParamQuadrature(order=4, base_grid=4))
    assert res.depth_exhausted
    assert res.leaf_cells > 0


def test_sublevel_energy_hyperplane_scale_invariance():
    # plane through the origin: E(r)/r^n is constant for every gauge
    plane = sf.hyperplane(extent=2.2)
    for F in (wk.MinkowskiNorm.euclidean(3),
              wk.MinkowskiNorm.quadratic(np.diag([1.0, 1.0, 4.0]))):
        vals = []
        for r in (0.5, 1.0, 2.0):
            res = sublevel_energy(plane, F, r,
                                  rule=ParamQuadrature(order=6, base_grid=16),
                                  max_depth=8)
            vals.append(res.value / r**2)
        dev = (max(vals) - min(vals)) / abs(np.mean(vals))
        assert dev < 1e-4


def test_sublevel_energy_offset_line_chords():
    # E(r) = 2 sqrt(r^2 - d^2), so E(r)/r increases with r
    d = 0.5
    E = wk.MinkowskiNorm.euclidean(2)
    L = sf.line(offset=d, extent=4.0)
    q = ParamQuadrature(order=6, base_grid=16)
    norm_energy = []
    for r in (0.6, 0.8, 1.0):
        res = sublevel_energy(L, E, r, rule=q, max_depth=20)
        exact = 2 * math.sqrt(r**2 - d**2)
        assert abs(res.value - exact) < 1e-6
        norm_energy.append(res.value / r)
    assert norm_energy[0] < norm_energy[1] < norm_energy[2]


def test_sublevel_energy_rejects_nonpositive_radius():
    with pytest.raises(ValueError):
        sublevel_energy(sf.hyperplane(), wk.MinkowskiNorm.euclidean(3), 0.0)
