"""Integral identity checks with quadrature-budgeted tolerances.

Every check produces an IdentityReport whose pass criterion is
residual <= 3 * tolerance, where the tolerance is the sum of the error
estimates of the constituent integrals.  Surfaces are never assumed
critical for the relevant energy: the sampled anisotropic (or affine) mean
curvature must stay below a threshold, otherwise the report is downgraded
to informational rather than asserted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import (BoundaryInsideRegion, GaugeZero, NotClosed, NotEquiaffine,
                     OriginNotOnSurface)
from .norms import DualNorm, MinkowskiNorm
from .quadrature import (ClippedRegionRule, ParamQuadrature, integrate_clipped,
                         integrate_with_estimate, sublevel_energy)
from .surfaces import (ParametricPatch, TransversalField, affine_tangential,
                       anisotropic_mean_curvature_batch, codazzi_residual,
                       divergence_residuals_constant_position, equiaffine_batch,
                       equiaffine_frame, hyperplane, position_field,
                       constant_field, shape_products_asymmetry,
                       surface_divergence, tangential_derivative_residuals,
                       product_rule_residual)
from .symfunc import normalized_curvature_batch

PASS_FACTOR = 3.0


@dataclass
class IdentityReport:
    name: str
    lhs: float
    rhs: float
    tolerance: float
    status: str            # "pass" | "fail" | "info"
    flags: list[str] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def _finish_report(name, lhs, rhs, tolerance, flags, metadata) -> IdentityReport:
    ok = abs(lhs - rhs) <= PASS_FACTOR * tolerance
    if flags:
        status = "info"
    else:
        status = "pass" if ok else "fail"
    return IdentityReport(name=name, lhs=lhs, rhs=rhs, tolerance=tolerance,
                          status=status, flags=flags, metadata=metadata)


def _require_boundary_outside(patch: ParametricPatch, gauge, r: float) -> float:
    bnd = patch.boundary_gauge_radius(gauge)
    if bnd <= r:
        raise BoundaryInsideRegion(
            f"patch boundary reaches gauge radius {bnd:.6g} <= r = {r:.6g}")
    return bnd


def monotonicity_identity(patch: ParametricPatch, norm: MinkowskiNorm,
                          s: float, r: float, *, dual: DualNorm | None = None,
                          rule: ParamQuadrature = ParamQuadrature(),
                          max_depth: int = 10, minimality_tol: float = 1e-5,
                          grid: int = 9) -> IdentityReport:
    """Normalized-energy difference against the annulus kernel integral.

    lhs: E(r)/r^n - E(s)/s^n with E(t) the gauge energy inside {F° < t};
    rhs: integral of <grad F°(x), grad F(nu)> <x, nu> / F°(x)^{n+1} over the
    annulus.  Equality requires vanishing anisotropic mean curvature, which
    is verified by sampling, not assumed.
    """
    if not 0.0 < s < r:
        raise ValueError("need 0 < s < r")
    dual = dual or norm.dual()
    _require_boundary_outside(patch, dual, r)

    flags = []
    maxH = float(np.max(np.abs(
        anisotropic_mean_curvature_batch(norm, patch, patch.sample_grid(grid)))))
    if maxH > minimality_tol:
        flags.append(f"not-minimal(max|H|={maxH:.3g})")

    n = patch.n
    Er = sublevel_energy(patch, norm, r, dual=dual, rule=rule, max_depth=max_depth)
    Es = sublevel_energy(patch, norm, s, dual=dual, rule=rule, max_depth=max_depth)
    lhs = Er.value / r**n - Es.value / s**n
    tol = Er.error_estimate / r**n + Es.error_estimate / s**n

    def kernel(fb):
        gx = np.atleast_2d(dual.grad(fb.x))
        gn = np.atleast_2d(norm.grad(fb.nu))
        xn = np.einsum("md,md->m", fb.x, fb.nu)
        phi = np.asarray(dual.value(fb.x))
        return np.einsum("md,md->m", gx, gn) * xn / phi ** (n + 1)

    rhs_res = integrate_clipped(
        patch, kernel, ClippedRegionRule(gauge=dual, s=s, r=r, max_depth=max_depth),
        rule)
    tol += rhs_res.error_estimate + 1e-14 * (abs(lhs) + 1.0)
    return _finish_report(
        "monotonicity", lhs, rhs_res.value, tol, flags,
        {"surface": patch.name, "norm": norm.label, "s": s, "r": r,
         "max_abs_H": maxH, "E_r": Er.value, "E_s": Es.value,
         "depth": max_depth})


def equiaffine_identity(patch: ParametricPatch, xi_field: TransversalField,
                        gauge, s: float, r: float, *,
                        rule: ParamQuadrature = ParamQuadrature(),
                        max_depth: int = 10, mean_tol: float = 1e-5,
                        grid: int = 9) -> IdentityReport:
    """Transversal-density version of the monotonicity identity.

    lhs densities use <xi, nu>; the rhs kernel is
    <x, nu> <grad phi(x), xi> / phi(x)^{n+1}.  Requires sampled affine mean
    curvature below mean_tol for an asserted verdict.
    """
    if not 0.0 < s < r:
        raise ValueError("need 0 < s < r")
    _require_boundary_outside(patch, gauge, r)

    flags = []
    eb = equiaffine_batch(patch, xi_field, patch.sample_grid(grid))
    maxH = float(np.max(np.abs(eb.affine_mean)))
    if maxH > mean_tol:
        flags.append(f"not-affine-minimal(max|H|={maxH:.3g})")

    n = patch.n

    def density(fb):
        xi = xi_field(patch, fb.P)
        return np.einsum("md,md->m", xi, fb.nu)

    def weighted(t: float):
        return integrate_clipped(
            patch, density, ClippedRegionRule(gauge=gauge, s=0.0, r=t,
                                              max_depth=max_depth), rule)

    Ir, Is = weighted(r), weighted(s)
    lhs = Ir.value / r**n - Is.value / s**n
    tol = Ir.error_estimate / r**n + Is.error_estimate / s**n

    def kernel(fb):
        xi = xi_field(patch, fb.P)
        gx = np.atleast_2d(gauge.grad(fb.x))
        xn = np.einsum("md,md->m", fb.x, fb.nu)
        phi = np.asarray(gauge.value(fb.x))
        return xn * np.einsum("md,md->m", gx, xi) / phi ** (n + 1)

    rhs_res = integrate_clipped(
        patch, kernel, ClippedRegionRule(gauge=gauge, s=s, r=r, max_depth=max_depth),
        rule)
    tol += rhs_res.error_estimate + 1e-14 * (abs(lhs) + 1.0)
    return _finish_report(
        "equiaffine-monotonicity", lhs, rhs_res.value, tol, flags,
        {"surface": patch.name, "xi": xi_field.name, "s": s, "r": r,
         "max_abs_H_xi": maxH, "depth": max_depth})


def pointwise_divergence_residual(patch: ParametricPatch, xi_field: TransversalField,
                                  gauge, p, step: float = 1e-5) -> float:
    """Residual of div_M [x^{top_xi} / (n phi^n)] against its closed form.

    The closed form keeps the affine-mean-curvature term,
      <x,nu><grad phi(x), xi>/phi^{n+1} + <x,nu> H_xi / (n phi^n),
    so the check is valid on non-minimal surfaces as well.
    """
    eq = equiaffine_frame(patch, xi_field, p, step=step)
    fr = eq.frame
    n = patch.n
    phi0 = float(gauge.value(fr.x))
    if phi0 <= 1e-12:
        raise GaugeZero("gauge vanishes at the evaluation point")

    def V(patch_, P):
        P = np.atleast_2d(P)
        fb = patch_.frames(P)
        xi = xi_field(patch_, P)
        xt = affine_tangential(fb.x, xi, fb.nu)
        phi = np.asarray(gauge.value(fb.x))
        return xt / (n * phi**n)[:, None]

    lhs = surface_divergence(patch, V, p, step=step)
    xn = float(np.dot(fr.x, fr.nu))
    gp = np.asarray(gauge.grad(fr.x))
    rhs = (xn * float(np.dot(gp, eq.xi)) / phi0 ** (n + 1)
           + xn * eq.affine_mean / (n * phi0**n))
    return abs(lhs - rhs)


@dataclass
class CorollaryReport:
    energy: float
    bound: float
    section_measure: float
    ratio: float
    tolerance: float          # relative, from the quadrature estimates
    flags: list[str]
    metadata: dict

    @property
    def equality_within(self) -> float:
        return abs(self.ratio - 1.0)

    @property
    def strictly_above(self) -> bool:
        return self.ratio > 1.0 + 5.0 * self.tolerance


def _locate_origin(patch: ParametricPatch, origin_param, grid: int) -> np.ndarray:
    if origin_param is not None:
        p0 = np.asarray(origin_param, dtype=float)
    else:
        G = patch.sample_grid(max(grid, 17))
        d2 = np.sum(patch.chart(G) ** 2, axis=1)
        p0 = G[int(np.argmin(d2))]
        res = minimize(lambda q: float(np.sum(patch.chart(q[None, :])[0] ** 2)),
                       p0, method="Nelder-Mead",
                       options={"xatol": 1e-14, "fatol": 1e-28, "maxiter": 4000})
        p0 = res.x
    x0 = patch.chart(p0[None, :])[0]
    if np.linalg.norm(x0) > 1e-8:
        raise OriginNotOnSurface(
            f"nearest surface point to the origin is at distance {np.linalg.norm(x0):.3g}")
    return p0


def corollary_lower_bound(patch: ParametricPatch, norm: MinkowskiNorm, *,
                          dual: DualNorm | None = None,
                          rule: ParamQuadrature = ParamQuadrature(),
                          max_depth: int = 10, grid: int = 9,
                          minimality_tol: float = 1e-5,
                          origin_param=None) -> CorollaryReport:
    """Energy of the patch inside the unit dual ball against the central
    tangent-section bound F(nu(0)) * |{F° < 1} ∩ T_0 M|.

    The section measure is computed with the same clipped quadrature on a
    flat patch spanning the tangent space at the origin.
    """
    dual = dual or norm.dual()
    p0 = _locate_origin(patch, origin_param, grid)
    bnd = patch.boundary_gauge_radius(dual)
    if bnd < 1.0 - 1e-9:
        raise BoundaryInsideRegion(
            f"patch boundary enters the unit gauge ball (min gauge {bnd:.6g})")

    flags = []
    maxH = float(np.max(np.abs(
        anisotropic_mean_curvature_batch(norm, patch, patch.sample_grid(grid)))))
    if maxH > minimality_tol:
        flags.append(f"not-minimal(max|H|={maxH:.3g})")

    energy = integrate_clipped(
        patch, lambda fb: np.asarray(norm.value(fb.nu)),
        ClippedRegionRule(gauge=dual, s=0.0, r=1.0, max_depth=max_depth), rule)

    fr0 = patch.frame_at(p0)
    F0 = float(norm.value(fr0.nu))
    section_patch = _tangent_section_patch(patch, fr0, dual)
    section = integrate_clipped(
        section_patch, lambda fb: np.ones(fb.x.shape[0]),
        ClippedRegionRule(gauge=dual, s=0.0, r=1.0, max_depth=max_depth), rule)

    bound = F0 * section.value
    ratio = energy.value / bound
    rel_tol = (energy.error_estimate + F0 * section.error_estimate) / bound
    return CorollaryReport(
        energy=energy.value, bound=bound, section_measure=section.value,
        ratio=ratio, tolerance=rel_tol, flags=flags,
        metadata={"surface": patch.name, "norm": norm.label, "origin_param": p0,
                  "max_abs_H": maxH, "normal_at_origin": fr0.nu})


def _tangent_section_patch(patch: ParametricPatch, fr0, dual) -> ParametricPatch:
    """Flat patch spanning T_0 M, sized to contain the unit dual ball section."""
    if patch.n == 2:
        plane = hyperplane(normal=fr0.nu, origin=np.zeros(3), extent=1.0)
        ang = np.linspace(0.0, 2 * np.pi, 256, endpoint=False)
        T = plane.dchart(np.zeros((1, 2)))[0]
        dirs = np.outer(np.cos(ang), T[0]) + np.outer(np.sin(ang), T[1])
        rho = 1.0 / np.asarray(dual.value(dirs))
        extent = 1.05 * float(np.max(rho))
        return hyperplane(normal=fr0.nu, origin=np.zeros(3), extent=extent)
    # n == 1: the tangent line through the origin
    t = fr0.e[0]
    rho = max(1.0 / float(dual.value(t)), 1.0 / float(dual.value(-t)))
    extent = 1.05 * rho

    def chart(P):
        return P[:, 0:1] * t[None, :]

    def dchart(P):
        out = np.empty((P.shape[0], 1, 2))
        out[:, 0] = t
        return out

    def d2chart(P):
        return np.zeros((P.shape[0], 1, 1, 2))

    return ParametricPatch(1, chart, [(-extent, extent)], dchart_fn=dchart,
                           d2chart_fn=d2chart, name="tangent-line")


def minkowski_formula(patch: ParametricPatch, xi_field: TransversalField, k: int, *,
                      rule: ParamQuadrature = ParamQuadrature(),
                      tau_tol: float = 1e-5, grid: int = 9) -> IdentityReport:
    """Closed-surface pairing of normalized curvature orders k and k+1:

        integral <xi, nu> Hk~  =  - integral <x, nu> H(k+1)~.
    """
    if not patch.closed:
        raise NotClosed(f"{patch.name} is not closed")
    n = patch.n
    if not 0 <= k <= n - 1:
        raise ValueError(f"k must lie in 0..{n - 1}")
    eb = equiaffine_batch(patch, xi_field, patch.sample_grid(grid))
    max_tau = float(np.max(np.abs(eb.tau)))
    if max_tau > tau_tol:
        raise NotEquiaffine(f"max |tau| = {max_tau:.3g} exceeds {tau_tol:g}")

    def lhs_f(fb):
        e = equiaffine_batch(patch, xi_field, fb.P)
        return e.support * normalized_curvature_batch(e.shape_op, k)

    def rhs_f(fb):
        e = equiaffine_batch(patch, xi_field, fb.P)
        xn = np.einsum("md,md->m", fb.x, fb.nu)
        return -xn * normalized_curvature_batch(e.shape_op, k + 1)

    lhs, est_l = integrate_with_estimate(patch, lhs_f, rule)
    rhs, est_r = integrate_with_estimate(patch, rhs_f, rule)
    # grid refinement cannot see the finite-difference bias of the shape
    # operator (~1e-10 relative); give the tolerance that floor
    tol = est_l + est_r + 1e-9 * (abs(lhs) + abs(rhs) + 1.0)
    return _finish_report(
        f"minkowski-k{k}", lhs, rhs, tol, [],
        {"surface": patch.name, "xi": xi_field.name, "k": k, "max_tau": max_tau})


@dataclass
class MonotonicityScan:
    radii: np.ndarray
    normalized: np.ndarray       # E(r_i) / r_i^n
    estimates: np.ndarray        # normalized error estimates
    reports: list[IdentityReport]  # one identity report per adjacent annulus

    def non_decreasing(self, slack_factor: float = PASS_FACTOR) -> bool:
        slack = slack_factor * (self.estimates[1:] + self.estimates[:-1])
        return bool(np.all(np.diff(self.normalized) >= -slack))

    def max_relative_deviation(self) -> float:
        mean = float(np.mean(self.normalized))
        return float(np.max(np.abs(self.normalized - mean)) / abs(mean))


def monotonicity_scan(patch: ParametricPatch, norm: MinkowskiNorm, radii, *,
                      dual: DualNorm | None = None,
                      rule: ParamQuadrature = ParamQuadrature(),
                      max_depth: int = 10, minimality_tol: float = 1e-5,
                      grid: int = 9) -> MonotonicityScan:
    """Normalized energies at each radius plus identity reports per annulus."""
    radii = np.asarray(radii, dtype=float)
    if radii.ndim != 1 or radii.size < 2 or np.any(np.diff(radii) <= 0):
        raise ValueError("radii must be strictly increasing with length >= 2")
    dual = dual or norm.dual()
    n = patch.n
    energies, estimates = [], []
    for r in radii:
        res = sublevel_energy(patch, norm, float(r), dual=dual, rule=rule,
                              max_depth=max_depth)
        energies.append(res.value / r**n)
        estimates.append(res.error_estimate / r**n)
    reports = [
        monotonicity_identity(patch, norm, float(radii[i]), float(radii[i + 1]),
                              dual=dual, rule=rule, max_depth=max_depth,
                              minimality_tol=minimality_tol, grid=grid)
        for i in range(radii.size - 1)]
    return MonotonicityScan(radii=radii, normalized=np.asarray(energies),
                            estimates=np.asarray(estimates), reports=reports)


def geometric_radii(patch: ParametricPatch, gauge, count: int = 8,
                    inner_factor: float = 1.05, outer_factor: float = 0.98) -> np.ndarray:
    """Geometrically spaced radii between the surface's smallest gauge value
    and the boundary gauge radius."""
    rmin, _ = patch.gauge_range(gauge)
    rbnd = patch.boundary_gauge_radius(gauge)
    if not math.isfinite(rbnd):
        _, rbnd = patch.gauge_range(gauge)
    lo, hi = inner_factor * rmin, outer_factor * rbnd
    if lo >= hi:
        raise ValueError("patch has no usable annulus for a radii scan")
    return np.geomspace(lo, hi, count)


def frame_identity_suite(patch: ParametricPatch, xi_field: TransversalField, *,
                         grid: int = 9, min_support: float = 0.05,
                         step: float = 1e-5,
                         test_vector=(0.3, -0.7, 0.55),
                         test_covector=(0.2, 0.5, -0.4)) -> dict:
    """Max residuals of the pointwise frame identities over a parameter grid.

    Grid points where |<xi, nu>| < min_support are skipped: the transversal
    decomposition is singular there and the identities do not apply.
    """
    P = patch.sample_grid(grid)
    fb = patch.frames(P)
    xi = xi_field(patch, P)
    supp = np.einsum("md,md->m", xi, fb.nu)
    kept = P[np.abs(supp) >= min_support]
    if kept.shape[0] == 0:
        raise NotEquiaffine("no grid point is safely transversal")

    b = np.asarray(test_vector, dtype=float)[: patch.dim]
    c = np.asarray(test_covector, dtype=float)[: patch.dim]
    X_const = constant_field(b)
    X_pos = position_field()

    def f_linear(patch_, Q):
        return patch_.chart(Q) @ c

    out = {"grid_points": int(P.shape[0]), "kept_points": int(kept.shape[0]),
           "tangential_derivative": 0.0, "tangential_divergence": 0.0,
           "div_constant": 0.0, "div_position": 0.0, "product_rule": 0.0,
           "shape_sym_1": 0.0, "shape_sym_2": 0.0, "codazzi": 0.0}
    for p in kept:
        r1 = tangential_derivative_residuals(patch, xi_field, X_pos, p, step=step)
        r2 = tangential_derivative_residuals(patch, xi_field, X_const, p, step=step)
        out["tangential_derivative"] = max(out["tangential_derivative"],
                                           r1.frame_residual, r2.frame_residual)
        out["tangential_divergence"] = max(out["tangential_divergence"],
                                           r1.divergence_residual, r2.divergence_residual)
        rb, rx = divergence_residuals_constant_position(patch, xi_field, p, b=b, step=step)
        out["div_constant"] = max(out["div_constant"], rb)
        out["div_position"] = max(out["div_position"], rx)
        out["product_rule"] = max(out["product_rule"],
                                  product_rule_residual(patch, xi_field, f_linear,
                                                        X_pos, p, step=step))
        eq = equiaffine_frame(patch, xi_field, p, step=step)
        s1, s2 = shape_products_asymmetry(eq)
        out["shape_sym_1"] = max(out["shape_sym_1"], s1)
        out["shape_sym_2"] = max(out["shape_sym_2"], s2)
        out["codazzi"] = max(out["codazzi"],
                             codazzi_residual(patch, xi_field, p, inner_step=step))
    return out
