"""Parametric hypersurfaces in R^{n+1} for n in {1, 2}.

A patch is a smooth chart over a parameter rectangle together with first
and second parameter derivatives (analytic for built-ins, central
differences for custom charts).  Frames carry the orthonormalized tangent
basis, the oriented unit normal, and the second fundamental form under the
shape-operator convention X -> -D_X nu; transversal decompositions split
the ambient derivative of a transversal field xi into the affine shape
operator and the connection one-form,

    D_X xi = -S(X) + tau(X) xi.

The divergence/derivative checks at the bottom compare frame-based
right-hand sides against finite-difference left-hand sides, so the two
routes stay independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DegenerateChart, NotTransversal
from .fd import central_diff
from .norms import MinkowskiNorm

GRAM_FLOOR = 1e-12
TRANSVERSAL_FLOOR = 1e-8
PARAM_STEP = 1e-5


# --------------------------------------------------------------------------
# patches


class ParametricPatch:
    """Immersion of an n-dimensional parameter rectangle into R^{n+1}.

    chart_fn maps parameter batches (m, n) to points (m, n+1); derivative
    callbacks return (m, n, n+1) and (m, n, n, n+1).  Missing derivatives
    fall back to central finite differences.  Instances are immutable.
    """

    def __init__(self, n: int, chart_fn: Callable, domain,
                 dchart_fn: Callable | None = None,
                 d2chart_fn: Callable | None = None,
                 periodic: tuple[bool, ...] | None = None,
                 closed: bool = False,
                 orientation: float = 1.0,
                 name: str = "custom",
                 axis_insets: tuple[float, ...] | None = None,
                 fd_step: float = 1e-6):
        if n not in (1, 2):
            raise ValueError("only curve (n=1) and surface (n=2) patches are supported")
        self.n = n
        self.dim = n + 1
        self._chart_fn = chart_fn
        self._dchart_fn = dchart_fn
        self._d2chart_fn = d2chart_fn
        self.domain = np.asarray(domain, dtype=float).reshape(n, 2)
        self.periodic = tuple(periodic) if periodic is not None else (False,) * n
        self.closed = bool(closed)
        self.orientation = float(orientation)
        self.name = name
        # absolute parameter inset per axis used by sample grids (e.g. to keep
        # sample points away from coordinate poles of closed charts)
        self.axis_insets = tuple(axis_insets) if axis_insets is not None else (0.0,) * n
        self._fd_step = fd_step

    # -- chart evaluation ---------------------------------------------------

    def chart(self, P) -> np.ndarray:
        P = np.atleast_2d(np.asarray(P, dtype=float))
        return np.asarray(self._chart_fn(P), dtype=float)

    def dchart(self, P) -> np.ndarray:
        P = np.atleast_2d(np.asarray(P, dtype=float))
        if self._dchart_fn is not None:
            return np.asarray(self._dchart_fn(P), dtype=float)
        h = self._fd_step
        cols = []
        for i in range(self.n):
            dP = np.zeros_like(P)
            dP[:, i] = h
            cols.append((self.chart(P + dP) - self.chart(P - dP)) / (2.0 * h))
        return np.stack(cols, axis=1)

    def d2chart(self, P) -> np.ndarray:
        P = np.atleast_2d(np.asarray(P, dtype=float))
        if self._d2chart_fn is not None:
            return np.asarray(self._d2chart_fn(P), dtype=float)
        if self._dchart_fn is not None:
            h = self._fd_step
            rows = []
            for i in range(self.n):
                dP = np.zeros_like(P)
                dP[:, i] = h
                rows.append((self.dchart(P + dP) - self.dchart(P - dP)) / (2.0 * h))
            out = np.stack(rows, axis=1)  # (m, i, j, d)
        else:
            h = 1e-4  # second differences of the chart value
            m = P.shape[0]
            out = np.empty((m, self.n, self.n, self.dim))
            X0 = self.chart(P)
            for i in range(self.n):
                ei = np.zeros_like(P)
                ei[:, i] = h
                out[:, i, i] = (self.chart(P + ei) - 2 * X0 + self.chart(P - ei)) / h**2
                for j in range(i + 1, self.n):
                    ej = np.zeros_like(P)
                    ej[:, j] = h
                    mixed = (self.chart(P + ei + ej) - self.chart(P + ei - ej)
                             - self.chart(P - ei + ej) + self.chart(P - ei - ej)) / (4 * h**2)
                    out[:, i, j] = mixed
                    out[:, j, i] = mixed
        return 0.5 * (out + np.swapaxes(out, 1, 2))

    # -- frames ---------------------------------------------------------------

    def frames(self, P) -> "FrameBatch":
        P = np.atleast_2d(np.asarray(P, dtype=float))
        X = self.chart(P)
        T = self.dchart(P)
        return _build_frames(self, P, X, T)

    def frame_at(self, p) -> "PointFrame":
        fb = self.frames(np.asarray(p, dtype=float)[None, :])
        return fb.point(0)

    # -- sampling -------------------------------------------------------------

    def sample_grid(self, k: int, margin: float = 0.05) -> np.ndarray:
        """Interior k^n parameter grid, inset from non-periodic edges."""
        axes = []
        for i in range(self.n):
            a, b = self.domain[i]
            if self.periodic[i]:
                axes.append(a + (b - a) * (np.arange(k) + 0.5) / k)
            else:
                inset = max(margin * (b - a), self.axis_insets[i])
                axes.append(np.linspace(a + inset, b - inset, k))
        if self.n == 1:
            return axes[0][:, None]
        A, B = np.meshgrid(axes[0], axes[1], indexing="ij")
        return np.column_stack([A.ravel(), B.ravel()])

    def boundary_samples(self, k: int = 64) -> np.ndarray:
        """Parameter points on the non-periodic edges; empty for closed patches."""
        if self.closed:
            return np.empty((0, self.n))
        pts = []
        for i in range(self.n):
            if self.periodic[i]:
                continue
            a, b = self.domain[i]
            for edge in (a, b):
                if self.n == 1:
                    pts.append([[edge]])
                else:
                    j = 1 - i
                    qa, qb = self.domain[j]
                    tt = np.linspace(qa, qb, k)
                    block = np.empty((k, 2))
                    block[:, i] = edge
                    block[:, j] = tt
                    pts.append(block)
        return np.vstack(pts) if pts else np.empty((0, self.n))

    def gauge_range(self, gauge, k: int = 64) -> tuple[float, float]:
        """(min, max) of gauge over an interior sample grid."""
        vals = np.asarray(gauge.value(self.chart(self.sample_grid(k, margin=0.01))))
        return float(np.min(vals)), float(np.max(vals))

    def boundary_gauge_radius(self, gauge, k: int = 256) -> float:
        """Smallest gauge value on the patch boundary (inf for closed patches)."""
        B = self.boundary_samples(k)
        if B.shape[0] == 0:
            return math.inf
        return float(np.min(np.asarray(gauge.value(self.chart(B)))))


class FrameBatch:
    """Vectorized frame data at parameter points.

    First-order data (positions, tangents, orthonormal basis, normal,
    metric) is built eagerly; second-order data (chart second derivatives,
    second fundamental form, mean curvature) and the metric inverse are
    computed lazily on first access, so cheap integrands do not pay for
    them.
    """

    def __init__(self, patch: ParametricPatch, P, x, tangents, e, nu,
                 param_dirs, metric, sqrt_g, second=None):
        self.patch = patch
        self.P = P               # (m, n)
        self.x = x               # (m, d)
        self.tangents = tangents  # (m, n, d)
        self.e = e               # (m, n, d)
        self.nu = nu             # (m, d)
        self.param_dirs = param_dirs  # (m, n, n); e_a = sum_i C[:, i, a] T_i
        self.metric = metric     # (m, n, n)
        self.sqrt_g = sqrt_g     # (m,)
        self._second = second
        self._metric_inv = None
        self._sec_form = None
        self._mean = None

    @property
    def second(self) -> np.ndarray:
        if self._second is None:
            self._second = self.patch.d2chart(self.P)
        return self._second

    @property
    def metric_inv(self) -> np.ndarray:
        if self._metric_inv is None:
            self._metric_inv = np.linalg.inv(self.metric)
        return self._metric_inv

    @property
    def sec_form(self) -> np.ndarray:
        if self._sec_form is None:
            b = np.einsum("mija,ma->mij", self.second, self.nu)
            self._sec_form = np.einsum("mia,mij,mjb->mab",
                                       self.param_dirs, b, self.param_dirs)
        return self._sec_form

    @property
    def mean_curvature(self) -> np.ndarray:
        if self._mean is None:
            self._mean = np.trace(self.sec_form, axis1=1, axis2=2)
        return self._mean

    def point(self, i: int) -> "PointFrame":
        return PointFrame(
            patch=self.patch, p=self.P[i], x=self.x[i], tangents=self.tangents[i],
            e=self.e[i], nu=self.nu[i], param_dirs=self.param_dirs[i],
            metric=self.metric[i], metric_inv=self.metric_inv[i],
            sqrt_g=float(self.sqrt_g[i]), sec_form=self.sec_form[i],
            mean_curvature=float(self.mean_curvature[i]))


@dataclass
class PointFrame:
    patch: ParametricPatch
    p: np.ndarray
    x: np.ndarray
    tangents: np.ndarray
    e: np.ndarray
    nu: np.ndarray
    param_dirs: np.ndarray
    metric: np.ndarray
    metric_inv: np.ndarray
    sqrt_g: float
    sec_form: np.ndarray
    mean_curvature: float


def _build_frames(patch: ParametricPatch, P, X, T) -> FrameBatch:
    n, d = patch.n, patch.dim
    g = np.einsum("mia,mja->mij", T, T)
    if n == 1:
        det_g = g[:, 0, 0]
    else:
        det_g = g[:, 0, 0] * g[:, 1, 1] - g[:, 0, 1] * g[:, 1, 0]
    if np.any(det_g <= GRAM_FLOOR):
        raise DegenerateChart(
            f"Gram determinant underflow on {patch.name} (min {det_g.min():.3e})")
    sqrt_g = np.sqrt(det_g)

    if n == 1:
        t = T[:, 0, :]
        tn = np.linalg.norm(t, axis=1)
        nu = np.column_stack([t[:, 1], -t[:, 0]]) / tn[:, None]
    else:
        c = np.cross(T[:, 0, :], T[:, 1, :])
        nu = c / np.linalg.norm(c, axis=1, keepdims=True)
    nu = patch.orientation * nu

    # Gram-Schmidt with fixed ordering; C holds e-basis coefficients in the
    # coordinate-tangent basis, so C[:, i, a] is also the parameter-space
    # direction realizing e_a.
    C = np.zeros((P.shape[0], n, n))
    E = np.zeros((P.shape[0], n, d))
    t0n = np.sqrt(g[:, 0, 0])
    E[:, 0] = T[:, 0] / t0n[:, None]
    C[:, 0, 0] = 1.0 / t0n
    if n == 2:
        proj = np.einsum("ma,ma->m", T[:, 1], E[:, 0])
        w = T[:, 1] - proj[:, None] * E[:, 0]
        wn = np.linalg.norm(w, axis=1)
        E[:, 1] = w / wn[:, None]
        C[:, 0, 1] = -proj / (t0n * wn)
        C[:, 1, 1] = 1.0 / wn

    return FrameBatch(patch, P, X, T, E, nu, C, g, sqrt_g)


# --------------------------------------------------------------------------
# built-in charts


def sphere(radius: float = 1.0, center=(0.0, 0.0, 0.0)) -> ParametricPatch:
    """Round sphere, outward normal; polar angle first, azimuth second."""
    R = float(radius)
    c = np.asarray(center, dtype=float)

    def chart(P):
        th, ph = P[:, 0], P[:, 1]
        return c + R * np.column_stack(
            [np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)])

    def dchart(P):
        th, ph = P[:, 0], P[:, 1]
        Xt = R * np.column_stack(
            [np.cos(th) * np.cos(ph), np.cos(th) * np.sin(ph), -np.sin(th)])
        Xp = R * np.column_stack(
            [-np.sin(th) * np.sin(ph), np.sin(th) * np.cos(ph), np.zeros_like(th)])
        return np.stack([Xt, Xp], axis=1)

    def d2chart(P):
        th, ph = P[:, 0], P[:, 1]
        zero = np.zeros_like(th)
        Xtt = R * np.column_stack(
            [-np.sin(th) * np.cos(ph), -np.sin(th) * np.sin(ph), -np.cos(th)])
        Xtp = R * np.column_stack(
            [-np.cos(th) * np.sin(ph), np.cos(th) * np.cos(ph), zero])
        Xpp = R * np.column_stack(
            [-np.sin(th) * np.cos(ph), -np.sin(th) * np.sin(ph), zero])
        out = np.empty((P.shape[0], 2, 2, 3))
        out[:, 0, 0] = Xtt
        out[:, 0, 1] = out[:, 1, 0] = Xtp
        out[:, 1, 1] = Xpp
        return out

    return ParametricPatch(
        2, chart, [(0.0, np.pi), (0.0, 2 * np.pi)], dchart_fn=dchart,
        d2chart_fn=d2chart, periodic=(False, True), closed=True,
        orientation=1.0, name=f"sphere(r={R:g})", axis_insets=(1e-3, 0.0))


def linear_image(patch: ParametricPatch, L, name: str | None = None) -> ParametricPatch:
    """Image of a patch under an invertible linear map with det > 0."""
    L = np.asarray(L, dtype=float)
    if np.linalg.det(L) <= 0:
        raise ValueError("linear_image expects det L > 0")

    def chart(P):
        return patch.chart(P) @ L.T

    def dchart(P):
        return patch.dchart(P) @ L.T

    def d2chart(P):
        return patch.d2chart(P) @ L.T

    return ParametricPatch(
        patch.n, chart, patch.domain, dchart_fn=dchart, d2chart_fn=d2chart,
        periodic=patch.periodic, closed=patch.closed, orientation=patch.orientation,
        name=name or f"linear[{patch.name}]", axis_insets=patch.axis_insets)


def ellipsoid(semiaxes=(1.0, 1.3, 1.7)) -> ParametricPatch:
    s = np.asarray(semiaxes, dtype=float)
    out = linear_image(sphere(), np.diag(s),
                       name=f"ellipsoid({s[0]:g},{s[1]:g},{s[2]:g})")
    return out


def catenoid(v_max: float = 1.2) -> ParametricPatch:
    """Catenoid with unit neck; normal points away from the axis."""
    def chart(P):
        u, v = P[:, 0], P[:, 1]
        return np.column_stack([np.cosh(v) * np.cos(u), np.cosh(v) * np.sin(u), v])

    def dchart(P):
        u, v = P[:, 0], P[:, 1]
        Xu = np.column_stack(
            [-np.cosh(v) * np.sin(u), np.cosh(v) * np.cos(u), np.zeros_like(u)])
        Xv = np.column_stack(
            [np.sinh(v) * np.cos(u), np.sinh(v) * np.sin(u), np.ones_like(u)])
        return np.stack([Xu, Xv], axis=1)

    def d2chart(P):
        u, v = P[:, 0], P[:, 1]
        zero = np.zeros_like(u)
        Xuu = np.column_stack([-np.cosh(v) * np.cos(u), -np.cosh(v) * np.sin(u), zero])
        Xuv = np.column_stack([-np.sinh(v) * np.sin(u), np.sinh(v) * np.cos(u), zero])
        Xvv = np.column_stack([np.cosh(v) * np.cos(u), np.cosh(v) * np.sin(u), zero])
        out = np.empty((P.shape[0], 2, 2, 3))
        out[:, 0, 0] = Xuu
        out[:, 0, 1] = out[:, 1, 0] = Xuv
        out[:, 1, 1] = Xvv
        return out

    return ParametricPatch(
        2, chart, [(0.0, 2 * np.pi), (-v_max, v_max)], dchart_fn=dchart,
        d2chart_fn=d2chart, periodic=(True, False), closed=False,
        orientation=1.0, name=f"catenoid(v<={v_max:g})")


def sqrtm_spd(A) -> np.ndarray:
    """Symmetric square root of a symmetric positive definite matrix."""
    A = np.asarray(A, dtype=float)
    w, V = np.linalg.eigh(A)
    if w[0] <= 0:
        raise ValueError("matrix is not positive definite")
    return (V * np.sqrt(w)) @ V.T


def transformed_catenoid(matrix, v_max: float = 1.2) -> ParametricPatch:
    """Catenoid mapped through the square root of an SPD matrix.

    For the quadratic gauge built from the same matrix, this image is a
    critical point of the anisotropic area (the map rescales the anisotropic
    area of every surface by a constant factor), so its anisotropic mean
    curvature vanishes.
    """
    L = sqrtm_spd(matrix)
    return linear_image(catenoid(v_max=v_max), L, name=f"transformed-catenoid(v<={v_max:g})")


def hyperplane(normal=(0.0, 0.0, 1.0), origin=(0.0, 0.0, 0.0),
               extent: float = 2.0) -> ParametricPatch:
    nrm = np.asarray(normal, dtype=float)
    nrm = nrm / np.linalg.norm(nrm)
    origin = np.asarray(origin, dtype=float)
    # orthonormal in-plane basis with a x b = normal
    from .norms import _orthonormal_complement
    Q = _orthonormal_complement(nrm)
    a, bvec = Q[:, 0], Q[:, 1]
    if np.dot(np.cross(a, bvec), nrm) < 0:
        a, bvec = bvec, a

    def chart(P):
        return origin[None, :] + P[:, 0:1] * a[None, :] + P[:, 1:2] * bvec[None, :]

    def dchart(P):
        m = P.shape[0]
        out = np.empty((m, 2, 3))
        out[:, 0] = a
        out[:, 1] = bvec
        return out

    def d2chart(P):
        return np.zeros((P.shape[0], 2, 2, 3))

    return ParametricPatch(
        2, chart, [(-extent, extent), (-extent, extent)], dchart_fn=dchart,
        d2chart_fn=d2chart, name=f"hyperplane(n={tuple(np.round(nrm, 3))})")


def line(offset: float = 0.5, extent: float = 4.0) -> ParametricPatch:
    """Horizontal line y = offset in the plane, normal (0, -1)."""
    def chart(P):
        t = P[:, 0]
        return np.column_stack([t, np.full_like(t, offset)])

    def dchart(P):
        m = P.shape[0]
        out = np.zeros((m, 1, 2))
        out[:, 0, 0] = 1.0
        return out

    def d2chart(P):
        return np.zeros((P.shape[0], 1, 1, 2))

    return ParametricPatch(1, chart, [(-extent, extent)], dchart_fn=dchart,
                           d2chart_fn=d2chart, name=f"line(y={offset:g})")


def circle(radius: float = 1.0, center=(0.0, 0.0)) -> ParametricPatch:
    R = float(radius)
    c = np.asarray(center, dtype=float)

    def chart(P):
        t = P[:, 0]
        return c + R * np.column_stack([np.cos(t), np.sin(t)])

    def dchart(P):
        t = P[:, 0]
        return (R * np.column_stack([-np.sin(t), np.cos(t)]))[:, None, :]

    def d2chart(P):
        t = P[:, 0]
        return (-R * np.column_stack([np.cos(t), np.sin(t)]))[:, None, None, :]

    return ParametricPatch(1, chart, [(0.0, 2 * np.pi)], dchart_fn=dchart,
                           d2chart_fn=d2chart, periodic=(True,), closed=True,
                           orientation=1.0, name=f"circle(r={R:g})")


def graph_curve(coeffs, extent: float = 1.0) -> ParametricPatch:
    """Plane curve (t, p(t)) for a polynomial p given by coefficients."""
    c = np.asarray(coeffs, dtype=float)
    c1 = np.polynomial.polynomial.polyder(c)
    c2 = np.polynomial.polynomial.polyder(c, 2)
    pv = np.polynomial.polynomial.polyval

    def chart(P):
        t = P[:, 0]
        return np.column_stack([t, pv(t, c)])

    def dchart(P):
        t = P[:, 0]
        return np.column_stack([np.ones_like(t), pv(t, c1)])[:, None, :]

    def d2chart(P):
        t = P[:, 0]
        return np.column_stack([np.zeros_like(t), pv(t, c2)])[:, None, None, :]

    return ParametricPatch(1, chart, [(-extent, extent)], dchart_fn=dchart,
                           d2chart_fn=d2chart, name="graph-curve")


def graph_surface(coeffs, extent: float = 1.0) -> ParametricPatch:
    """Graph z = p(u, v) for a bivariate polynomial coefficient matrix."""
    C = np.atleast_2d(np.asarray(coeffs, dtype=float))
    pp = np.polynomial.polynomial
    Cu, Cv = pp.polyder(C, axis=0), pp.polyder(C, axis=1)
    Cuu, Cuv, Cvv = pp.polyder(Cu, axis=0), pp.polyder(Cu, axis=1), pp.polyder(Cv, axis=1)

    def chart(P):
        u, v = P[:, 0], P[:, 1]
        return np.column_stack([u, v, pp.polyval2d(u, v, C)])

    def dchart(P):
        u, v = P[:, 0], P[:, 1]
        one, zero = np.ones_like(u), np.zeros_like(u)
        Xu = np.column_stack([one, zero, pp.polyval2d(u, v, Cu)])
        Xv = np.column_stack([zero, one, pp.polyval2d(u, v, Cv)])
        return np.stack([Xu, Xv], axis=1)

    def d2chart(P):
        u, v = P[:, 0], P[:, 1]
        zero = np.zeros_like(u)
        out = np.empty((P.shape[0], 2, 2, 3))
        out[:, 0, 0] = np.column_stack([zero, zero, pp.polyval2d(u, v, Cuu)])
        out[:, 0, 1] = out[:, 1, 0] = np.column_stack([zero, zero, pp.polyval2d(u, v, Cuv)])
        out[:, 1, 1] = np.column_stack([zero, zero, pp.polyval2d(u, v, Cvv)])
        return out

    return ParametricPatch(2, chart, [(-extent, extent), (-extent, extent)],
                           dchart_fn=dchart, d2chart_fn=d2chart, name="graph-surface")


def enneper(scale: float = 0.8, extent: float = 1.5) -> ParametricPatch:
    """Enneper minimal patch scaled by a constant factor."""
    s = float(scale)

    def chart(P):
        u, v = P[:, 0], P[:, 1]
        return s * np.column_stack([
            u - u**3 / 3 + u * v**2,
            -v + v**3 / 3 - u**2 * v,
            u**2 - v**2])

    def dchart(P):
        u, v = P[:, 0], P[:, 1]
        Xu = s * np.column_stack([1 - u**2 + v**2, -2 * u * v, 2 * u])
        Xv = s * np.column_stack([2 * u * v, -1 + v**2 - u**2, -2 * v])
        return np.stack([Xu, Xv], axis=1)

    def d2chart(P):
        u, v = P[:, 0], P[:, 1]
        one = np.ones_like(u)
        out = np.empty((P.shape[0], 2, 2, 3))
        out[:, 0, 0] = s * np.column_stack([-2 * u, -2 * v, 2 * one])
        out[:, 0, 1] = out[:, 1, 0] = s * np.column_stack([2 * v, -2 * u, 0 * one])
        out[:, 1, 1] = s * np.column_stack([2 * u, 2 * v, -2 * one])
        return out

    return ParametricPatch(2, chart, [(-extent, extent), (-extent, extent)],
                           dchart_fn=dchart, d2chart_fn=d2chart,
                           name=f"enneper(s={s:g})")


# --------------------------------------------------------------------------
# ambient fields along a patch


class TransversalField:
    """Named ambient vector field along a patch, batch-evaluated on parameters."""

    def __init__(self, fn: Callable[[ParametricPatch, np.ndarray], np.ndarray], name: str):
        self._fn = fn
        self.name = name

    def __call__(self, patch: ParametricPatch, P: np.ndarray) -> np.ndarray:
        return np.asarray(self._fn(patch, np.atleast_2d(P)), dtype=float)


def normal_field() -> TransversalField:
    return TransversalField(lambda patch, P: patch.frames(P).nu, "normal")


def anisotropic_normal_field(norm: MinkowskiNorm) -> TransversalField:
    return TransversalField(
        lambda patch, P: np.atleast_2d(norm.grad(patch.frames(P).nu)),
        f"anisotropic[{norm.label}]")


def constant_field(vec) -> TransversalField:
    vec = np.asarray(vec, dtype=float)
    return TransversalField(
        lambda patch, P: np.broadcast_to(vec, (P.shape[0], vec.shape[0])).copy(),
        f"constant{tuple(np.round(vec, 3))}")


def position_field() -> TransversalField:
    return TransversalField(lambda patch, P: patch.chart(P), "position")


def affine_tangential(V, xi, nu) -> np.ndarray:
    """<xi, nu> V - <V, nu> xi: the xi-adapted tangential part of V."""
    V = np.asarray(V, dtype=float)
    xi = np.asarray(xi, dtype=float)
    nu = np.asarray(nu, dtype=float)
    supp = np.sum(xi * nu, axis=-1, keepdims=True)
    vn = np.sum(V * nu, axis=-1, keepdims=True)
    return supp * V - vn * xi


# --------------------------------------------------------------------------
# transversal decompositions


class EquiaffineBatch:
    def __init__(self, xi, support, shape_op, tau, affine_mean, frames):
        self.xi = xi                 # (m, d)
        self.support = support       # (m,)  <xi, nu>
        self.shape_op = shape_op     # (m, n, n), column a = components of S(e_a)
        self.tau = tau               # (m, n)
        self.affine_mean = affine_mean  # (m,) trace of the shape operator
        self.frames = frames

    @property
    def fundamental(self) -> np.ndarray:
        """h = II / <xi, nu> in the orthonormal basis (lazy; needs 2nd order)."""
        return self.frames.sec_form / self.support[:, None, None]


@dataclass
class EquiaffineFrame:
    xi: np.ndarray
    support: float
    shape_op: np.ndarray
    fundamental: np.ndarray
    tau: np.ndarray
    affine_mean: float
    frame: PointFrame


def equiaffine_batch(patch: ParametricPatch, xi_field: TransversalField, P,
                     step: float = PARAM_STEP) -> EquiaffineBatch:
    """Decompose D xi along the patch into -S + tau (x) xi at each point."""
    P = np.atleast_2d(np.asarray(P, dtype=float))
    fb = patch.frames(P)
    xi = xi_field(patch, P)
    support = np.einsum("md,md->m", xi, fb.nu)
    if np.any(np.abs(support) < TRANSVERSAL_FLOOR):
        raise NotTransversal(
            f"|<xi, nu>| below {TRANSVERSAL_FLOOR:g} for field {xi_field.name}")
    n = patch.n
    S = np.empty((P.shape[0], n, n))
    tau = np.empty((P.shape[0], n))
    for a in range(n):
        ca = fb.param_dirs[:, :, a]
        W = (xi_field(patch, P + step * ca) - xi_field(patch, P - step * ca)) / (2 * step)
        tau_a = np.einsum("md,md->m", W, fb.nu) / support
        S_ea = tau_a[:, None] * xi - W
        S[:, :, a] = np.einsum("mid,md->mi", fb.e, S_ea)
        tau[:, a] = tau_a
    return EquiaffineBatch(xi=xi, support=support, shape_op=S, tau=tau,
                           affine_mean=np.trace(S, axis1=1, axis2=2), frames=fb)


def equiaffine_frame(patch: ParametricPatch, xi_field: TransversalField, p,
                     step: float = PARAM_STEP) -> EquiaffineFrame:
    eb = equiaffine_batch(patch, xi_field, np.asarray(p, dtype=float)[None, :], step=step)
    return EquiaffineFrame(xi=eb.xi[0], support=float(eb.support[0]),
                           shape_op=eb.shape_op[0], fundamental=eb.fundamental[0],
                           tau=eb.tau[0], affine_mean=float(eb.affine_mean[0]),
                           frame=eb.frames.point(0))


def anisotropic_normal(norm: MinkowskiNorm, frame: PointFrame) -> np.ndarray:
    return np.asarray(norm.grad(frame.nu))


def anisotropic_mean_curvature_batch(norm: MinkowskiNorm, patch: ParametricPatch,
                                     P) -> np.ndarray:
    """trace of X -> -D_X(grad F(nu)) via the chain rule on the normal."""
    fb = patch.frames(np.atleast_2d(np.asarray(P, dtype=float)))
    Hf = np.asarray(norm.hess(fb.nu))
    if Hf.ndim == 2:
        Hf = Hf[None, :, :]
    M = np.einsum("mad,mde,mbe->mab", fb.e, Hf, fb.e)
    return np.einsum("mab,mab->m", fb.sec_form, M)


def anisotropic_mean_curvature(norm: MinkowskiNorm, patch: ParametricPatch, p) -> float:
    return float(anisotropic_mean_curvature_batch(norm, patch,
                                                  np.asarray(p, dtype=float)[None, :])[0])


def anisotropic_mean_curvature_fd(norm: MinkowskiNorm, patch: ParametricPatch, p,
                                  step: float = PARAM_STEP) -> float:
    """Cross-check: -div_M grad F(nu) by finite-difference surface divergence."""
    return -surface_divergence(patch, anisotropic_normal_field(norm), p, step=step)


# --------------------------------------------------------------------------
# finite-difference surface calculus


def _dirderivs(patch: ParametricPatch, frame: PointFrame, fld, step: float,
               richardson: bool = False) -> np.ndarray:
    """D_{e_a}(fld) for a batch-callable field fld(P) -> (m, ...)."""
    p0 = frame.p
    outs = []
    for a in range(patch.n):
        ca = frame.param_dirs[:, a]

        def g(t, ca=ca):
            return np.asarray(fld((p0 + t * ca)[None, :]))[0]

        outs.append(central_diff(g, 0.0, step, richardson=richardson))
    return np.asarray(outs)


def surface_divergence(patch: ParametricPatch, W, p, step: float = PARAM_STEP) -> float:
    """div_M W = sum_a <D_{e_a} W, e_a> with FD derivatives along the chart."""
    frame = patch.frame_at(p)
    dW = _dirderivs(patch, frame, lambda P: W(patch, P), step)
    return float(np.einsum("ad,ad->", dW, frame.e))


def surface_gradient(patch: ParametricPatch, f, p, step: float = PARAM_STEP) -> np.ndarray:
    """Ambient representative of the tangential gradient of a scalar field."""
    frame = patch.frame_at(p)
    df = _dirderivs(patch, frame, lambda P: f(patch, P), step)
    return np.einsum("a,ad->d", df, frame.e)


def _tangential_field(patch: ParametricPatch, xi_field: TransversalField,
                      X_field: TransversalField):
    def Y(P):
        P = np.atleast_2d(P)
        fb = patch.frames(P)
        xi = xi_field(patch, P)
        X = X_field(patch, P)
        return affine_tangential(X, xi, fb.nu)
    return Y


@dataclass
class DerivativeIdentityResult:
    """Residuals of the frame identity for D(X^{top_xi}) and its trace form."""
    frame_residual: float
    divergence_residual: float


def tangential_derivative_residuals(patch: ParametricPatch, xi_field: TransversalField,
                                    X_field: TransversalField, p,
                                    step: float = PARAM_STEP) -> DerivativeIdentityResult:
    """Compare FD derivatives of X^{top_xi} with the frame-side expansion.

    Frame identity, for an equiaffine xi:
      <D_{e_j} X^{top_xi}, e_i> = <xi,nu> <D_{e_j}X, e_i> - <X,e_i> II(xi^T, e_j)
                                  - <xi,e_i> <grad_M <X,nu>, e_j> + <X,nu> <S(e_j), e_i>
    and its trace,
      div_M X^{top_xi} = <xi,nu> div_M X + <X,nu> H_xi - <II(X^T) + grad_M <X,nu>, xi>.
    """
    eq = equiaffine_frame(patch, xi_field, p, step=step)
    fr = eq.frame
    n = patch.n
    nu, xi0 = fr.nu, eq.xi
    supp = eq.support

    dY = _dirderivs(patch, fr, _tangential_field(patch, xi_field, X_field), step)
    lhs = np.einsum("jd,id->ij", dY, fr.e)

    dX = _dirderivs(patch, fr, lambda P: X_field(patch, P), step)
    X0 = X_field(patch, fr.p[None, :])[0]
    X_nu = float(np.dot(X0, nu))
    X_tan = fr.e @ X0            # components <X, e_i>
    xi_tan = fr.e @ xi0
    sff_xi = fr.sec_form @ xi_tan   # II(xi^T, e_j) over j

    def xnu_scalar(P):
        P = np.atleast_2d(P)
        return np.einsum("md,md->m", X_field(patch, P), patch.frames(P).nu)

    grad_xnu = _dirderivs(patch, fr, xnu_scalar, step)  # (n,)

    rhs = (supp * np.einsum("jd,id->ij", dX, fr.e)
           - np.outer(X_tan, sff_xi)
           - np.outer(xi_tan, grad_xnu)
           + X_nu * eq.shape_op)
    frame_residual = float(np.max(np.abs(lhs - rhs)))

    div_lhs = float(np.trace(lhs))
    div_X = float(np.einsum("ad,ad->", dX, fr.e))
    sff_Xtop = np.einsum("ab,a,bd->d", fr.sec_form, X_tan, fr.e)
    grad_xnu_amb = np.einsum("a,ad->d", grad_xnu, fr.e)
    div_rhs = (supp * div_X + X_nu * eq.affine_mean
               - float(np.dot(sff_Xtop + grad_xnu_amb, xi0)))
    return DerivativeIdentityResult(frame_residual=frame_residual,
                                    divergence_residual=abs(div_lhs - div_rhs))


def divergence_residuals_constant_position(patch: ParametricPatch,
                                           xi_field: TransversalField, p,
                                           b=(0.3, -0.7, 0.55),
                                           step: float = PARAM_STEP) -> tuple[float, float]:
    """Residuals of div_M b^{top_xi} = <b,nu> H_xi and
    div_M x^{top_xi} = n <xi,nu> + <x,nu> H_xi."""
    eq = equiaffine_frame(patch, xi_field, p, step=step)
    fr = eq.frame
    b = np.asarray(b, dtype=float)[: patch.dim]

    div_b = _fd_div(patch, fr, _tangential_field(patch, xi_field, constant_field(b)), step)
    res_b = abs(div_b - float(np.dot(b, fr.nu)) * eq.affine_mean)

    div_x = _fd_div(patch, fr, _tangential_field(patch, xi_field, position_field()), step)
    res_x = abs(div_x - patch.n * eq.support
                - float(np.dot(fr.x, fr.nu)) * eq.affine_mean)
    return res_b, res_x


def product_rule_residual(patch: ParametricPatch, xi_field: TransversalField,
                          f_field, X_field: TransversalField, p,
                          step: float = PARAM_STEP) -> float:
    """Residual of div_M(f X^{top_xi}) = f div_M X^{top_xi}
    + <xi,nu><grad_M f, X> - <X,nu><grad_M f, xi>."""
    eq = equiaffine_frame(patch, xi_field, p, step=step)
    fr = eq.frame
    Y = _tangential_field(patch, xi_field, X_field)

    def fY(P):
        P = np.atleast_2d(P)
        return np.asarray(f_field(patch, P))[:, None] * Y(P)

    div_fY = _fd_div(patch, fr, fY, step)
    f0 = float(np.asarray(f_field(patch, fr.p[None, :]))[0])
    div_Y = _fd_div(patch, fr, Y, step)
    grad_f = np.einsum(
        "a,ad->d", _dirderivs(patch, fr, lambda P: np.asarray(f_field(patch, P)), step),
        fr.e)
    X0 = X_field(patch, fr.p[None, :])[0]
    rhs = (f0 * div_Y + eq.support * float(np.dot(grad_f, X0))
           - float(np.dot(X0, fr.nu)) * float(np.dot(grad_f, eq.xi)))
    return abs(div_fY - rhs)


def _fd_div(patch: ParametricPatch, frame: PointFrame, fld, step: float) -> float:
    dF = _dirderivs(patch, frame, fld, step)
    return float(np.einsum("ad,ad->", dF, frame.e))


def shape_products_asymmetry(eq: EquiaffineFrame) -> tuple[float, float]:
    """Asymmetry of II*S and II*S^2; both vanish for equiaffine fields."""
    II = eq.frame.sec_form
    M1 = II @ eq.shape_op
    M2 = M1 @ eq.shape_op
    return (float(np.max(np.abs(M1 - M1.T))), float(np.max(np.abs(M2 - M2.T))))


# --------------------------------------------------------------------------
# Codazzi check for the affine shape operator


def _shape_op_coord(patch: ParametricPatch, xi_field: TransversalField, P,
                    step: float) -> np.ndarray:
    """Affine shape operator components S^i_j in the coordinate basis."""
    P = np.atleast_2d(P)
    fb = patch.frames(P)
    xi = xi_field(patch, P)
    support = np.einsum("md,md->m", xi, fb.nu)
    n = patch.n
    S = np.empty((P.shape[0], n, n))
    for j in range(n):
        dP = np.zeros_like(P)
        dP[:, j] = step
        W = (xi_field(patch, P + dP) - xi_field(patch, P - dP)) / (2 * step)
        tau_j = np.einsum("md,md->m", W, fb.nu) / support
        S_Xj = tau_j[:, None] * xi - W
        # solve <S(X_j), X_k> = sum_i S^i_j g_ik
        rhs = np.einsum("md,mkd->mk", S_Xj, fb.tangents)
        S[:, :, j] = np.einsum("mik,mk->mi", fb.metric_inv, rhs)
    return S


def codazzi_residual(patch: ParametricPatch, xi_field: TransversalField, p,
                     inner_step: float = PARAM_STEP, outer_step: float = 1e-4) -> float:
    """Norm of [D^M_{e_1} S](e_2) - [D^M_{e_2} S](e_1) for the affine shape operator.

    Covariant derivatives are assembled in the coordinate frame from
    finite-differenced Christoffel symbols and a Richardson-extrapolated
    derivative of the shape-operator components.
    """
    if patch.n == 1:
        return 0.0
    p = np.asarray(p, dtype=float)
    frame = patch.frame_at(p)
    n = patch.n

    def metric(q):
        return patch.frames(np.atleast_2d(q)).metric[0]

    dg = np.array([
        central_diff(lambda t, k=k: metric(p + t * _unit(n, k)), 0.0, outer_step,
                     richardson=True)
        for k in range(n)])  # dg[k][m,l] = d_k g_{ml}
    ginv = frame.metric_inv
    # Gamma[i,k,l] = 1/2 g^{im} (d_k g_{ml} + d_l g_{mk} - d_m g_{kl})
    Gamma = 0.5 * np.einsum("im,kml->ikl", ginv, dg + np.transpose(dg, (2, 1, 0))
                            - np.transpose(dg, (1, 0, 2)))

    S0 = _shape_op_coord(patch, xi_field, p[None, :], inner_step)[0]
    dS = np.array([
        central_diff(
            lambda t, k=k: _shape_op_coord(patch, xi_field,
                                           (p + t * _unit(n, k))[None, :], inner_step)[0],
            0.0, outer_step, richardson=True)
        for k in range(n)])  # dS[k][i,j] = d_k S^i_j

    def cov(k, j):  # components of [D^M_{X_k} S](X_j)
        return (dS[k][:, j] + Gamma[:, k, :] @ S0[:, j]
                - S0 @ Gamma[:, k, j])

    res_coord = cov(0, 1) - cov(1, 0)               # components in X_i basis
    res_amb = np.einsum("i,id->d", res_coord, frame.tangents)
    det_C = np.linalg.det(frame.param_dirs)         # rescale (X_1, X_2) -> (e_1, e_2)
    return float(np.linalg.norm(res_amb) * abs(det_C))


def _unit(n: int, k: int) -> np.ndarray:
    e = np.zeros(n)
    e[k] = 1.0
    return e
