"""Sign agreement between gauge gradients and dual-gauge gradients.

For a gauge F and its dual F°, condition S asks that
sgn <grad F(u), grad F°(v)> = sgn <u, v> for all nonzero u, v.  Quadratic
gauges satisfy the stronger pairing identity
<grad F(u), grad F°(v)> = <u, v> / (F(u) F°(v)); its residual is reported
per pair so that non-quadratic gauges can be separated quantitatively.

Sign classification uses a dead band: |x| < eps_sign counts as sign 0.
The condition itself is exact, so the checker tests it away from the
measure-zero orthogonality set and separately requires a near-zero pairing
on near-orthogonal samples (this tolerance semantics is a choice of this
toolkit and is recorded in the verdict metadata).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc

from .errors import ZeroDirection
from .norms import DualNorm, MinkowskiNorm, ZERO_FLOOR

EPS_SIGN = 1e-8
DELTA_ZERO = 1e-6


def deadband_sign(x: float, eps: float = EPS_SIGN) -> int:
    if abs(x) < eps:
        return 0
    return 1 if x > 0 else -1


@dataclass(frozen=True)
class PairReport:
    """Pairing diagnostics for one direction pair (u, v)."""
    u: np.ndarray
    v: np.ndarray
    lhs: float                 # <grad F(u), grad F°(v)>
    rhs_sign_ref: float        # <u, v>
    fk_residual: float         # lhs - <u,v>/(F(u) F°(v))
    eps_sign: float = EPS_SIGN

    @property
    def lhs_sign(self) -> int:
        return deadband_sign(self.lhs, self.eps_sign)

    @property
    def rhs_sign(self) -> int:
        return deadband_sign(self.rhs_sign_ref, self.eps_sign)

    @property
    def margin(self) -> float:
        """Positive when the pair is compatible with the sign condition."""
        if abs(self.rhs_sign_ref) >= self.eps_sign:
            return self.lhs * (1.0 if self.rhs_sign_ref > 0 else -1.0)
        return DELTA_ZERO - abs(self.lhs)


@dataclass
class ConditionSVerdict:
    passed: bool
    worst: PairReport
    samples: int
    eps_sign: float
    delta_zero: float
    max_fk_residual: float
    min_margin: float
    deadband_pairs: int
    metadata: dict = field(default_factory=dict)


def unit_pair_samples(dim: int, count: int, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Low-discrepancy (Halton) direction pairs on S^{dim-1} x S^{dim-1}."""
    if dim == 2:
        pts = qmc.Halton(d=2, scramble=True, seed=seed).random(count)
        a, b = 2 * np.pi * pts[:, 0], 2 * np.pi * pts[:, 1]
        U = np.column_stack([np.cos(a), np.sin(a)])
        V = np.column_stack([np.cos(b), np.sin(b)])
        return U, V
    if dim == 3:
        pts = qmc.Halton(d=4, scramble=True, seed=seed).random(count)

        def sphere(z01, phi01):
            z = 1.0 - 2.0 * z01
            phi = 2 * np.pi * phi01
            rho = np.sqrt(np.maximum(0.0, 1.0 - z * z))
            return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])

        return sphere(pts[:, 0], pts[:, 1]), sphere(pts[:, 2], pts[:, 3])
    rng = np.random.default_rng(seed)
    U = rng.standard_normal((count, dim))
    V = rng.standard_normal((count, dim))
    return (U / np.linalg.norm(U, axis=1, keepdims=True),
            V / np.linalg.norm(V, axis=1, keepdims=True))


def pair_report(norm: MinkowskiNorm, u, v, dual: DualNorm | None = None,
                eps_sign: float = EPS_SIGN) -> PairReport:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if min(np.linalg.norm(u), np.linalg.norm(v)) < ZERO_FLOOR:
        raise ZeroDirection("pair contains a zero direction")
    dual = dual or norm.dual()
    gu = norm.grad(u)
    gv = dual.grad(v)
    lhs = float(np.dot(gu, gv))
    rhs = float(np.dot(u, v))
    fk = lhs - rhs / (norm.value(u) * dual.value(v))
    return PairReport(u=u, v=v, lhs=lhs, rhs_sign_ref=rhs, fk_residual=fk,
                      eps_sign=eps_sign)


def _pair_arrays(norm: MinkowskiNorm, dual: DualNorm, U: np.ndarray, V: np.ndarray):
    """lhs, rhs, fk arrays for sample batches (vectorized for closed duals)."""
    GU = np.asarray(norm.grad(U))
    if dual.mode == "closed":
        GV = np.asarray(dual.grad(V))
        FV = np.asarray(dual.value(V))
    else:
        pairs = [dual.eval_with_maximizer(row) for row in V]
        FV = np.array([p[0] for p in pairs])
        GV = np.array([p[1] for p in pairs])
    lhs = np.einsum("mi,mi->m", GU, GV)
    rhs = np.einsum("mi,mi->m", U, V)
    fk = lhs - rhs / (np.asarray(norm.value(U)) * FV)
    return lhs, rhs, fk


def check_condition_s(norm: MinkowskiNorm, sample_count: int = 10_000,
                      eps_sign: float = EPS_SIGN, delta_zero: float = DELTA_ZERO,
                      seed: int = 0, dual: DualNorm | None = None) -> ConditionSVerdict:
    """Scan quasi-random unit pairs for sign-condition violations.

    A pair with |<u,v>| >= eps_sign must have <grad F(u), grad F°(v)> of the
    same strict sign; a near-orthogonal pair must have |pairing| < delta_zero.
    """
    if sample_count < 1:
        raise ValueError("sample_count must be >= 1")
    dual = dual or norm.dual()
    U, V = unit_pair_samples(norm.dim, sample_count, seed=seed)
    lhs, rhs, fk = _pair_arrays(norm, dual, U, V)

    sgn = np.where(rhs > 0, 1.0, -1.0)
    decisive = np.abs(rhs) >= eps_sign
    margin = np.where(decisive, lhs * sgn, delta_zero - np.abs(lhs))
    worst_i = int(np.argmin(margin))
    worst = PairReport(u=U[worst_i], v=V[worst_i], lhs=float(lhs[worst_i]),
                       rhs_sign_ref=float(rhs[worst_i]),
                       fk_residual=float(fk[worst_i]), eps_sign=eps_sign)
    passed = bool(np.all(margin > 0.0))
    return ConditionSVerdict(
        passed=passed, worst=worst, samples=sample_count, eps_sign=eps_sign,
        delta_zero=delta_zero, max_fk_residual=float(np.max(fk)),
        min_margin=float(np.min(margin)), deadband_pairs=int(np.sum(~decisive)),
        metadata={"seed": seed, "norm": norm.label,
                  "sign_semantics": "dead-band classification, see module docstring"})


def worst_pairs(norm: MinkowskiNorm, sample_count: int = 10_000, k: int = 10,
                seed: int = 0, dual: DualNorm | None = None,
                eps_sign: float = EPS_SIGN) -> list[PairReport]:
    """The k sampled pairs with the smallest sign-condition margin."""
    dual = dual or norm.dual()
    U, V = unit_pair_samples(norm.dim, sample_count, seed=seed)
    lhs, rhs, fk = _pair_arrays(norm, dual, U, V)
    sgn = np.where(rhs > 0, 1.0, -1.0)
    decisive = np.abs(rhs) >= eps_sign
    margin = np.where(decisive, lhs * sgn, DELTA_ZERO - np.abs(lhs))
    order = np.argsort(margin)[:k]
    return [PairReport(u=U[i], v=V[i], lhs=float(lhs[i]), rhs_sign_ref=float(rhs[i]),
                       fk_residual=float(fk[i]), eps_sign=eps_sign) for i in order]


@dataclass
class ViolationSearchResult:
    worst: PairReport
    objective: float           # min of lhs * sgn(<u,v>); negative => violated
    converged: bool
    starts: int


def _angles_to_unit(angles: np.ndarray, dim: int) -> np.ndarray:
    if dim == 2:
        return np.array([np.cos(angles[0]), np.sin(angles[0])])
    theta, phi = angles
    return np.array([np.sin(theta) * np.cos(phi),
                     np.sin(theta) * np.sin(phi),
                     np.cos(theta)])


def search_violation(norm: MinkowskiNorm, n_starts: int = 12, seed: int = 0,
                     eps_sign: float = EPS_SIGN, dual: DualNorm | None = None,
                     scan_count: int = 2048) -> ViolationSearchResult:
    """Multi-start descent on lhs * sgn(<u,v>) over non-orthogonal pairs.

    A negative optimum certifies a sign-condition violation; the search is
    local, so a non-negative optimum is evidence, not proof.
    """
    if norm.dim not in (2, 3):
        raise ValueError("violation search is implemented for d in {2, 3}")
    dual = dual or norm.dual()
    k_ang = 1 if norm.dim == 2 else 2

    def objective(x: np.ndarray) -> float:
        u = _angles_to_unit(x[:k_ang], norm.dim)
        v = _angles_to_unit(x[k_ang:], norm.dim)
        rhs = float(np.dot(u, v))
        if abs(rhs) < eps_sign:
            return 1e3
        lhs = float(np.dot(norm.grad(u), dual.grad(v)))
        return lhs * (1.0 if rhs > 0 else -1.0)

    # seed starts with the worst pairs from a coarse scan plus random angles
    starts = []
    for rep in worst_pairs(norm, scan_count, k=max(2, n_starts // 2), seed=seed,
                           dual=dual, eps_sign=eps_sign):
        starts.append(np.concatenate([_unit_to_angles(rep.u), _unit_to_angles(rep.v)]))
    rng = np.random.default_rng(seed)
    while len(starts) < n_starts:
        starts.append(rng.uniform(0, 2 * np.pi, size=2 * k_ang))

    best_x, best_f, any_ok = None, np.inf, False
    for x0 in starts:
        res = minimize(objective, x0, method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 2000})
        any_ok = any_ok or bool(res.success)
        if res.fun < best_f:
            best_f, best_x = float(res.fun), res.x
    u = _angles_to_unit(best_x[:k_ang], norm.dim)
    v = _angles_to_unit(best_x[k_ang:], norm.dim)
    return ViolationSearchResult(
        worst=pair_report(norm, u, v, dual=dual, eps_sign=eps_sign),
        objective=best_f, converged=any_ok, starts=len(starts))


def _unit_to_angles(u: np.ndarray) -> np.ndarray:
    if u.shape[0] == 2:
        return np.array([np.arctan2(u[1], u[0])])
    return np.array([np.arccos(np.clip(u[2], -1.0, 1.0)), np.arctan2(u[1], u[0])])
