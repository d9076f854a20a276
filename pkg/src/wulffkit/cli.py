"""Scenario-driven command line front end.

A scenario is a single JSON document declaring norms, surfaces, and a list
of checks; the runner executes every check, prints a one-line verdict per
check, writes one CSV per check family (header comment "# wulffkit-report
v1"), and emits a gnuplot script per monotonicity scan.  Exit codes:
0 all asserted checks passed, 1 at least one check failed or errored,
2 configuration error.

Determinism contract: same build + same config => byte-identical CSV
output.  All randomness is seeded from the config (overridable with
--seed), floats are serialized with shortest round-trip repr, and results
are emitted in declaration order regardless of worker completion order.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from . import condition_s as cs
from . import surfaces as sf
from . import symfunc as sym
from . import verify as vf
from .errors import ConfigError, WulffkitError
from .norms import MinkowskiNorm
from .quadrature import ParamQuadrature

CSV_HEADER = "# wulffkit-report v1"

NORM_FAMILIES = {
    "euclidean": "dim",
    "quadratic": "matrix (row-major list or nested rows, symmetric positive definite)",
    "quartic-regularized": "dim, eps (smoothed quartic gauge)",
}

SURFACE_KINDS = {
    "hyperplane": "normal, origin, extent",
    "sphere": "radius, center",
    "ellipsoid": "semiaxes",
    "catenoid": "v_max",
    "transformed-catenoid": "matrix (SPD; surface is sqrt(matrix) * catenoid), v_max",
    "line": "offset, extent",
    "circle": "radius, center",
    "graph": "coeffs (poly coefficients; nested rows give a graph surface), extent",
    "enneper": "scale, extent",
}

CHECK_KINDS = (
    "norm-identities", "condition-s", "lemmas", "monotonicity",
    "equiaffine", "corollary", "minkowski", "symfunc",
)


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, np.ndarray):
        return " ".join(repr(float(v)) for v in x.ravel())
    return str(x)


def build_norm(spec: dict, name: str) -> MinkowskiNorm:
    family = spec.get("family")
    if family == "euclidean":
        return MinkowskiNorm.euclidean(int(spec.get("dim", 3)))
    if family == "quadratic":
        matrix = np.asarray(spec["matrix"], dtype=float)
        if matrix.ndim == 1:
            d = int(round(matrix.size ** 0.5))
            matrix = matrix.reshape(d, d)
        norm = MinkowskiNorm.quadratic(matrix)
        norm.label = name
        return norm
    if family == "quartic-regularized":
        norm = MinkowskiNorm.quartic(int(spec.get("dim", 2)),
                                     eps=float(spec.get("eps", 0.05)))
        norm.label = name
        return norm
    raise ConfigError(f"norm {name!r}: unknown family {family!r}")


def build_surface(spec: dict, name: str) -> sf.ParametricPatch:
    kind = spec.get("kind")
    if kind == "hyperplane":
        return sf.hyperplane(normal=spec.get("normal", (0, 0, 1)),
                             origin=spec.get("origin", (0, 0, 0)),
                             extent=float(spec.get("extent", 2.0)))
    if kind == "sphere":
        return sf.sphere(radius=float(spec.get("radius", 1.0)),
                         center=spec.get("center", (0, 0, 0)))
    if kind == "ellipsoid":
        return sf.ellipsoid(spec.get("semiaxes", (1.0, 1.3, 1.7)))
    if kind == "catenoid":
        return sf.catenoid(v_max=float(spec.get("v_max", 1.2)))
    if kind == "transformed-catenoid":
        matrix = np.asarray(spec["matrix"], dtype=float)
        if matrix.ndim == 1:
            d = int(round(matrix.size ** 0.5))
            matrix = matrix.reshape(d, d)
        return sf.transformed_catenoid(matrix, v_max=float(spec.get("v_max", 1.2)))
    if kind == "line":
        return sf.line(offset=float(spec.get("offset", 0.5)),
                       extent=float(spec.get("extent", 4.0)))
    if kind == "circle":
        return sf.circle(radius=float(spec.get("radius", 1.0)),
                         center=spec.get("center", (0.0, 0.0)))
    if kind == "graph":
        coeffs = spec.get("coeffs", [0.0])
        arr = np.asarray(coeffs, dtype=float)
        extent = float(spec.get("extent", 1.0))
        if arr.ndim <= 1:
            return sf.graph_curve(arr, extent=extent)
        return sf.graph_surface(arr, extent=extent)
    if kind == "enneper":
        return sf.enneper(scale=float(spec.get("scale", 0.8)),
                          extent=float(spec.get("extent", 1.5)))
    raise ConfigError(f"surface {name!r}: unknown kind {kind!r}")


@dataclass
class CheckOutcome:
    name: str
    kind: str
    status: str          # pass | fail | info | error
    line: str            # one-line human summary
    rows: list[dict]     # CSV rows for this check's family
    plot: tuple[str, str] | None = None   # (filename, script body)

    @property
    def failed(self) -> bool:
        return self.status in ("fail", "error")


class Scenario:
    """Validated scenario configuration."""

    def __init__(self, doc: dict, *, seed: int | None = None,
                 quad_overrides: dict | None = None):
        if not isinstance(doc, dict):
            raise ConfigError("config root must be a JSON object")
        self.seed = int(doc.get("seed", 0) if seed is None else seed)
        quad = dict(doc.get("quadrature", {}))
        quad.update({k: v for k, v in (quad_overrides or {}).items() if v is not None})
        self.rule = ParamQuadrature(order=int(quad.get("order", 6)),
                                    base_grid=int(quad.get("grid", 16)))
        self.max_depth = int(quad.get("max_depth", 8))
        self.out = doc.get("out", "wulffkit-out")

        self.norms = {}
        for name, spec in doc.get("norms", {}).items():
            self.norms[name] = build_norm(spec, name)
        self.surfaces = {}
        for name, spec in doc.get("surfaces", {}).items():
            self.surfaces[name] = build_surface(spec, name)

        self.checks = []
        for i, chk in enumerate(doc.get("checks", [])):
            kind = chk.get("kind")
            name = chk.get("name", f"check-{i}")
            if kind not in CHECK_KINDS:
                raise ConfigError(f"check {name!r}: unknown kind {kind!r}")
            for key in ("norm", "gauge"):
                if key in chk and chk[key] not in self.norms:
                    raise ConfigError(f"check {name!r}: unresolved norm {chk[key]!r}")
            if "surface" in chk and chk["surface"] not in self.surfaces:
                raise ConfigError(f"check {name!r}: unresolved surface {chk['surface']!r}")
            if "xi" in chk and chk["xi"] not in ("normal", "constant") \
                    and chk["xi"] not in self.norms:
                raise ConfigError(f"check {name!r}: unresolved xi field {chk['xi']!r}")
            s, r = chk.get("s"), chk.get("r")
            if s is not None and r is not None and not float(s) < float(r):
                raise ConfigError(f"check {name!r}: radii must satisfy s < r "
                                  f"(got s={s}, r={r})")
            radii = chk.get("radii")
            if radii is not None and isinstance(radii, list):
                rr = [float(x) for x in radii]
                if sorted(rr) != rr or len(set(rr)) != len(rr):
                    raise ConfigError(f"check {name!r}: radii must be strictly increasing")
            self.checks.append((name, kind, chk))


def _xi_field(scn: Scenario, chk: dict) -> sf.TransversalField:
    xi = chk.get("xi", "normal")
    if xi == "normal":
        return sf.normal_field()
    if xi == "constant":
        vec = chk.get("constant", (0.3, -0.7, 0.55))
        return sf.constant_field(vec)
    return sf.anisotropic_normal_field(scn.norms[xi])


def _run_check(scn: Scenario, name: str, kind: str, chk: dict) -> CheckOutcome:
    if kind == "norm-identities":
        return _check_norm_identities(scn, name, chk)
    if kind == "condition-s":
        return _check_condition_s(scn, name, chk)
    if kind == "lemmas":
        return _check_lemmas(scn, name, chk)
    if kind == "monotonicity":
        return _check_monotonicity(scn, name, chk)
    if kind == "equiaffine":
        return _check_equiaffine(scn, name, chk)
    if kind == "corollary":
        return _check_corollary(scn, name, chk)
    if kind == "minkowski":
        return _check_minkowski(scn, name, chk)
    return _check_symfunc(scn, name, chk)


def _check_norm_identities(scn, name, chk) -> CheckOutcome:
    norm = scn.norms[chk["norm"]]
    samples = int(chk.get("samples", 1000))
    rng = np.random.default_rng(scn.seed)
    U = rng.standard_normal((samples, norm.dim))
    U = U[np.linalg.norm(U, axis=1) > 1e-6]
    euler = max(norm.euler_residual(u) for u in U)
    radial = max(norm.radial_kernel_residual(u) for u in U)
    homog = 0.0
    for t in (0.5, 2.0, 10.0):
        vals = np.asarray(norm.value(U))
        homog = max(homog, float(np.max(
            np.abs(np.asarray(norm.value(t * U)) - t * vals) / (t * vals))))
    min_eig = min(norm.restricted_hessian_min_eig(u) for u in U[:64])
    tol = float(chk.get("tolerance", 1e-8))
    ok = euler < tol and radial < 10 * tol and homog < 1e-10 and min_eig > 0
    row = {"name": name, "norm": chk["norm"], "samples": samples,
           "euler_max": euler, "radial_max": radial, "homogeneity_max": homog,
           "min_restricted_eig": min_eig, "pass": ok}
    return CheckOutcome(name, "norm-identities", "pass" if ok else "fail",
                        f"euler={euler:.2e} radial={radial:.2e} min_eig={min_eig:.3g}",
                        [row])


def _check_condition_s(scn, name, chk) -> CheckOutcome:
    norm = scn.norms[chk["norm"]]
    samples = int(chk.get("samples", 10_000))
    k = int(chk.get("worst_k", 10))
    dual = norm.dual()
    verdict = cs.check_condition_s(norm, samples, seed=scn.seed, dual=dual)
    pairs = cs.worst_pairs(norm, samples, k=k, seed=scn.seed, dual=dual)
    rows = [{"name": name, "norm": chk["norm"], "rank": i,
             "u": rep.u, "v": rep.v, "lhs": rep.lhs, "rhs": rep.rhs_sign_ref,
             "fk_residual": rep.fk_residual, "margin": rep.margin}
            for i, rep in enumerate(pairs)]
    expect = chk.get("expect", "pass")
    ok = verdict.passed if expect == "pass" else not verdict.passed
    line = (f"{'sign condition holds' if verdict.passed else 'VIOLATED'} on "
            f"{samples} pairs; min margin {verdict.min_margin:.3e}, "
            f"max pairing residual {verdict.max_fk_residual:.3e}")
    return CheckOutcome(name, "condition-s", "pass" if ok else "fail", line, rows)


def _check_lemmas(scn, name, chk) -> CheckOutcome:
    patch = scn.surfaces[chk["surface"]]
    xi = _xi_field(scn, chk)
    tol = float(chk.get("tolerance", 1e-4))
    suite = vf.frame_identity_suite(patch, xi, grid=int(chk.get("grid", 9)),
                                    min_support=float(chk.get("min_support", 0.05)))
    rows, worst = [], 0.0
    for key, val in suite.items():
        if key in ("grid_points", "kept_points"):
            continue
        worst = max(worst, val)
        rows.append({"name": name, "surface": chk["surface"], "xi": xi.name,
                     "check": key, "residual": val, "tolerance": tol,
                     "pass": val < tol})
    ok = worst < tol
    return CheckOutcome(name, "lemmas", "pass" if ok else "fail",
                        f"max residual {worst:.2e} over {suite['kept_points']} points",
                        rows)


def _check_monotonicity(scn, name, chk) -> CheckOutcome:
    patch = scn.surfaces[chk["surface"]]
    norm = scn.norms[chk["norm"]]
    dual = norm.dual()
    radii = chk.get("radii")
    if isinstance(radii, list):
        radii = np.asarray([float(x) for x in radii])
    else:
        radii = vf.geometric_radii(patch, dual, count=int(chk.get("count", 8)))
    scan = vf.monotonicity_scan(patch, norm, radii, dual=dual, rule=scn.rule,
                                max_depth=scn.max_depth)
    rows = []
    for rep in scan.reports:
        rows.append({"name": name, "surface": chk["surface"], "norm": chk["norm"],
                     "s": rep.metadata["s"], "r": rep.metadata["r"],
                     "lhs": rep.lhs, "rhs": rep.rhs, "residual": rep.residual,
                     "tolerance": rep.tolerance, "pass": rep.status})
    ok = all(rep.status == "pass" for rep in scan.reports)
    detail = f"{len(scan.reports)} annuli"
    if chk.get("assert_monotone", True):
        mono = scan.non_decreasing()
        ok = ok and mono
        detail += f", non-decreasing={mono}"
    if "assert_constant_rel" in chk:
        dev = scan.max_relative_deviation()
        const_ok = dev <= float(chk["assert_constant_rel"])
        ok = ok and const_ok
        detail += f", flatness={dev:.2e}"
    plot = (f"{name}.gnuplot", _gnuplot_script(name, patch.n, radii, scan.normalized))
    return CheckOutcome(name, "monotonicity", "pass" if ok else "fail", detail,
                        rows, plot=plot)


def _check_equiaffine(scn, name, chk) -> CheckOutcome:
    patch = scn.surfaces[chk["surface"]]
    xi = _xi_field(scn, chk)
    gauge = scn.norms[chk["gauge"]].dual()
    rep = vf.equiaffine_identity(patch, xi, gauge, float(chk["s"]), float(chk["r"]),
                                 rule=scn.rule, max_depth=scn.max_depth)
    row = {"name": name, "surface": chk["surface"], "norm": chk["gauge"],
           "s": rep.metadata["s"], "r": rep.metadata["r"], "lhs": rep.lhs,
           "rhs": rep.rhs, "residual": rep.residual, "tolerance": rep.tolerance,
           "pass": rep.status}
    return CheckOutcome(name, "equiaffine", rep.status,
                        f"residual {rep.residual:.2e} vs tol {rep.tolerance:.2e}",
                        [row])


def _check_corollary(scn, name, chk) -> CheckOutcome:
    patch = scn.surfaces[chk["surface"]]
    norm = scn.norms[chk["norm"]]
    rep = vf.corollary_lower_bound(patch, norm, rule=scn.rule,
                                   max_depth=scn.max_depth,
                                   origin_param=chk.get("origin_param"))
    expect = chk.get("expect", "bound")
    if expect == "equality":
        ok = rep.equality_within <= float(chk.get("rel_tol", 1e-4))
    elif expect == "strict":
        ok = rep.strictly_above
    else:
        ok = rep.ratio >= 1.0 - 5.0 * rep.tolerance
    ok = ok and not rep.flags
    row = {"name": name, "surface": chk["surface"], "norm": chk["norm"],
           "energy": rep.energy, "bound": rep.bound, "ratio": rep.ratio,
           "tolerance": rep.tolerance, "strict": rep.strictly_above, "pass": ok}
    return CheckOutcome(name, "corollary", "pass" if ok else "fail",
                        f"ratio={rep.ratio:.6f} ({expect})", [row])


def _check_minkowski(scn, name, chk) -> CheckOutcome:
    patch = scn.surfaces[chk["surface"]]
    xi = _xi_field(scn, chk)
    ks = chk.get("k", [0])
    ks = ks if isinstance(ks, list) else [ks]
    rows, ok = [], True
    for k in ks:
        rep = vf.minkowski_formula(patch, xi, int(k), rule=scn.rule)
        ok = ok and rep.passed
        rows.append({"name": name, "surface": chk["surface"], "xi": xi.name,
                     "k": int(k), "lhs": rep.lhs, "rhs": rep.rhs,
                     "residual": rep.residual, "tolerance": rep.tolerance,
                     "pass": rep.status})
    return CheckOutcome(name, "minkowski", "pass" if ok else "fail",
                        f"orders {ks}", rows)


def _check_symfunc(scn, name, chk) -> CheckOutcome:
    rng = np.random.default_rng(scn.seed)
    sizes = chk.get("sizes", [3, 4, 5])
    count = int(chk.get("count", 20))
    rows, ok = [], True
    worst = {"recursion_vs_minors": 0.0, "entries_oracle": 0.0,
             "gradient_relation": 0.0, "trace_euler": 0.0, "trace_recursion": 0.0,
             "cayley_hamilton": 0.0}
    for n in sizes:
        for _ in range(count):
            A = rng.standard_normal((n, n))
            for k in range(1, n + 1):
                worst["recursion_vs_minors"] = max(
                    worst["recursion_vs_minors"],
                    abs(sym.sigma_k(A, k) - sym.sigma_k_minors_oracle(A, k))
                    / max(1.0, abs(sym.sigma_k(A, k))))
                e, t = sym.trace_identity_residuals(A, k)
                worst["trace_euler"] = max(worst["trace_euler"], e)
                worst["trace_recursion"] = max(worst["trace_recursion"], t)
            if n <= 4:
                for k in range(0, min(3, n) + 1):
                    worst["entries_oracle"] = max(
                        worst["entries_oracle"],
                        float(np.max(np.abs(sym.newton_tensor(A, k)
                                            - sym.newton_entries_oracle(A, k)))))
            for k in (1, min(2, n)):
                worst["gradient_relation"] = max(
                    worst["gradient_relation"], sym.gradient_relation_residual(A, k))
            worst["cayley_hamilton"] = max(
                worst["cayley_hamilton"],
                float(np.max(np.abs(sym.newton_tensor(A, n)))))
    tols = {"recursion_vs_minors": 1e-8, "entries_oracle": 1e-10,
            "gradient_relation": 1e-6, "trace_euler": 1e-9,
            "trace_recursion": 1e-9, "cayley_hamilton": 1e-8}
    for key, val in worst.items():
        good = val < tols[key]
        ok = ok and good
        rows.append({"name": name, "check": key, "sizes": " ".join(map(str, sizes)),
                     "residual": val, "tolerance": tols[key], "pass": good})
    return CheckOutcome(name, "symfunc", "pass" if ok else "fail",
                        f"{count} matrices per size {sizes}", rows)


def _gnuplot_script(name: str, n: int, radii, normalized) -> str:
    lines = [
        f"# wulffkit monotonicity scan: {name}",
        f'set title "normalized gauge energy, {name}"',
        'set xlabel "r"',
        f'set ylabel "E(r)/r^{n}"',
        "plot '-' using 1:2 with linespoints title 'E(r)/r^n'",
    ]
    for r, e in zip(radii, normalized):
        lines.append(f"{_fmt(float(r))} {_fmt(float(e))}")
    lines.append("e")
    return "\n".join(lines) + "\n"


def _write_csvs(outcomes: list[CheckOutcome], out_dir: Path) -> None:
    by_kind: dict[str, list[dict]] = {}
    for oc in outcomes:
        if oc.rows:
            by_kind.setdefault(oc.kind, []).extend(oc.rows)
    out_dir.mkdir(parents=True, exist_ok=True)
    for kind, rows in by_kind.items():
        cols = list(rows[0].keys())
        path = out_dir / f"{kind.replace('-', '_')}.csv"
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(CSV_HEADER + "\n")
            fh.write(",".join(cols) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(row.get(c, "")) for c in cols) + "\n")
    for oc in outcomes:
        if oc.plot is not None:
            fname, body = oc.plot
            (out_dir / fname).write_text(body, encoding="utf-8")


def run_scenario(scn: Scenario, out_dir: Path, jobs: int = 1,
                 stream=None) -> int:
    stream = stream if stream is not None else sys.stdout
    def work(item):
        name, kind, chk = item
        try:
            return _run_check(scn, name, kind, chk)
        except WulffkitError as exc:
            return CheckOutcome(name, kind, "error",
                                f"{type(exc).__name__}: {exc}", [])

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(work, scn.checks))
    else:
        outcomes = [work(item) for item in scn.checks]

    for oc in outcomes:
        print(f"[{oc.status.upper():5s}] {oc.name} ({oc.kind}): {oc.line}",
              file=stream)
    _write_csvs(outcomes, out_dir)
    n_bad = sum(oc.failed for oc in outcomes)
    print(f"{len(outcomes) - n_bad}/{len(outcomes)} checks passed; "
          f"reports in {out_dir}", file=stream)
    return 1 if n_bad else 0


def load_config(path: str) -> dict:
    """Load a scenario: a filesystem path or the name of a bundled scenario."""
    p = Path(path)
    if p.exists():
        return json.loads(p.read_text(encoding="utf-8"))
    candidate = resources.files("wulffkit").joinpath(f"scenarios/{path}.json")
    if candidate.is_file():
        return json.loads(candidate.read_text(encoding="utf-8"))
    raise ConfigError(f"config not found: {path}")


def list_builtins(stream=None) -> None:
    stream = stream if stream is not None else sys.stdout
    print("norm families:", file=stream)
    for fam, params in NORM_FAMILIES.items():
        print(f"  {fam:22s} params: {params}", file=stream)
    print("surfaces:", file=stream)
    for kind, params in SURFACE_KINDS.items():
        print(f"  {kind:22s} params: {params}", file=stream)
    print("checks:", file=stream)
    print("  " + ", ".join(CHECK_KINDS), file=stream)
    bundled = sorted(
        p.name[:-5] for p in resources.files("wulffkit").joinpath("scenarios").iterdir()
        if p.name.endswith(".json"))
    print("bundled scenarios: " + ", ".join(bundled), file=stream)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="wulffkit",
        description="gauge-geometry identity checks: scenario runner")
    sub = parser.add_subparsers(dest="command", required=True)

    runp = sub.add_parser("run", help="run a scenario config")
    runp.add_argument("--config", required=True,
                      help="path to a JSON scenario, or a bundled scenario name")
    runp.add_argument("--jobs", type=int, default=1)
    runp.add_argument("--quad-order", type=int, default=None)
    runp.add_argument("--grid", type=int, default=None)
    runp.add_argument("--max-depth", type=int, default=None)
    runp.add_argument("--seed", type=int, default=None)
    runp.add_argument("--out", default=None)

    sub.add_parser("list-builtins", help="list norm families, surfaces, checks")

    condp = sub.add_parser("condition-s", help="one-shot sign-condition scan")
    condp.add_argument("--norm", required=True, choices=sorted(NORM_FAMILIES))
    condp.add_argument("--dim", type=int, default=2)
    condp.add_argument("--matrix", default=None,
                       help="row-major entries for the quadratic family, JSON list")
    condp.add_argument("--eps", type=float, default=0.05)
    condp.add_argument("--samples", type=int, default=10_000)
    condp.add_argument("--worst-k", type=int, default=10)
    condp.add_argument("--seed", type=int, default=0)
    condp.add_argument("--out", default=None)

    args = parser.parse_args(argv)

    if args.command == "list-builtins":
        list_builtins()
        return 0

    if args.command == "condition-s":
        spec = {"family": args.norm, "dim": args.dim, "eps": args.eps}
        if args.matrix is not None:
            spec["matrix"] = json.loads(args.matrix)
        doc = {"seed": args.seed, "norms": {"target": spec},
               "checks": [{"kind": "condition-s", "name": "condition-s",
                           "norm": "target", "samples": args.samples,
                           "worst_k": args.worst_k,
                           "expect": "pass" if args.norm != "quartic-regularized"
                           else "fail"}]}
        try:
            scn = Scenario(doc)
        except ConfigError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return 2
        out_dir = Path(os.environ.get("WULFFKIT_OUT") or args.out or "wulffkit-out")
        return run_scenario(scn, out_dir)

    try:
        doc = load_config(args.config)
        scn = Scenario(doc, seed=args.seed,
                       quad_overrides={"order": args.quad_order, "grid": args.grid,
                                       "max_depth": args.max_depth})
    except (ConfigError, json.JSONDecodeError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    out_dir = Path(os.environ.get("WULFFKIT_OUT") or args.out or scn.out)
    return run_scenario(scn, out_dir, jobs=max(1, args.jobs))


if __name__ == "__main__":
    sys.exit(main())
