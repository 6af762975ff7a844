"""Command-line front end: ``virial-ansatz {table,curves,verify,sweep}``.

Exit codes: 0 success, 1 failed verification, 2 bad configuration,
3 potential not strictly convex, 4 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    AccuracyError,
    ConvexityError,
    DomainError,
    InvalidArgumentError,
    NotFoundError,
    NumericalBreakdownError,
)
from .orthopoly import NMAX_CAP, build_basis, gram_matrix, virial_condition_residual
from .potential import Potential, check_strict_convexity, leading_order, turning_point
from .quadrature import DEFAULT_SPEC, QuadratureSpec, build_symmetric_rule, integrate_weighted
from .reference_solver import ReferenceSolver, solve
from .spectrum import ansatz_states, build_report, curve_table
from .virial_core import build_g, build_weight, inflection_points

log = logging.getLogger("virial_ansatz")

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_CONVEXITY, EXIT_NUMERIC = 0, 1, 2, 3, 4

TABLE1_LAMBDAS = (0.05, 0.25, 0.5, 1.0, 2.5, 5.0)
PRESETS = {
    f"table1-{tag}": {"kind": "aho", "omega": 1.0, "lambda": lam, "xi": 4.0}
    for tag, lam in zip("abcdef", TABLE1_LAMBDAS)
}

GRAM_NMAX = 8

# pass/fail thresholds used by ``verify``
VERIFY_TOL = {
    "normalization": 1e-10,
    "gram": 1e-9,
    "virial_condition": 1e-8,
    "virial_theorem": 1e-8,
    "energy_forms": 1e-8,
    "local_virial": 1e-8,
    "g_parity": 1e-12,
    "hermite": 1e-8,
}


@dataclass
class RunConfig:
    potential: Potential
    nmax: int = 5
    spec: QuadratureSpec = field(default_factory=QuadratureSpec)
    solver: ReferenceSolver = field(default_factory=ReferenceSolver)
    format: str = "csv"
    output: str | None = None
    dump_basis: str | None = None

    def __post_init__(self):
        if not 0 <= self.nmax <= NMAX_CAP:
            raise InvalidArgumentError(f"nmax must be in 0..{NMAX_CAP}")
        if self.format not in ("csv", "json", "pretty"):
            raise InvalidArgumentError(f"unknown output format {self.format!r}")


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser):
    g = p.add_argument_group("potential")
    g.add_argument("--config", help="JSON run configuration; flags override it")
    g.add_argument("--preset", choices=sorted(PRESETS), help="benchmark AHO parameter block")
    g.add_argument("--potential", choices=["ho", "aho", "even_poly"])
    g.add_argument("--omega", type=float)
    g.add_argument("--lambda", dest="lam", type=float)
    g.add_argument("--xi", type=float)
    g.add_argument("--coeffs", type=float, nargs="+", help="a_1 a_2 ... of sum a_n (x-xi)^(2n)")
    g.add_argument("--nmax", type=int)
    q = p.add_argument_group("numerics")
    q.add_argument("--rel-tol", type=float)
    q.add_argument("--abs-tol", type=float)
    q.add_argument("--grid-points", type=int)
    q.add_argument("--domain-halfwidth", type=float)
    q.add_argument("--stencil-order", type=int, choices=[2, 4])
    q.add_argument("--no-richardson", action="store_true", default=None)
    o = p.add_argument_group("output")
    o.add_argument("--format", choices=["csv", "json", "pretty"])
    o.add_argument("--output", "-o")
    o.add_argument("--dump-basis", help="write the orthonormal basis as JSON to this path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="virial-ansatz", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_common(sub.add_parser("table", help="energy table: reference vs ansatz"))
    curves = sub.add_parser("curves", help="sample chi_n and psi_n on a uniform grid")
    _add_common(curves)
    curves.add_argument("--xmin", type=float)
    curves.add_argument("--xmax", type=float)
    curves.add_argument("--points", type=int, default=401)
    _add_common(sub.add_parser("verify", help="run the invariant checks"))
    sweep = sub.add_parser("sweep", help="run all benchmark presets concurrently")
    _add_common(sweep)
    sweep.add_argument("--jobs", type=int, default=None)
    return parser


def _load_config(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidArgumentError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise InvalidArgumentError("config file must hold a JSON object")
    return data


def _pick(flag, file_cfg, key, default=None):
    if flag is not None:
        return flag
    return file_cfg.get(key, default)


def config_from_args(args) -> RunConfig:
    file_cfg = _load_config(args.config) if args.config else {}
    preset = args.preset or file_cfg.get("preset")
    if preset is not None and preset not in PRESETS:
        raise InvalidArgumentError(f"unknown preset {preset!r}")

    if args.potential:
        pot = {"kind": args.potential}
    elif preset and not (args.config and "potential" in file_cfg and not args.preset):
        pot = dict(PRESETS[preset])
    elif "potential" in file_cfg:
        pot = dict(file_cfg["potential"])
    else:
        raise InvalidArgumentError("no potential given (use --potential, --preset or --config)")
    for key, flag in (("omega", args.omega), ("lambda", args.lam), ("xi", args.xi), ("coeffs", args.coeffs)):
        if flag is not None:
            pot[key] = flag
    if pot.get("kind") == "aho":
        pot.setdefault("lambda", 0.0)
    potential = Potential.from_dict(pot)

    defaults = QuadratureSpec()
    try:
        spec = QuadratureSpec(
            rel_tol=float(_pick(args.rel_tol, file_cfg, "rel_tol", defaults.rel_tol)),
            abs_tol=float(_pick(args.abs_tol, file_cfg, "abs_tol", defaults.abs_tol)),
        )
        richardson = not args.no_richardson if args.no_richardson else bool(file_cfg.get("richardson", True))
        solver = ReferenceSolver(
            half_width=_pick(args.domain_halfwidth, file_cfg, "domain_halfwidth"),
            grid_points=_pick(args.grid_points, file_cfg, "grid_points"),
            stencil_order=int(_pick(args.stencil_order, file_cfg, "stencil_order", 4)),
            richardson=richardson,
        )
        return RunConfig(
            potential=potential,
            nmax=int(_pick(args.nmax, file_cfg, "nmax", 5)),
            spec=spec,
            solver=solver,
            format=_pick(args.format, file_cfg, "format", "csv"),
            output=_pick(args.output, file_cfg, "output"),
            dump_basis=_pick(args.dump_basis, file_cfg, "dump_basis"),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InvalidArgumentError):
            raise
        raise InvalidArgumentError(f"bad configuration value: {exc}") from exc


def _emit(text: str, output: str | None):
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _basis(cfg: RunConfig):
    w = build_weight(build_g(cfg.potential, spec=cfg.spec), cfg.spec)
    b = build_basis(w, cfg.nmax, cfg.spec)
    if cfg.dump_basis:
        Path(cfg.dump_basis).write_text(json.dumps(b.to_records(), indent=2) + "\n")
    return b


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def render_report(report, fmt: str) -> str:
    if fmt == "json":
        return report.to_json() + "\n"
    if fmt == "pretty":
        return report.pretty()
    return report.to_csv()


def cmd_table(cfg: RunConfig) -> int:
    b = _basis(cfg)
    report = build_report(cfg.potential, cfg.nmax, cfg.solver, cfg.spec, basis=b)
    _emit(render_report(report, cfg.format), cfg.output)
    return EXIT_OK


def cmd_curves(cfg: RunConfig, xmin=None, xmax=None, points: int = 401) -> int:
    if points < 2:
        raise InvalidArgumentError("points must be >= 2")
    b = _basis(cfg)
    ref = solve(cfg.potential, cfg.nmax, cfg.solver)
    xmin = ref.x[0] if xmin is None else xmin
    xmax = ref.x[-1] if xmax is None else xmax
    if not xmin < xmax:
        raise InvalidArgumentError("xmin must be smaller than xmax")
    table = curve_table(b, ref, np.linspace(xmin, xmax, points))
    n = table.shape[1] // 2
    header = ["x"] + [f"chi_{i}" for i in range(n)] + [f"psi_ref_{i}" for i in range(n)]
    lines = [",".join(header)]
    lines += [",".join(f"{v:.12e}" for v in row) for row in table]
    _emit("\n".join(lines) + "\n", cfg.output)
    return EXIT_OK


def _hermite_coeffs(n: int, omega: float) -> np.ndarray:
    """Monomial coefficients of ``H_n(sqrt(omega) u) / sqrt(2^n n!)``."""
    h = np.polynomial.hermite.herm2poly(np.eye(n + 1)[n])
    return h * np.sqrt(omega) ** np.arange(n + 1) / math.sqrt(2.0**n * math.factorial(n))


def verify_items(cfg: RunConfig) -> list[tuple[str, bool, str]]:
    """Run every invariant check; returns ``(name, passed, detail)`` rows.

    The pipeline is built with ``cfg.spec``; the checks integrate with
    independent tight-tolerance quadrature so that a degraded run shows up.
    """
    tight = DEFAULT_SPEC
    p = cfg.potential
    items = []

    rep = check_strict_convexity(p)
    items.append(("convexity", rep.is_strictly_convex, f"{len(rep.witnesses)} witnesses"))
    k, ak = leading_order(p)
    if k >= 3:
        log.warning("leading order k=%d: g'' ~ |u|^%d is flat at the minimum", k, k - 1)
    items.append(("leading_order", True, f"k = {k}, a_k = {ak:g}" + (" (flat bottom)" if k >= 3 else "")))
    g = build_g(p, spec=cfg.spec)
    w = build_weight(g, cfg.spec)
    b = build_basis(w, cfg.nmax, cfg.spec)

    u = np.linspace(-w.domain.hi, w.domain.hi, 2001)
    par = float(np.max(np.abs(g.value(u) - g.value(-u))))
    items.append(("g_parity", par <= VERIFY_TOL["g_parity"], f"max |g(u)-g(-u)| = {par:.2e}"))
    nz = u[u != 0]
    g2 = g.second(nz)
    items.append(("g_convexity", bool(np.all(g2 > 0)), f"min g'' = {g2.min():.3e}"))
    lhs = 4.0 * g.prime(nz) ** 2
    rhs = 4.0 * p.virial_radicand(nz)
    loc = float(np.max(np.abs(lhs - rhs) / np.maximum(np.abs(rhs), 1e-300)))
    items.append(("local_virial", loc <= VERIFY_TOL["local_virial"], f"max rel = {loc:.2e}"))

    norm = integrate_weighted(lambda x: np.ones_like(x), w.sigma, tight)
    items.append(("normalization", abs(norm - 1) <= VERIFY_TOL["normalization"], f"|int sigma - 1| = {abs(norm - 1):.2e}"))

    # orthonormality is checked through n = GRAM_NMAX regardless of nmax
    ng = max(cfg.nmax, GRAM_NMAX)
    bg = b if ng == cfg.nmax else build_basis(w, ng, cfg.spec)
    G = gram_matrix(bg, build_symmetric_rule(w.sigma, 2 * ng + 8, tight))
    gerr = float(np.max(np.abs(G - np.eye(ng + 1))))
    items.append(("gram", gerr <= VERIFY_TOL["gram"], f"max |G - I| (n <= {ng}) = {gerr:.2e}"))

    vc = max(abs(virial_condition_residual(b, n)) for n in range(cfg.nmax + 1))
    items.append(("virial_condition", vc <= VERIFY_TOL["virial_condition"], f"max |(phi, phi'')| = {vc:.2e}"))

    states = ansatz_states(b)
    vt = max(s.virial_residual for s in states)
    items.append(("virial_theorem", vt <= VERIFY_TOL["virial_theorem"], f"max residual = {vt:.2e}"))
    ef = max(abs(s.energy_hamiltonian - s.energy_ansatz) / max(abs(s.energy_ansatz), 1.0) for s in states)
    items.append(("energy_forms", ef <= VERIFY_TOL["energy_forms"], f"max rel gap = {ef:.2e}"))

    # diagnostic only: the inflection radius is reported beside the classical
    # turning point of E_0^ans, no relation between them is asserted
    try:
        _, ur = inflection_points(w)
        ut = turning_point(p, states[0].energy_ansatz)
        items.append(("inflection_pair", True, f"u_r = {ur:.10f}, turning point of E_0^ans = {ut:.10f}"))
    except NotFoundError as exc:
        items.append(("inflection_pair", False, str(exc)))

    if p.kind == "ho":
        herr = 0.0
        for n in range(cfg.nmax + 1):
            ref = _hermite_coeffs(n, p.omega)
            herr = max(herr, float(np.max(np.abs(b.alpha[n, : n + 1] - ref)) / np.max(np.abs(ref))))
        items.append(("hermite_recovery", herr <= VERIFY_TOL["hermite"], f"max rel = {herr:.2e}"))
    return items


def cmd_verify(cfg: RunConfig) -> int:
    items = verify_items(cfg)
    width = max(len(name) for name, _, _ in items)
    lines = [f"{'PASS' if ok else 'FAIL'}  {name:<{width}}  {detail}" for name, ok, detail in items]
    failed = [name for name, ok, _ in items if not ok]
    lines.append("all checks passed" if not failed else "failed: " + ", ".join(failed))
    _emit("\n".join(lines) + "\n", cfg.output)
    return EXIT_OK if not failed else EXIT_VERIFY


def _sweep_one(args):
    name, base = args
    cfg = RunConfig(Potential.from_dict(PRESETS[name]), base.nmax, base.spec, base.solver, base.format)
    report = build_report(cfg.potential, cfg.nmax, cfg.solver, cfg.spec)
    return name, render_report(report, cfg.format)


def cmd_sweep(cfg: RunConfig, jobs: int | None = None) -> int:
    names = sorted(PRESETS)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(_sweep_one, [(n, cfg) for n in names]))
    if cfg.output:
        out = Path(cfg.output)
        out.mkdir(parents=True, exist_ok=True)
        ext = {"csv": "csv", "json": "json", "pretty": "txt"}[cfg.format]
        for name, text in results:
            (out / f"{name}.{ext}").write_text(text)
    else:
        sys.stdout.write("".join(f"# {name}\n{text}\n" for name, text in results))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        if args.command == "sweep" and not (args.potential or args.preset or args.config):
            args.preset = "table1-a"
        cfg = config_from_args(args)
        if args.command == "table":
            return cmd_table(cfg)
        if args.command == "curves":
            return cmd_curves(cfg, args.xmin, args.xmax, args.points)
        if args.command == "verify":
            return cmd_verify(cfg)
        return cmd_sweep(cfg, args.jobs)
    except ConvexityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVEXITY
    except InvalidArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (AccuracyError, DomainError, NumericalBreakdownError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
