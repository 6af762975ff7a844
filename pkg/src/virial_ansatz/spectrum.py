"""Ansatz eigenfunctions ``chi_n = phi_n chi_v``, their energies and reports."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import InvalidArgumentError
from .orthopoly import NMAX_DEFAULT, OrthoBasis, build_basis
from .potential import Potential
from .quadrature import DEFAULT_SPEC, QuadratureSpec
from .virial_core import build_g, build_weight


def basis_for(p: Potential, nmax: int = NMAX_DEFAULT, spec: QuadratureSpec = DEFAULT_SPEC) -> OrthoBasis:
    """Full construction: g-function, virial weight, recurrence basis."""
    w = build_weight(build_g(p, spec=spec), spec)
    return build_basis(w, nmax, spec)


def ansatz_eval(b: OrthoBasis, n: int, x):
    """``chi_n(x) = phi_n(x - xi) chi_v(x - xi)`` in the original frame."""
    b._check_n(n)
    x = np.asarray(x, dtype=float)
    u = x - b.weight.potential.xi
    phi = b.values(u.ravel())[n].reshape(u.shape)
    return phi * b.weight.chi(u)


class _NodeData:
    """Per-node quantities shared by the energy integrals."""

    def __init__(self, b: OrthoBasis):
        p = b.weight.potential
        u = b.rule.nodes
        self.b = b
        self.d = b.derivatives(u)
        self.gp = b.weight.g.prime(u)
        self.U = p.reduced(u)
        self.uUp = p.virial_radicand(u)

    def kinetic2(self, n):
        # 2 * kinetic energy = integral (chi_n')^2 ; chi_n' = (phi' - phi g') chi_v
        phi, dphi = self.d[0, n], self.d[1, n]
        return self.b.rule.integrate_even((dphi - phi * self.gp) ** 2)

    def expect(self, n, values):
        return self.b.rule.integrate_even(self.d[0, n] ** 2 * values)


def energy_hamiltonian(b: OrthoBasis, n: int) -> float:
    """``<chi_n| -1/2 d^2 + U |chi_n>`` via the first-derivative quadratic form."""
    b._check_n(n)
    nd = _NodeData(b)
    return 0.5 * nd.kinetic2(n) + nd.expect(n, nd.U)


def energy_virial(b: OrthoBasis, n: int) -> float:
    """``<chi_n| u U'/2 + U |chi_n>``; the canonical ansatz energy."""
    b._check_n(n)
    nd = _NodeData(b)
    return nd.expect(n, 0.5 * nd.uUp + nd.U)


def virial_check(b: OrthoBasis, n: int) -> float:
    """Relative gap between ``integral (chi_n')^2`` and ``<u U'>_n``."""
    b._check_n(n)
    nd = _NodeData(b)
    t2 = nd.kinetic2(n)
    v = nd.expect(n, nd.uUp)
    return abs(t2 - v) / max(abs(v), 1.0)


@dataclass
class AnsatzState:
    n: int
    energy_ansatz: float
    energy_hamiltonian: float
    virial_residual: float
    norm_check: float


def ansatz_states(b: OrthoBasis) -> list[AnsatzState]:
    nd = _NodeData(b)
    out = []
    for n in range(b.nmax + 1):
        t2 = nd.kinetic2(n)
        v = nd.expect(n, nd.uUp)
        out.append(
            AnsatzState(
                n=n,
                energy_ansatz=nd.expect(n, 0.5 * nd.uUp + nd.U),
                energy_hamiltonian=0.5 * t2 + nd.expect(n, nd.U),
                virial_residual=abs(t2 - v) / max(abs(v), 1.0),
                norm_check=nd.expect(n, np.ones_like(nd.U)),
            )
        )
    return out


def overlap_matrix(b: OrthoBasis) -> np.ndarray:
    """``<chi_i|chi_j>`` on the basis rule."""
    xs, ws = b.rule.full()
    P = b.values(xs)
    return (P * ws) @ P.T


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

CSV_COLUMNS = ("n", "E_ref", "E_ans", "delta", "epsilon_pct")


@dataclass
class ReportRow:
    n: int
    e_ref: float
    e_ans: float
    delta: float
    epsilon_pct: float

    @classmethod
    def from_energies(cls, n, e_ref, e_ans):
        delta = e_ans - e_ref
        return cls(n, e_ref, e_ans, delta, 100.0 * delta / e_ref)


@dataclass
class SpectrumReport:
    rows: list[ReportRow]
    potential: dict
    solver: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(CSV_COLUMNS)
        for r in self.rows:
            wr.writerow([r.n, f"{r.e_ref:.8f}", f"{r.e_ans:.8f}", f"{r.delta:.8f}", f"{r.epsilon_pct:.2f}"])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "potential": self.potential,
            "solver": self.solver,
            "rows": [asdict(r) for r in self.rows],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "SpectrumReport":
        return cls([ReportRow(**r) for r in d["rows"]], d["potential"], d.get("solver", {}))

    @classmethod
    def from_json(cls, text: str) -> "SpectrumReport":
        return cls.from_dict(json.loads(text))

    def pretty(self) -> str:
        head = f"{'n':>2}  {'E_n':>14}  {'E_n^ans':>14}  {'Delta_n':>12}  {'eps_n %':>7}"
        lines = [Potential.from_dict(self.potential).describe(), head, "-" * len(head)]
        for r in self.rows:
            lines.append(
                f"{r.n:>2}  {r.e_ref:>14.8f}  {r.e_ans:>14.8f}  {r.delta:>12.8f}  {r.epsilon_pct:>7.2f}"
            )
        return "\n".join(lines) + "\n"


def build_report(
    p: Potential,
    nmax: int = 5,
    solver=None,
    spec: QuadratureSpec = DEFAULT_SPEC,
    basis: OrthoBasis | None = None,
    reference=None,
) -> SpectrumReport:
    """Rows ``n = 0..nmax`` pairing reference and ansatz energies.

    ``solver`` is a :class:`~virial_ansatz.reference_solver.ReferenceSolver`
    (default configuration when omitted); ``reference`` may pass a finished
    :class:`ReferenceSolution` instead.
    """
    from .reference_solver import ReferenceSolver, solve

    if nmax < 0:
        raise InvalidArgumentError("nmax must be >= 0")
    if basis is None:
        basis = basis_for(p, nmax, spec)
    if nmax > basis.nmax:
        raise InvalidArgumentError(f"nmax={nmax} exceeds basis nmax={basis.nmax}")
    if reference is None:
        solver = solver or ReferenceSolver()
        reference = solve(p, nmax, solver)
    states = ansatz_states(basis)
    rows = [ReportRow.from_energies(n, float(reference.energies[n]), states[n].energy_ansatz) for n in range(nmax + 1)]
    return SpectrumReport(rows, p.to_dict(), reference.metadata())


def curve_table(b: OrthoBasis, reference, xs) -> np.ndarray:
    """Columns ``x, chi_0..chi_nmax, psi_ref_0..psi_ref_nmax`` sampled at ``xs``."""
    xs = np.asarray(xs, dtype=float)
    nmax = min(b.nmax, reference.nmax)
    chi = np.array([ansatz_eval(b, n, xs) for n in range(nmax + 1)])
    psi = reference.psi(xs)[: nmax + 1]
    return np.column_stack([xs, chi.T, psi.T])


def l2_discrepancy(b: OrthoBasis, reference, n: int) -> float:
    """``||chi_n - psi_n||_2`` on the reference grid (trapezoid rule)."""
    x = reference.x
    diff = ansatz_eval(b, n, x) - reference.eigenvectors[n]
    return math.sqrt(float(np.trapezoid(diff * diff, x)))
