import json
from functools import lru_cache
from pathlib import Path

import pytest

from virial_ansatz import Potential, ReferenceSolver, basis_for, solve

DATA = Path(__file__).parent / "data"
TABLE_LAMBDAS = (0.05, 0.25, 0.5, 1.0, 2.5, 5.0)


@lru_cache(maxsize=None)
def aho_basis(lam, nmax=5, omega=1.0, xi=4.0):
    return basis_for(Potential.quartic(omega, lam, xi), nmax)


@lru_cache(maxsize=None)
def aho_reference(lam, nmax=5, omega=1.0, xi=4.0):
    return solve(Potential.quartic(omega, lam, xi), nmax, ReferenceSolver())


@lru_cache(maxsize=None)
def table_rows():
    """Printed benchmark table, keyed by lambda; values parsed to float."""
    raw = json.loads((DATA / "aho_table.json").read_text())
    return {
        float(lam): [{k: (int(v) if k == "n" else float(v)) for k, v in row.items()} for row in rows]
        for lam, rows in raw.items()
    }


@pytest.fixture(scope="session")
def table():
    return table_rows()


@lru_cache(maxsize=None)
def ansatz_oracle():
    """Extended-precision ansatz energies (see data/make_ansatz_oracle.py)."""
    raw = json.loads((DATA / "aho_ansatz_oracle.json").read_text())
    return {float(lam): [float(v) for v in vals] for lam, vals in raw.items()}


def pytest_terminal_summary(terminalreporter):
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            if getattr(rep, "when", None) != "call":
                continue
            lines += [v for k, v in rep.user_properties if k == "acceptance"]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
