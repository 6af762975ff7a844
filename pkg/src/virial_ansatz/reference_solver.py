"""Finite-difference reference eigensolver for ``-psi''/2 + U psi = E psi``.

The Hamiltonian is discretized on a uniform Dirichlet grid over
``[xi - L, xi + L]`` with a 3- or 5-point stencil.  The lowest levels of
the resulting symmetric banded matrix come from LAPACK (``dsbevx`` via
:func:`scipy.linalg.eig_banded`); eigenvectors are recovered by banded
inverse iteration.  With ``richardson=True`` energies from ``M`` and
``2M`` intervals are combined to cancel the leading ``h^order`` error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.linalg import eig_banded, eigh_tridiagonal, solve_banded

from .errors import DomainError, InvalidArgumentError, NumericalBreakdownError
from .potential import Potential, turning_point

BOUNDARY_DECAY = 1e-8
MIN_GRID_POINTS = 64
MAX_DOMAIN_GROWTH = 8


@dataclass(frozen=True)
class ReferenceSolver:
    """Solver configuration; ``None`` fields are chosen by :func:`auto_domain`."""

    half_width: float | None = None
    grid_points: int | None = None
    stencil_order: int = 4
    richardson: bool = True
    points_per_wavelength: float = 100.0

    def __post_init__(self):
        if self.stencil_order not in (2, 4):
            raise InvalidArgumentError("stencil_order must be 2 or 4")
        if self.grid_points is not None and self.grid_points < MIN_GRID_POINTS:
            raise InvalidArgumentError(f"grid_points must be >= {MIN_GRID_POINTS}")
        if self.half_width is not None and not self.half_width > 0:
            raise InvalidArgumentError("half_width must be positive")


@dataclass
class ReferenceSolution:
    energies: np.ndarray
    x: np.ndarray
    eigenvectors: np.ndarray
    error_estimate: np.ndarray
    half_width: float
    grid_points: int
    stencil_order: int
    richardson: bool

    @property
    def nmax(self) -> int:
        return self.energies.size - 1

    def psi(self, xs) -> np.ndarray:
        """Cubic-spline samples of every eigenvector at ``xs`` (0 outside the grid)."""
        xs = np.asarray(xs, dtype=float)
        spline = CubicSpline(self.x, self.eigenvectors, axis=1)
        out = spline(xs)
        outside = (xs < self.x[0]) | (xs > self.x[-1])
        out[:, outside] = 0.0
        return out

    def metadata(self) -> dict:
        return {
            "method": "finite-difference",
            "stencil_order": self.stencil_order,
            "richardson": self.richardson,
            "half_width": self.half_width,
            "grid_points": self.grid_points,
        }


def auto_domain(p: Potential, nmax: int, points_per_wavelength: float = 100.0) -> tuple[float, int]:
    """Heuristic ``(L, M)`` for the lowest ``nmax + 1`` levels.

    The top level is guessed as ``3 omega_eff (nmax + 1/2)``; ``L`` is twice
    the turning point at that energy and ``M`` resolves the shortest local
    de Broglie wavelength with ``points_per_wavelength`` points.
    """
    curv = float(p.reduced_second_derivative(0.0))
    if curv <= 0:
        # flat bottom (k >= 2): take the curvature where U reaches 1/2
        curv = float(p.reduced_second_derivative(turning_point(p, 0.5)))
    omega_eff = math.sqrt(curv)
    e_top = 3.0 * omega_eff * (nmax + 0.5)
    L = 2.0 * turning_point(p, e_top)
    wavelength = 2.0 * math.pi / math.sqrt(2.0 * e_top)
    M = max(MIN_GRID_POINTS, int(math.ceil(points_per_wavelength * 2.0 * L / wavelength)))
    return L, M


def _bands(p: Potential, L: float, M: int, order: int):
    h = 2.0 * L / M
    u = -L + h * np.arange(1, M)
    V = p.reduced(u)
    c = 1.0 / (2.0 * h * h)
    if order == 2:
        return u, [V + 2.0 * c, np.full(M - 2, -c)]
    return u, [V + 30.0 * c / 12.0, np.full(M - 2, -16.0 * c / 12.0), np.full(M - 3, c / 12.0)]


def _eigenpairs(bands, nmax: int):
    n = bands[0].size
    if len(bands) == 2:
        d, e = bands
        E = eigh_tridiagonal(d, e, eigvals_only=True, select="i", select_range=(0, nmax))
    else:
        ab = np.zeros((3, n))
        ab[2] = bands[0]
        ab[1, 1:] = bands[1]
        ab[0, 2:] = bands[2]
        E = eig_banded(ab, eigvals_only=True, select="i", select_range=(0, nmax))
    kd = len(bands) - 1
    full = np.zeros((2 * kd + 1, n))
    full[kd] = bands[0]
    for j in range(1, kd + 1):
        full[kd - j, j:] = bands[j]
        full[kd + j, :-j] = bands[j]
    rng = np.random.default_rng(0)
    start = rng.standard_normal(n)
    vecs = np.empty((E.size, n))
    for i, e in enumerate(E):
        A = full.copy()
        A[kd] -= e - 1e-10 * max(1.0, abs(e))
        v = start.copy()
        for _ in range(3):
            v = solve_banded((kd, kd), A, v)
            v /= np.linalg.norm(v)
        vecs[i] = v
    return E, vecs


def _solve_grid(p: Potential, L: float, M: int, nmax: int, order: int):
    if M - 1 <= nmax + 2 * order:
        raise InvalidArgumentError("grid too coarse for the requested number of levels")
    u, bands = _bands(p, L, M, order)
    E, V = _eigenpairs(bands, nmax)
    h = 2.0 * L / M
    V = V / np.sqrt(h * np.sum(V * V, axis=1))[:, None]
    for i in range(V.shape[0]):
        big = np.flatnonzero(np.abs(V[i]) >= 1e-3 * np.abs(V[i]).max())
        if V[i, big[-1]] < 0:
            V[i] = -V[i]
    edge = np.maximum(np.abs(V[:, 0]), np.abs(V[:, -1]))
    if np.any(edge > BOUNDARY_DECAY):
        n = int(np.argmax(edge > BOUNDARY_DECAY))
        raise DomainError(
            f"psi_{n} has not decayed at the boundary (|psi|={edge[n]:.2e}); increase the half-width",
            suggested_half_width=1.5 * L,
        )
    return u, E, V


def solve(p: Potential, nmax: int, cfg: ReferenceSolver | None = None) -> ReferenceSolution:
    """Lowest ``nmax + 1`` eigenpairs of ``-d^2/2 + U`` for potential ``p``."""
    cfg = cfg or ReferenceSolver()
    if nmax < 0:
        raise InvalidArgumentError("nmax must be >= 0")
    L0, M0 = auto_domain(p, nmax, cfg.points_per_wavelength)
    L = cfg.half_width if cfg.half_width is not None else L0
    M = cfg.grid_points if cfg.grid_points is not None else M0
    order = cfg.stencil_order

    for _ in range(MAX_DOMAIN_GROWTH):
        try:
            u, E, V = _solve_grid(p, L, M, nmax, order)
            break
        except DomainError as exc:
            # only a heuristic domain may be widened; explicit ones are honoured
            if cfg.half_width is not None:
                raise
            grow = exc.suggested_half_width / L
            L = exc.suggested_half_width
            if cfg.grid_points is None:
                M = int(math.ceil(M * grow))
    else:
        raise DomainError(f"no decaying domain found up to half-width {L:g}", suggested_half_width=1.5 * L)
    err = np.full(E.size, np.nan)
    M_used = M
    if cfg.richardson:
        u, E2, V = _solve_grid(p, L, 2 * M, nmax, order)
        corr = (E2 - E) / (2.0**order - 1.0)
        E = E2 + corr
        err = np.abs(corr)
        M_used = 2 * M
    if np.any(np.diff(E) <= 0):
        raise NumericalBreakdownError("reference energies are not strictly increasing")
    x = np.concatenate([[-L], u, [L]]) + p.xi
    vecs = np.pad(V, ((0, 0), (1, 1)))
    return ReferenceSolution(E, x, vecs, err, float(L), int(M_used), order, cfg.richardson)
