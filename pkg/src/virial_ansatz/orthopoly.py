"""Orthonormal polynomials under the virial weight.

The production path is the three-term recurrence::

    phi_0 = 1
    phi_1 = <u^2>^(-1/2) u
    phi_n = beta_n (u phi_{n-1} - <u phi_{n-1} phi_{n-2}> phi_{n-2})
    beta_n = (<u^2 phi_{n-1}^2> - <u phi_{n-1} phi_{n-2}>^2)^(-1/2)

with ``<f> = integral f sigma_v du`` evaluated on a :class:`SymmetricRule`.
Because ``sigma_v`` is even, ``phi_n`` has parity ``(-1)^n`` and the
diagonal recurrence term ``<u phi_{n-1}^2>`` vanishes; it is still computed
and checked.  Gram-Schmidt on monomials is kept as an independent route.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import _kernels
from .errors import InvalidArgumentError, NumericalBreakdownError
from .quadrature import (
    DEFAULT_SPEC,
    QuadratureSpec,
    SymmetricRule,
    build_symmetric_rule,
    integrate_weighted,
)
from .virial_core import VirialWeight

NMAX_DEFAULT = 6
# beyond this, double precision orthogonality of the recurrence degrades
NMAX_CAP = 16
RECURRENCE = "recurrence"
GRAM_SCHMIDT = "gram_schmidt"


@dataclass(frozen=True)
class OrthoBasis:
    """``phi_0 .. phi_nmax`` orthonormal under ``weight.sigma``.

    Attributes
    ----------
    beta, offdiag, diag : ndarray, shape (nmax + 1,)
        Recurrence data; ``beta[0] = 1`` and ``offdiag[:2] = 0`` by convention.
    alpha : ndarray, shape (nmax + 1, nmax + 1)
        ``alpha[n, j]`` is the coefficient of ``u**j`` in ``phi_n``.
    rule : SymmetricRule
        Quadrature the inner products were taken on.
    """

    nmax: int
    beta: np.ndarray
    offdiag: np.ndarray
    diag: np.ndarray
    alpha: np.ndarray
    weight: VirialWeight
    rule: SymmetricRule
    method: str = RECURRENCE

    def _check_n(self, n):
        if not 0 <= n <= self.nmax:
            raise InvalidArgumentError(f"n={n} outside 0..{self.nmax}")

    def derivatives(self, u) -> np.ndarray:
        """``(3, nmax + 1, len(u))`` array of ``phi``, ``phi'`` and ``phi''``."""
        u = np.ascontiguousarray(np.atleast_1d(np.asarray(u, dtype=float)).ravel())
        if self.method == RECURRENCE:
            return _kernels.recurrence(u, self.beta, self.offdiag)
        out = np.empty((3, self.nmax + 1, u.size))
        for n in range(self.nmax + 1):
            c = self.alpha[n, : n + 1]
            out[0, n] = npoly.polyval(u, c)
            out[1, n] = npoly.polyval(u, npoly.polyder(c))
            out[2, n] = npoly.polyval(u, npoly.polyder(c, 2))
        return out

    def values(self, u) -> np.ndarray:
        """``(nmax + 1, len(u))`` array of ``phi_n(u)``."""
        return self.derivatives(u)[0]

    def monomial(self, n: int, u):
        self._check_n(n)
        return npoly.polyval(np.asarray(u, dtype=float), self.alpha[n, : n + 1])

    def to_records(self) -> list[dict]:
        """Basis dump: one ``{n, beta_n, offdiag, alpha}`` object per polynomial."""
        return [
            {
                "n": n,
                "beta_n": float(self.beta[n]),
                "offdiag": float(self.offdiag[n]),
                "alpha": [float(a) for a in self.alpha[n, : n + 1]],
            }
            for n in range(self.nmax + 1)
        ]


def rule_degree(weight: VirialWeight, nmax: int) -> int:
    """Polynomial degree the inner-product rule must resolve.

    Covers ``phi_n^2 (u U' / 2 + U)`` for the energy integrals.
    """
    return 2 * nmax + 2 * len(weight.potential.coeffs) + 2


def _check_nmax(nmax):
    if not 0 <= nmax <= NMAX_CAP:
        raise InvalidArgumentError(f"nmax must be in 0..{NMAX_CAP}, got {nmax}")


def build_basis(w: VirialWeight, nmax: int = NMAX_DEFAULT, spec: QuadratureSpec = DEFAULT_SPEC) -> OrthoBasis:
    """Orthonormal basis by the three-term recurrence.

    Raises
    ------
    NumericalBreakdownError
        If the squared norm under ``beta_n`` is not positive, or the
        diagonal recurrence term fails to vanish.
    """
    _check_nmax(nmax)
    rule = build_symmetric_rule(w.sigma, rule_degree(w, nmax), spec)
    u = rule.nodes
    ip = rule.integrate_even
    P = np.zeros((nmax + 1, u.size))
    alpha = np.zeros((nmax + 1, nmax + 1))
    beta = np.zeros(nmax + 1)
    offdiag = np.zeros(nmax + 1)
    diag = np.zeros(nmax + 1)

    P[0] = 1.0
    alpha[0, 0] = 1.0
    beta[0] = 1.0
    if nmax >= 1:
        m2 = ip(u * u)
        if not m2 > 0:
            raise NumericalBreakdownError("second moment of the weight is not positive (n=1)")
        beta[1] = 1.0 / math.sqrt(m2)
        P[1] = beta[1] * u
        alpha[1, 1] = beta[1]
    for n in range(2, nmax + 1):
        c = ip(u * P[n - 1] * P[n - 2])
        r = ip((u * P[n - 1]) ** 2) - c * c
        if not r > 0:
            raise NumericalBreakdownError(
                f"beta_{n} radicand {r:.3e} is not positive; quadrature precision exhausted"
            )
        beta[n] = 1.0 / math.sqrt(r)
        offdiag[n] = c
        P[n] = beta[n] * (u * P[n - 1] - c * P[n - 2])
        alpha[n, 1:] = alpha[n - 1, :-1]
        alpha[n] = beta[n] * (alpha[n] - c * alpha[n - 2])

    # <u phi_{n-1}^2> on the unpaired rule: zero up to rounding for even weights
    xs, ws = rule.full()
    sign = np.where(np.arange(nmax + 1) % 2 == 0, 1.0, -1.0)
    full = np.concatenate([(sign[:, None] * P)[:, ::-1], P], axis=1)
    for n in range(1, nmax + 1):
        d = float(np.dot(ws, xs * full[n - 1] ** 2))
        scale = math.sqrt(float(np.dot(ws, (xs * full[n - 1]) ** 2)))
        if abs(d) > 1e-10 * scale:
            raise NumericalBreakdownError(f"diagonal recurrence term at n={n} is {d:.3e}, weight not even?")
        diag[n] = d
    for arr in (beta, offdiag, diag, alpha):
        arr.setflags(write=False)
    return OrthoBasis(nmax, beta, offdiag, diag, alpha, w, rule, RECURRENCE)


def gram_schmidt_basis(w: VirialWeight, nmax: int = NMAX_DEFAULT, spec: QuadratureSpec = DEFAULT_SPEC) -> OrthoBasis:
    """Orthonormal basis by projecting monomials ``u^n`` on lower ``phi_k``."""
    _check_nmax(nmax)
    rule = build_symmetric_rule(w.sigma, rule_degree(w, nmax), spec)

    def ip(a, b):
        return rule.integrate(lambda u: npoly.polyval(u, a) * npoly.polyval(u, b))

    alpha = np.zeros((nmax + 1, nmax + 1))
    alpha[0, 0] = 1.0
    for n in range(1, nmax + 1):
        e = np.zeros(nmax + 1)
        e[n] = 1.0
        v = e.copy()
        for k in range(n):
            v -= ip(e, alpha[k]) * alpha[k]
        nrm2 = ip(v, v)
        if not nrm2 > 0:
            raise NumericalBreakdownError(f"Gram-Schmidt norm at n={n} is not positive")
        alpha[n] = v / math.sqrt(nrm2)

    beta = np.ones(nmax + 1)
    offdiag = np.zeros(nmax + 1)
    diag = np.zeros(nmax + 1)
    x = np.array([0.0, 1.0])
    for n in range(1, nmax + 1):
        beta[n] = alpha[n, n] / alpha[n - 1, n - 1]
        diag[n] = ip(npoly.polymul(x, alpha[n - 1]), alpha[n - 1])
        if n >= 2:
            offdiag[n] = ip(npoly.polymul(x, alpha[n - 1]), alpha[n - 2])
    for arr in (beta, offdiag, diag, alpha):
        arr.setflags(write=False)
    return OrthoBasis(nmax, beta, offdiag, diag, alpha, w, rule, GRAM_SCHMIDT)


def moment(w: VirialWeight, n: int, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``<u^n>_0 = integral u^n sigma_v du``; odd orders are exactly 0."""
    if n < 0:
        raise InvalidArgumentError("moment order must be >= 0")
    if n % 2:
        return 0.0
    return integrate_weighted(lambda u: u**n, w.sigma, spec)


def eval_poly(b: OrthoBasis, n: int, u, monomial: bool = False):
    """``phi_n(u)`` by the recurrence (or by Horner on ``alpha`` if ``monomial``)."""
    b._check_n(n)
    if monomial or b.method != RECURRENCE:
        return b.monomial(n, u)
    u = np.asarray(u, dtype=float)
    return b.values(u)[n].reshape(u.shape)


def virial_condition_residual(b: OrthoBasis, n: int) -> float:
    """``(phi_n, phi_n'')`` under ``sigma_v``; zero for a true orthogonal family."""
    b._check_n(n)
    if n < 2:
        return 0.0
    c = b.alpha[n, : n + 1]
    dd = npoly.polyder(c, 2)
    u = b.rule.nodes
    return b.rule.integrate_even(npoly.polyval(u, c) * npoly.polyval(u, dd))


def gram_matrix(b: OrthoBasis, rule: SymmetricRule | None = None) -> np.ndarray:
    """``G_ij = (phi_i, phi_j)`` on ``rule`` (defaults to the construction rule)."""
    rule = rule or b.rule
    xs, ws = rule.full()
    P = b.values(xs)
    return (P * ws) @ P.T
