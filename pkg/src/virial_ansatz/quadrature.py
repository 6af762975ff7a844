"""Gauss-Legendre quadrature on finite intervals and against decaying weights.

Two engines live here:

* :func:`integrate_finite` -- globally adaptive composite Gauss-Legendre
  with bisection refinement, for arbitrary vectorized integrands.
* :class:`SymmetricRule` -- a fixed, mirror-symmetric composite rule for a
  given even weight, refined until weighted polynomial moments up to a
  requested degree have converged.  Inner products of polynomials against
  the virial weight reduce to dot products with its nodes and weights.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import AccuracyError, DomainError, InvalidArgumentError

PANEL_ORDER = 10
MAX_HALF_WIDTH = 1.0e6


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-12
    abs_tol: float = 1e-14
    truncation_threshold: float = 1e-18
    max_subdivisions: int = 2**14

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "truncation_threshold"):
            if not getattr(self, name) > 0:
                raise InvalidArgumentError(f"{name} must be positive")
        if self.max_subdivisions < 2:
            raise InvalidArgumentError("max_subdivisions must be >= 2")

    def tolerance(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


DEFAULT_SPEC = QuadratureSpec()


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise InvalidArgumentError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def half_width(self) -> float:
        return 0.5 * (self.hi - self.lo)

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on ``[-1, 1]``."""
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _as_interval(iv) -> Interval:
    if isinstance(iv, Interval):
        return iv
    lo, hi = iv
    return Interval(float(lo), float(hi))


def _panel_values(f, a, b, x, w):
    # coarse rule on [a, b] and the sum of the same rule on both halves
    m = 0.5 * (a + b)
    r, hr = 0.5 * (b - a), 0.25 * (b - a)
    pts = np.concatenate([m + r * x, 0.5 * (a + m) + hr * x, 0.5 * (m + b) + hr * x])
    fx = np.asarray(f(pts), dtype=float)
    if fx.shape != pts.shape:
        fx = np.broadcast_to(fx, pts.shape)
    n = x.size
    coarse = r * np.dot(w, fx[:n])
    left = hr * np.dot(w, fx[n:2 * n])
    right = hr * np.dot(w, fx[2 * n:])
    return coarse, left, right


def integrate_finite(f: Callable, iv, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Adaptive composite Gauss-Legendre integral of ``f`` over ``iv``.

    ``f`` must accept and return numpy arrays.  The panel with the largest
    error estimate is bisected until the summed estimate drops below
    ``spec.tolerance(value)``.

    Raises
    ------
    AccuracyError
        If ``spec.max_subdivisions`` panels do not reach the tolerance.
    """
    iv = _as_interval(iv)
    x, w = gauss_legendre(PANEL_ORDER)
    heap = []
    total = 0.0
    err_total = 0.0

    def push(a, b):
        nonlocal total, err_total
        coarse, left, right = _panel_values(f, a, b, x, w)
        fine = left + right
        err = abs(fine - coarse)
        if not math.isfinite(fine):
            raise AccuracyError(f"non-finite integrand on [{a}, {b}]", fine, math.inf)
        total += fine
        err_total += err
        heapq.heappush(heap, (-err, a, b, fine))

    push(iv.lo, iv.hi)
    while err_total > spec.tolerance(total):
        if len(heap) >= spec.max_subdivisions:
            raise AccuracyError(
                f"integral did not converge within {spec.max_subdivisions} panels",
                total,
                err_total,
            )
        neg_err, a, b, fine = heapq.heappop(heap)
        total -= fine
        err_total += neg_err
        m = 0.5 * (a + b)
        push(a, m)
        push(m, b)
        # re-sum to keep roundoff from the running updates out of the test
        if len(heap) % 64 == 0:
            total = math.fsum(item[3] for item in heap)
            err_total = math.fsum(-item[0] for item in heap)
    return math.fsum(item[3] for item in heap)


def truncation_domain(w: Callable, spec: QuadratureSpec = DEFAULT_SPEC) -> Interval:
    """Symmetric ``[-L, L]`` with ``w(L) <= threshold * w(0)``.

    ``w`` must be even with ``w(0) > 0`` and decrease once past its
    largest value.  ``L`` is found by doubling from 1 then bisecting.
    """
    w0 = float(w(np.array([0.0]))[0])
    if not (w0 > 0 and math.isfinite(w0)):
        raise DomainError(f"weight at the origin must be positive and finite, got {w0}")
    cut = spec.truncation_threshold * w0

    def above(L):
        return float(w(np.array([L]))[0]) > cut

    hi = 1.0
    while above(hi):
        hi *= 2.0
        if hi > MAX_HALF_WIDTH:
            raise DomainError(f"weight does not decay below {cut:g} within |u| <= {MAX_HALF_WIDTH:g}")
    lo = 0.5 * hi if hi > 1.0 else 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if above(mid):
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-13 * hi:
            break
    return Interval(-hi, hi)


def integrate_weighted(f: Callable, w: Callable, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``integral f(u) w(u) du`` over the truncation domain of ``w``, split at 0."""
    L = truncation_domain(w, spec).hi

    def fw(u):
        return np.asarray(f(u), dtype=float) * w(u)

    return integrate_finite(fw, (-L, 0.0), spec) + integrate_finite(fw, (0.0, L), spec)


@dataclass(frozen=True)
class SymmetricRule:
    """Composite rule on ``[-L, L]`` stored by its positive half.

    ``weights`` already include the weight function, so
    ``integral f w du ~= sum(weights * (f(nodes) + f(-nodes)))``.
    """

    nodes: np.ndarray
    weights: np.ndarray
    half_width: float
    panels: int

    def integrate(self, f: Callable) -> float:
        return float(np.dot(self.weights, f(self.nodes) + f(-self.nodes)))

    def integrate_even(self, values) -> float:
        """Integral of an even function given its values at ``nodes``."""
        return 2.0 * float(np.dot(self.weights, values))

    def full(self) -> tuple[np.ndarray, np.ndarray]:
        """Nodes and weights on the whole of ``[-L, L]``, ascending."""
        return (
            np.concatenate([-self.nodes[::-1], self.nodes]),
            np.concatenate([self.weights[::-1], self.weights]),
        )


def _composite_half(L: float, panels: int, order: int = PANEL_ORDER):
    x, w = gauss_legendre(order)
    edges = np.linspace(0.0, L, panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    r = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + r[:, None] * x[None, :]).ravel()
    weights = (r[:, None] * w[None, :]).ravel()
    return nodes, weights


def build_symmetric_rule(
    w: Callable, degree: int, spec: QuadratureSpec = DEFAULT_SPEC
) -> SymmetricRule:
    """Refine a uniform composite rule for the even weight ``w``.

    The domain is the truncation domain of ``w(u) (1 + u^2)^(degree/2)`` so
    that the highest requested moment is resolved.  Panel counts double
    until the zeroth and ``degree``-th moments change by less than the
    tolerance.
    """
    if degree < 0:
        raise InvalidArgumentError("degree must be >= 0")
    half = degree / 2.0

    def tail(u):
        u = np.asarray(u, dtype=float)
        return w(u) * (1.0 + u * u) ** half

    L = truncation_domain(tail, spec).hi
    probes = (lambda u: np.ones_like(u), lambda u: u**degree)
    prev = None
    panels = 1
    while True:
        nodes, qw = _composite_half(L, panels)
        weights = qw * w(nodes)
        est = np.array([2.0 * np.dot(weights, p(nodes)) for p in probes])
        if prev is not None:
            if all(abs(e - q) <= spec.tolerance(e) for e, q in zip(est, prev)):
                return SymmetricRule(nodes, weights, L, panels)
        if 2 * panels > spec.max_subdivisions:
            raise AccuracyError(
                f"weighted rule did not converge within {spec.max_subdivisions} panels",
                est[-1],
                abs(est[-1] - prev[-1]) if prev is not None else math.inf,
            )
        prev = est
        panels *= 2
