"""The g-function, the virial chi-function and the virial weight.

For a potential written in the shifted frame ``u = x - xi``::

    g'(u)   = sign(u) sqrt(u U'(xi + u))       (g(0) = 0)
    chi_v   = N exp(-g)
    sigma_v = chi_v**2

``chi_v`` satisfies ``[(ln chi_v^2)']^2 = 4 u U'`` pointwise, which is the
local form of the virial theorem.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import _kernels
from .errors import AccuracyError, ConvexityError, InvalidArgumentError, NotFoundError
from .potential import Potential, check_strict_convexity
from .quadrature import (
    DEFAULT_SPEC,
    Interval,
    QuadratureSpec,
    gauss_legendre,
    integrate_finite,
    truncation_domain,
)

CLOSED_FORM_HO = "closed_form_ho"
CLOSED_FORM_AHO = "closed_form_aho"
QUADRATURE = "quadrature"
MODES = (CLOSED_FORM_HO, CLOSED_FORM_AHO, QUADRATURE)

# composite Gauss-Legendre used by quadrature-mode g
_G_ORDER = 20
_G_CHECK_ORDER = 12
_G_PANEL = 0.125


@dataclass(frozen=True)
class GFunction:
    """Even, strictly convex antiderivative of ``sqrt(u U'(xi+u))``.

    ``k`` and ``q`` factor the radicand as ``u U' = u^(2k) q(u^2)`` with
    ``q(0) > 0``; the derivatives below are evaluated from that factored
    form so they never take the square root of a rounding-negative number.
    """

    potential: Potential
    mode: str
    k: int
    q: np.ndarray
    spec: QuadratureSpec = DEFAULT_SPEC

    def _sqrt_q(self, s):
        qs = npoly.polyval(s, self.q)
        if np.any(qs < 0):
            raise ConvexityError("negative virial radicand u U'(u); potential is not convex here")
        return np.sqrt(qs)

    def __call__(self, u):
        return self.value(u)

    def value(self, u):
        u = np.asarray(u, dtype=float)
        p = self.potential
        if self.mode == CLOSED_FORM_HO:
            return 0.5 * p.omega * u * u
        if self.mode == CLOSED_FORM_AHO:
            # omega^3/(12 lam) [(1+z)^(3/2) - 1] = (omega u^2 / 3) h(z), z = 4 lam u^2/omega^2,
            # with h(z) = ((1+z)^(3/2) - 1)/z -> 3/2; finite for any lam >= 0
            z = 4.0 * p.lam * u * u / (p.omega * p.omega)
            safe = np.where(z > 0, z, 1.0)
            h = np.where(z > 0, np.expm1(1.5 * np.log1p(safe)) / safe, 1.5)
            return p.omega * u * u / 3.0 * h
        return self._quadrature_value(u)

    def _quadrature_value(self, u):
        flat = np.abs(u).ravel()
        order = np.argsort(flat, kind="stable")
        t = np.ascontiguousarray(flat[order])
        x, w = gauss_legendre(_G_ORDER)
        xc, wc = gauss_legendre(_G_CHECK_ORDER)
        q = np.ascontiguousarray(self.q, dtype=float)
        vals = _kernels.g_cumulative(t, self.k, q, x, w, _G_PANEL)
        check = _kernels.g_cumulative(t, self.k, q, xc, wc, _G_PANEL)
        err = np.abs(vals - check)
        tol = np.maximum(self.spec.abs_tol, self.spec.rel_tol * np.abs(vals))
        if np.any(err > tol):
            i = int(np.argmax(err - tol))
            raise AccuracyError(
                f"g quadrature at |u|={t[i]:g} missed tolerance", float(vals[i]), float(err[i])
            )
        out = np.empty_like(flat)
        out[order] = vals
        return out.reshape(u.shape)

    def prime(self, u):
        """``g'(u)``: negative for ``u < 0``, positive for ``u > 0``, 0 at 0."""
        u = np.asarray(u, dtype=float)
        a = np.abs(u)
        return np.sign(u) * a**self.k * self._sqrt_q(u * u)

    def second(self, u):
        """``g''(u)``, even; equals ``k sqrt(2k a_k) |u|^(k-1)`` as ``u -> 0``."""
        u = np.asarray(u, dtype=float)
        a = np.abs(u)
        s = u * u
        sq = self._sqrt_q(s)
        dq = npoly.polyval(s, npoly.polyder(self.q)) if self.q.size > 1 else np.zeros_like(s)
        return self.k * a ** (self.k - 1) * sq + a ** (self.k + 1) * dq / sq


def build_g(p: Potential, mode: str | None = None, spec: QuadratureSpec = DEFAULT_SPEC) -> GFunction:
    """Choose the closed form for HO/AHO, quadrature otherwise.

    ``mode`` forces a particular evaluation route; the closed forms are only
    accepted for the matching potential kind.
    """
    report = check_strict_convexity(p)
    if not report.is_strictly_convex:
        x, r = (report.witnesses or report.curvature_witnesses)[0]
        raise ConvexityError(f"potential {p.describe()} is not strictly convex (x={x:g}, value={r:g})")
    if mode is None:
        mode = {"ho": CLOSED_FORM_HO, "aho": CLOSED_FORM_AHO}.get(p.kind, QUADRATURE)
    if mode not in MODES:
        raise InvalidArgumentError(f"unknown g mode {mode!r}")
    if mode == CLOSED_FORM_HO and p.kind != "ho":
        raise InvalidArgumentError("closed-form HO g requires a harmonic potential")
    if mode == CLOSED_FORM_AHO and p.kind not in ("aho",):
        raise InvalidArgumentError("closed-form AHO g requires a quartic anharmonic potential")
    k, q = p.radicand_factor
    q.setflags(write=False)
    return GFunction(p, mode, k, q, spec)


@dataclass(frozen=True)
class VirialWeight:
    """Normalized ``chi_v = N exp(-g)`` and ``sigma_v = chi_v^2``."""

    g: GFunction
    norm: float
    domain: Interval
    spec: QuadratureSpec

    @property
    def potential(self) -> Potential:
        return self.g.potential

    def log_chi(self, u):
        return math.log(self.norm) - self.g.value(u)

    def chi(self, u):
        return np.exp(self.log_chi(u))

    def sigma(self, u):
        return np.exp(2.0 * self.log_chi(u))

    def chi_prime(self, u):
        return -self.g.prime(u) * self.chi(u)


def build_weight(g: GFunction, spec: QuadratureSpec = DEFAULT_SPEC) -> VirialWeight:
    """Normalize ``exp(-2 g)`` over its truncation domain."""

    def w(u):
        return np.exp(-2.0 * g.value(u))

    domain = truncation_domain(w, spec)
    z = 2.0 * integrate_finite(w, (0.0, domain.hi), spec)
    return VirialWeight(g, 1.0 / math.sqrt(z), domain, spec)


def virial_weight(p: Potential, spec: QuadratureSpec = DEFAULT_SPEC, mode: str | None = None) -> VirialWeight:
    """Shortcut for ``build_weight(build_g(p), spec)``."""
    return build_weight(build_g(p, mode, spec), spec)


def inflection_points(w: VirialWeight, samples: int = 1024, tol: float = 1e-10) -> tuple[float, float]:
    """First symmetric pair of roots of ``g'^2 - g''`` (zeros of ``chi_v''``)."""
    g = w.g

    def f(u):
        return g.prime(u) ** 2 - g.second(u)

    L = w.domain.hi
    us = np.linspace(0.0, L, samples + 1)[1:]
    fs = f(us)
    idx = np.flatnonzero(np.sign(fs[1:]) != np.sign(fs[:-1]))
    if fs[0] >= 0:
        raise NotFoundError("chi_v'' is not negative near the origin; bracket scan failed")
    if idx.size == 0:
        raise NotFoundError("chi_v'' does not change sign on the truncation domain")
    lo, hi = float(us[idx[0]]), float(us[idx[0] + 1])
    flo = f(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if np.sign(fm) == np.sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
    r = 0.5 * (lo + hi)
    return -r, r
