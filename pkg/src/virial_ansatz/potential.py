"""Symmetric strictly convex potentials.

Every supported family is an even polynomial in the shifted coordinate
``u = x - xi``::

    U(xi + u) = sum_{n>=1} a_n u**(2n)

so all derivatives are exact coefficient manipulations.  ``coeffs[i]``
holds ``a_{i+1}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import ConvexityError, InvalidArgumentError

KIND_ALIASES = {
    "ho": "ho",
    "harmonic": "ho",
    "aho": "aho",
    "quartic": "aho",
    "quartic_anharmonic": "aho",
    "even_poly": "even_poly",
    "even_polynomial": "even_poly",
}


@dataclass(frozen=True)
class Potential:
    """Even polynomial potential centred at ``xi``.

    Use the :meth:`harmonic`, :meth:`quartic` and :meth:`even_polynomial`
    constructors rather than building instances directly.
    """

    kind: str
    coeffs: tuple[float, ...]
    xi: float = 0.0
    omega: float | None = None
    lam: float | None = None
    _d1: np.ndarray = field(init=False, repr=False, compare=False)
    _d2: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in ("ho", "aho", "even_poly"):
            raise InvalidArgumentError(f"unknown potential kind {self.kind!r}")
        a = np.asarray(self.coeffs, dtype=float)
        if a.ndim != 1 or a.size == 0 or not np.all(np.isfinite(a)):
            raise InvalidArgumentError("coeffs must be a non-empty list of finite numbers")
        if not math.isfinite(self.xi):
            raise InvalidArgumentError("xi must be finite")
        nz = np.flatnonzero(a)
        if nz.size == 0:
            raise ConvexityError("all expansion coefficients vanish; U is not strictly convex")
        if a[nz[0]] < 0:
            raise ConvexityError(
                f"leading coefficient a_{nz[0] + 1} = {a[nz[0]]} is negative; "
                "U has a maximum at xi"
            )
        n = np.arange(1, a.size + 1)
        # U'(xi+u) = u * d1(u^2), U''(xi+u) = d2(u^2)
        object.__setattr__(self, "_d1", 2.0 * n * a)
        object.__setattr__(self, "_d2", 2.0 * n * (2.0 * n - 1.0) * a)

    # -- constructors ------------------------------------------------------

    @classmethod
    def harmonic(cls, omega: float, xi: float = 0.0) -> "Potential":
        if not omega > 0:
            raise InvalidArgumentError("omega must be positive")
        return cls("ho", (0.5 * omega * omega,), float(xi), float(omega), None)

    @classmethod
    def quartic(cls, omega: float, lam: float, xi: float = 0.0) -> "Potential":
        """``U = omega^2 (x-xi)^2 / 2 + lam (x-xi)^4``."""
        if not omega > 0:
            raise InvalidArgumentError("omega must be positive")
        if not lam >= 0:
            raise InvalidArgumentError("lambda must be non-negative")
        return cls("aho", (0.5 * omega * omega, float(lam)), float(xi), float(omega), float(lam))

    @classmethod
    def even_polynomial(cls, coeffs, xi: float = 0.0) -> "Potential":
        return cls("even_poly", tuple(float(c) for c in coeffs), float(xi))

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Potential":
        """Parse the JSON config form, e.g. ``{"kind": "aho", "omega": 1, "lambda": 0.25}``."""
        if not isinstance(d, dict) or "kind" not in d:
            raise InvalidArgumentError("potential spec must be an object with a 'kind' key")
        kind = KIND_ALIASES.get(str(d["kind"]).lower())
        if kind is None:
            raise InvalidArgumentError(f"unknown potential kind {d['kind']!r}")
        try:
            xi = float(d.get("xi", 0.0))
            if kind == "ho":
                return cls.harmonic(float(d.get("omega", 1.0)), xi)
            if kind == "aho":
                if "lambda" not in d:
                    raise InvalidArgumentError("aho potential requires 'lambda'")
                return cls.quartic(float(d.get("omega", 1.0)), float(d["lambda"]), xi)
            if "coeffs" not in d:
                raise InvalidArgumentError("even_poly potential requires 'coeffs'")
            return cls.even_polynomial(d["coeffs"], xi)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, InvalidArgumentError):
                raise
            raise InvalidArgumentError(f"malformed potential spec: {exc}") from exc

    def to_dict(self) -> dict[str, Any]:
        if self.kind == "ho":
            return {"kind": "ho", "omega": self.omega, "xi": self.xi}
        if self.kind == "aho":
            return {"kind": "aho", "omega": self.omega, "lambda": self.lam, "xi": self.xi}
        return {"kind": "even_poly", "coeffs": list(self.coeffs), "xi": self.xi}

    def describe(self) -> str:
        if self.kind == "ho":
            return f"ho(omega={self.omega:g}, xi={self.xi:g})"
        if self.kind == "aho":
            return f"aho(omega={self.omega:g}, lambda={self.lam:g}, xi={self.xi:g})"
        cs = ",".join(f"{c:g}" for c in self.coeffs)
        return f"even_poly(coeffs=[{cs}], xi={self.xi:g})"

    # -- shifted frame -----------------------------------------------------

    def reduced(self, u):
        """``U(xi + u)``."""
        u = np.asarray(u, dtype=float)
        s = u * u
        return s * npoly.polyval(s, np.asarray(self.coeffs))

    def reduced_derivative(self, u):
        """``U'(xi + u)``."""
        u = np.asarray(u, dtype=float)
        return u * npoly.polyval(u * u, self._d1)

    def reduced_second_derivative(self, u):
        """``U''(xi + u)``."""
        u = np.asarray(u, dtype=float)
        return npoly.polyval(u * u, self._d2)

    def virial_radicand(self, u):
        """``u U'(xi + u)``, non-negative for a strictly convex potential."""
        u = np.asarray(u, dtype=float)
        s = u * u
        return s * npoly.polyval(s, self._d1)

    # -- original frame ----------------------------------------------------

    def evaluate(self, x):
        return self.reduced(np.asarray(x, dtype=float) - self.xi)

    def derivative(self, x):
        return self.reduced_derivative(np.asarray(x, dtype=float) - self.xi)

    def second_derivative(self, x):
        return self.reduced_second_derivative(np.asarray(x, dtype=float) - self.xi)

    @property
    def radicand_factor(self) -> tuple[int, np.ndarray]:
        """``(k, q)`` with ``u U'(xi+u) = u^(2k) * polyval(u^2, q)`` and ``q[0] > 0``."""
        k, _ = leading_order(self)
        return k, self._d1[k - 1:].copy()


@dataclass
class ConvexityReport:
    is_strictly_convex: bool
    witnesses: list[tuple[float, float]]
    curvature_witnesses: list[tuple[float, float]]
    grid_spec: str


def check_strict_convexity(p: Potential, half_width: float = 20.0, samples: int = 2001) -> ConvexityReport:
    """Sample ``(x - xi) U'(x) > 0`` and ``U''(x) >= 0`` on a symmetric grid.

    The grid is ``samples`` points on ``[xi - half_width, xi + half_width]``
    with ``x = xi`` itself dropped.  Every violating sample is reported.
    """
    if samples < 3:
        raise InvalidArgumentError("samples must be >= 3")
    if not half_width > 0:
        raise InvalidArgumentError("half_width must be positive")
    u = np.linspace(-half_width, half_width, samples)
    u = u[u != 0.0]
    r = p.virial_radicand(u)
    c = p.reduced_second_derivative(u)
    bad = ~(r > 0)
    witnesses = [(float(p.xi + ui), float(ri)) for ui, ri in zip(u[bad], r[bad])]
    bad_c = c < 0
    curvature = [(float(p.xi + ui), float(ci)) for ui, ci in zip(u[bad_c], c[bad_c])]
    ok = not witnesses and not curvature
    spec = f"{u.size} points on [xi-{half_width:g}, xi+{half_width:g}] excluding xi"
    return ConvexityReport(ok, witnesses, curvature, spec)


def leading_order(p: Potential) -> tuple[int, float]:
    """First non-zero ``(k, a_k)`` of the expansion ``sum a_n u^(2n)``."""
    a = np.asarray(p.coeffs)
    nz = np.flatnonzero(a)
    if nz.size == 0:
        raise InvalidArgumentError("potential has no non-zero expansion coefficient")
    return int(nz[0]) + 1, float(a[nz[0]])


def turning_point(p: Potential, energy: float) -> float:
    """Positive ``u`` with ``U(xi + u) = energy`` (classical return point)."""
    if not energy > 0:
        raise InvalidArgumentError("energy must be above the minimum U(xi) = 0")
    hi = 1.0
    while p.reduced(hi) < energy:
        hi *= 2.0
        if hi > 1e12:
            raise InvalidArgumentError("potential does not reach the requested energy")
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if p.reduced(mid) < energy:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-14 * hi:
            break
    return 0.5 * (lo + hi)
