"""Numeric inner loops, in a numpy flavour and a numba flavour.

The public names at the bottom of the module resolve to the numba
versions when :data:`virial_ansatz._accel.USE_NUMBA` is true.  Both
flavours take and return plain float64 arrays so they can be swapped
freely and compared in tests and benchmarks.
"""
import math

import numpy as np

from ._accel import USE_NUMBA, njit

# ---------------------------------------------------------------------------
# cumulative integral of the virial integrand  t^k sqrt(q(t^2))  from 0
# ---------------------------------------------------------------------------


def g_cumulative_numpy(t, k, q, x, w, hmax):
    """Integrals of ``s^k sqrt(polyval(s^2, q))`` from 0 to each ``t[i]``.

    ``t`` must be sorted ascending and non-negative.  Each gap between
    consecutive points is cut into panels no wider than ``hmax`` and
    integrated with the Gauss-Legendre rule ``(x, w)`` on ``[-1, 1]``.
    """
    gaps = np.diff(t, prepend=0.0)
    counts = np.maximum(1, np.ceil(gaps / hmax)).astype(np.int64)
    owner = np.repeat(np.arange(t.size), counts)
    first = np.cumsum(counts) - counts
    j = np.arange(owner.size) - first[owner]
    h = gaps[owner] / counts[owner]
    start = t[owner] - gaps[owner] + j * h
    s = (start + 0.5 * h)[:, None] + (0.5 * h)[:, None] * x[None, :]
    s2 = s * s
    poly = np.zeros_like(s)
    for c in q[::-1]:
        poly = poly * s2 + c
    f = s**k * np.sqrt(poly)
    panel = 0.5 * h * (f @ w)
    per_point = np.bincount(owner, weights=panel, minlength=t.size)
    return np.cumsum(per_point)


@njit
def g_cumulative_loop(t, k, q, x, w, hmax):
    n = t.shape[0]
    out = np.empty(n)
    acc = 0.0
    prev = 0.0
    for i in range(n):
        gap = t[i] - prev
        m = max(1, int(math.ceil(gap / hmax)))
        h = gap / m
        for j in range(m):
            mid = prev + (j + 0.5) * h
            part = 0.0
            for r in range(x.shape[0]):
                s = mid + 0.5 * h * x[r]
                s2 = s * s
                poly = 0.0
                for c in range(q.shape[0] - 1, -1, -1):
                    poly = poly * s2 + q[c]
                part += w[r] * s**k * math.sqrt(poly)
            acc += 0.5 * h * part
        out[i] = acc
        prev = t[i]
    return out


# ---------------------------------------------------------------------------
# three-term recurrence  phi_n = beta_n (u phi_{n-1} - c_n phi_{n-2})
# ---------------------------------------------------------------------------


def recurrence_numpy(u, beta, offdiag):
    """Values, first and second derivatives of ``phi_0..phi_nmax`` at ``u``.

    Returns an array of shape ``(3, nmax + 1, u.size)``.
    """
    nmax = beta.shape[0] - 1
    out = np.zeros((3, nmax + 1, u.size))
    p, d1, d2 = out
    p[0] = 1.0
    if nmax >= 1:
        p[1] = beta[1] * u
        d1[1] = beta[1]
    for n in range(2, nmax + 1):
        c = offdiag[n]
        p[n] = beta[n] * (u * p[n - 1] - c * p[n - 2])
        d1[n] = beta[n] * (p[n - 1] + u * d1[n - 1] - c * d1[n - 2])
        d2[n] = beta[n] * (2.0 * d1[n - 1] + u * d2[n - 1] - c * d2[n - 2])
    return out


@njit
def recurrence_loop(u, beta, offdiag):
    nmax = beta.shape[0] - 1
    m = u.shape[0]
    out = np.zeros((3, nmax + 1, m))
    for i in range(m):
        ui = u[i]
        p2 = 0.0
        d2_1 = 0.0
        dd2 = 0.0
        p1 = 1.0
        d1_1 = 0.0
        dd1 = 0.0
        out[0, 0, i] = 1.0
        for n in range(1, nmax + 1):
            c = offdiag[n] if n >= 2 else 0.0
            p = beta[n] * (ui * p1 - c * p2)
            d = beta[n] * (p1 + ui * d1_1 - c * d2_1)
            dd = beta[n] * (2.0 * d1_1 + ui * dd1 - c * dd2)
            out[0, n, i] = p
            out[1, n, i] = d
            out[2, n, i] = dd
            p2, d2_1, dd2 = p1, d1_1, dd1
            p1, d1_1, dd1 = p, d, dd
    return out


if USE_NUMBA:
    g_cumulative = g_cumulative_loop
    recurrence = recurrence_loop
else:
    g_cumulative = g_cumulative_numpy
    recurrence = recurrence_numpy
