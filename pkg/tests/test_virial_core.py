import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from virial_ansatz import ConvexityError, InvalidArgumentError, Potential, build_g, build_weight
from virial_ansatz.errors import NotFoundError
from virial_ansatz.quadrature import integrate_weighted
from virial_ansatz.virial_core import (
    CLOSED_FORM_AHO,
    CLOSED_FORM_HO,
    QUADRATURE,
    inflection_points,
    virial_weight,
)


def test_mode_selection():
    assert build_g(Potential.harmonic(1.0)).mode == CLOSED_FORM_HO
    assert build_g(Potential.quartic(1.0, 0.3)).mode == CLOSED_FORM_AHO
    assert build_g(Potential.even_polynomial([0.5, 0.1, 0.01])).mode == QUADRATURE
    with pytest.raises(InvalidArgumentError):
        build_g(Potential.harmonic(1.0), mode=CLOSED_FORM_AHO)


def test_rejects_nonconvex_potential():
    with pytest.raises(ConvexityError):
        build_g(Potential.even_polynomial([0.5, -0.01]))


def test_g_examples():
    assert build_g(Potential.harmonic(1.0)).value(2.0) == pytest.approx(2.0)
    assert build_g(Potential.harmonic(2.0)).value(1.0) == pytest.approx(1.0)
    g = build_g(Potential.quartic(1.0, 0.25))
    u = np.linspace(-3, 3, 13)
    assert np.allclose(g.value(u), -(1.0 / 3.0) * (1.0 - (1.0 + u * u) ** 1.5), rtol=1e-13, atol=1e-15)
    assert g.value(0.0) == 0.0


def test_g_small_lambda_limit():
    g = build_g(Potential.quartic(1.0, 1e-8))
    assert g.value(1.0) == pytest.approx(0.5, abs=1e-6)


def test_quadrature_matches_closed_form():
    p = Potential.quartic(1.0, 0.25)
    gq = build_g(p, mode=QUADRATURE)
    gc = build_g(p)
    u = np.array([0.5, 1.0, 2.0])
    assert np.allclose(gq.value(u), gc.value(u), rtol=1e-10, atol=0)


def test_g_prime_examples():
    assert build_g(Potential.harmonic(1.0)).prime(-2.0) == pytest.approx(-2.0)
    assert build_g(Potential.quartic(1.0, 0.5)).prime(1.0) == pytest.approx(math.sqrt(3.0))
    for p in (Potential.harmonic(1.0), Potential.quartic(1.0, 2.0), Potential.even_polynomial([0, 1.0])):
        assert build_g(p).prime(0.0) == 0.0


def test_normalization_constant():
    assert virial_weight(Potential.harmonic(1.0)).norm == pytest.approx((1 / math.pi) ** 0.25, rel=1e-13)
    assert virial_weight(Potential.harmonic(4.0)).norm == pytest.approx((4 / math.pi) ** 0.25, rel=1e-13)
    w = virial_weight(Potential.quartic(1.0, 0.05, 4.0))
    assert integrate_weighted(lambda u: np.ones_like(u), w.sigma) == pytest.approx(1.0, abs=1e-10)


def test_inflection_points():
    lo, hi = inflection_points(virial_weight(Potential.harmonic(1.0)))
    assert hi == pytest.approx(1.0, abs=1e-9) and lo == -hi
    assert inflection_points(virial_weight(Potential.harmonic(4.0)))[1] == pytest.approx(0.5, abs=1e-9)


def test_inflection_not_found():
    from dataclasses import replace

    from virial_ansatz.quadrature import Interval

    # chi_v'' keeps one sign on a window well inside the inflection radius
    w = virial_weight(Potential.harmonic(1.0))
    with pytest.raises(NotFoundError):
        inflection_points(replace(w, domain=Interval(-0.5, 0.5)))


params = st.tuples(st.floats(0.2, 4.0), st.floats(0.0, 6.0), st.floats(-5, 5))


@settings(max_examples=40, deadline=None)
@given(params)
def test_g_properties(par):
    omega, lam, xi = par
    p = Potential.quartic(omega, lam, xi)
    g = build_g(p)
    u = np.linspace(-6, 6, 241)
    gv = g.value(u)
    # parity, minimum at 0, convexity, local virial identity
    assert np.array_equal(gv, g.value(-u))
    assert np.all(gv >= 0) and g.value(0.0) == 0.0
    nz = u[u != 0]
    assert np.all(g.second(nz) > 0)
    assert np.allclose(g.prime(nz) ** 2, p.virial_radicand(nz), rtol=1e-12)
    # monotone away from the origin
    pos = gv[u >= 0]
    assert np.all(np.diff(pos) > 0)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(0.05, 3.0), min_size=1, max_size=3))
def test_quadrature_g_derivative_consistency(coeffs):
    g = build_g(Potential.even_polynomial(coeffs))
    u = np.linspace(0.1, 3.0, 15)
    h = 1e-4
    fd = (g.value(u + h) - g.value(u - h)) / (2 * h)
    assert np.allclose(fd, g.prime(u), rtol=1e-6)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.3, 3.0), st.floats(0.0, 3.0))
def test_chi_log_concave(omega, lam):
    w = virial_weight(Potential.quartic(omega, lam))
    u = np.linspace(-w.domain.hi, w.domain.hi, 401)
    logc = w.log_chi(u)
    assert np.all(np.diff(logc, 2) < 1e-12)
    assert np.allclose(w.chi(u), w.chi(-u), rtol=0, atol=0)
