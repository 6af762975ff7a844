import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from virial_ansatz import ConvexityError, InvalidArgumentError, Potential, check_strict_convexity
from virial_ansatz.potential import leading_order, turning_point


def test_values():
    assert Potential.harmonic(1.0).evaluate(0.0) == 0.0
    assert Potential.quartic(1.0, 1.0, 4.0).evaluate(5.0) == pytest.approx(1.5)
    assert Potential.even_polynomial([0.5]).evaluate(2.0) == pytest.approx(2.0)


def test_first_derivative():
    assert Potential.quartic(1.0, 1.0).derivative(1.0) == pytest.approx(5.0)
    assert Potential.harmonic(2.0).derivative(3.0) == pytest.approx(12.0)
    for p in (Potential.harmonic(1.0, 3.0), Potential.quartic(2.0, 0.3, -1.0), Potential.even_polynomial([0, 0, 2], 0.5)):
        assert p.derivative(p.xi) == 0.0


def test_second_derivative():
    assert np.allclose(Potential.harmonic(1.0).second_derivative(np.linspace(-3, 3, 7)), 1.0)
    assert Potential.quartic(1.0, 1.0).second_derivative(1.0) == pytest.approx(13.0)
    assert Potential.even_polynomial([0.5]).second_derivative(0.0) == pytest.approx(1.0)


def test_convexity_reports():
    rep = check_strict_convexity(Potential.quartic(1.0, 0.05, 4.0))
    assert rep.is_strictly_convex and rep.witnesses == []
    assert check_strict_convexity(Potential.even_polynomial([0.0, 1.0])).is_strictly_convex


def test_rejections():
    with pytest.raises(ConvexityError):
        Potential.even_polynomial([-1.0])
    with pytest.raises(ConvexityError):
        Potential.even_polynomial([0.0, 0.0])
    with pytest.raises(InvalidArgumentError):
        Potential.harmonic(0.0)
    with pytest.raises(InvalidArgumentError):
        Potential.quartic(1.0, -0.1)
    with pytest.raises(InvalidArgumentError):
        check_strict_convexity(Potential.harmonic(1.0), samples=2)


def test_non_convex_tail_is_witnessed():
    # a_1 > 0 but a_2 < 0: the sign rule passes, sampling must catch the turnover
    rep = check_strict_convexity(Potential.even_polynomial([0.5, -0.01]))
    assert not rep.is_strictly_convex
    assert rep.witnesses and all(r <= 0 for _, r in rep.witnesses)


def test_leading_order():
    assert leading_order(Potential.harmonic(1.0)) == (1, 0.5)
    assert leading_order(Potential.quartic(1.0, 5.0)) == (1, 0.5)
    assert leading_order(Potential.even_polynomial([0.0, 3.0])) == (2, 3.0)


def test_dict_round_trip():
    for p in (Potential.harmonic(2.0, 1.0), Potential.quartic(1.0, 0.25, 4.0), Potential.even_polynomial([0.5, 1.0])):
        assert Potential.from_dict(p.to_dict()) == p
    with pytest.raises(InvalidArgumentError):
        Potential.from_dict({"kind": "cubic"})
    with pytest.raises(InvalidArgumentError):
        Potential.from_dict({"kind": "aho", "omega": 1.0})


def test_turning_point():
    assert turning_point(Potential.harmonic(1.0), 16.5) == pytest.approx(math.sqrt(33.0), rel=1e-12)


coeff_lists = st.lists(st.floats(0.0, 5.0), min_size=1, max_size=4).filter(lambda c: c[0] > 0 or any(c))


@settings(max_examples=60, deadline=None)
@given(coeff_lists.filter(lambda c: min(c) >= 0 and any(v > 1e-3 for v in c)), st.floats(-10, 10))
def test_nonnegative_coefficients_are_convex(coeffs, xi):
    p = Potential.even_polynomial(coeffs, xi)
    assert check_strict_convexity(p, half_width=5.0, samples=401).is_strictly_convex


@settings(max_examples=60, deadline=None)
@given(st.floats(0.1, 5), st.floats(0, 5), st.floats(-5, 5), st.floats(0.01, 4))
def test_even_about_minimum(omega, lam, xi, u):
    p = Potential.quartic(omega, lam, xi)
    assert p.evaluate(xi + u) == pytest.approx(p.evaluate(xi - u), rel=1e-14)
    assert p.derivative(xi + u) == pytest.approx(-p.derivative(xi - u), rel=1e-14)
    assert (u * p.derivative(xi + u)) > 0
