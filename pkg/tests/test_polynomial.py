from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperladder.polynomial import Polynomial, as_rational

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
polys = st.lists(rationals, max_size=6).map(Polynomial)


def test_trailing_zeros_are_stripped():
    p = Polynomial([1, 2, 0, 0])
    assert p.degree == 1
    assert p.coeffs == (Fraction(1), Fraction(2))
    assert Polynomial([0, 0]).degree == -1
    assert Polynomial([]).is_zero()


def test_floats_are_rejected():
    with pytest.raises(TypeError):
        as_rational(0.5)
    with pytest.raises(TypeError):
        Polynomial([0.5])
    assert as_rational("3/6") == Fraction(1, 2)


def test_fractions_stay_reduced():
    p = Polynomial(["2/4", "-6/8"])
    assert p.coeffs == (Fraction(1, 2), Fraction(-3, 4))
    assert all(c.denominator > 0 for c in (p * p).coeffs)


def test_derivative_and_evaluation():
    p = Polynomial(["-1/2", 0, "3/2"])
    assert p.derivative() == Polynomial([0, 3])
    assert p.derivative(2) == Polynomial.constant(3)
    assert p.derivative(3).is_zero()
    assert p(Fraction(1)) == 1
    assert p(1.0) == pytest.approx(1.0)
    np.testing.assert_allclose(p.evaluate_float([0.0, 1.0]), [-0.5, 1.0])


def test_json_roundtrip():
    p = Polynomial(["-1/2", 0, "3/2"])
    assert p.to_json() == ["-1/2", "0", "3/2"]
    assert Polynomial.from_json(p.to_json()) == p


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        Polynomial([1]).divmod(Polynomial([]))
    with pytest.raises(ZeroDivisionError):
        Polynomial([1]) / 0


@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert p * (q + r) == p * q + p * r
    assert (p - p).is_zero()


@given(polys, polys)
def test_product_rule(p, q):
    assert (p * q).derivative() == p.derivative() * q + p * q.derivative()


@given(polys, polys.filter(lambda d: not d.is_zero()))
def test_divmod_identity(p, d):
    quo, rem = p.divmod(d)
    assert quo * d + rem == p
    assert rem.degree < d.degree


@given(polys, polys, rationals)
def test_evaluation_is_a_homomorphism(p, q, x):
    assert (p * q)(x) == p(x) * q(x)
    assert (p + q)(x) == p(x) + q(x)
