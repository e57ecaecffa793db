from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cliffock.errors import InvalidInput
from cliffock.scalars import Q, QI, Scalar


def test_rational_arithmetic():
    a = Scalar(Fraction(1, 2))
    b = Scalar(Fraction(1, 3))
    assert (a + b) == Scalar(Fraction(5, 6))
    assert (a * b) == Scalar(Fraction(1, 6))
    assert (a - b) == Scalar(Fraction(1, 6))
    assert (a / b) == Scalar(Fraction(3, 2))
    assert a.conj() == a
    assert a.field == Q


def test_gaussian_arithmetic():
    i = Scalar.i()
    one = Scalar.one(QI)
    assert i * i == -one
    # (1+i)/(1-i) = i, worked by hand via conjugate of the denominator
    assert (one + i) / (one - i) == i
    assert (one + i).conj() == one - i
    assert (one + i) * (one - i) == Scalar(2, 0)


def test_field_mismatch_raises():
    with pytest.raises(InvalidInput):
        Scalar(1) + Scalar(1, 0)
    with pytest.raises(InvalidInput):
        Scalar(1, 0) * Scalar(1)


def test_promotion_and_narrowing():
    a = Scalar(Fraction(2, 3))
    assert a.to_field(QI) == Scalar(Fraction(2, 3), 0)
    with pytest.raises(InvalidInput):
        Scalar(1, 1).to_field(Q)


def test_serialization_roundtrip():
    a = Scalar(Fraction(-3, 4))
    assert a.to_json() == "-3/4"
    assert Scalar.from_json("-3/4") == a
    b = Scalar(Fraction(1, 2), Fraction(-5))
    assert b.to_json() == {"re": "1/2", "im": "-5"}
    assert Scalar.from_json(b.to_json()) == b
    with pytest.raises(InvalidInput):
        Scalar.from_json("1/0")
    with pytest.raises(InvalidInput):
        Scalar.from_json({"re": "1"})


fractions = st.fractions(min_value=-50, max_value=50, max_denominator=10)


@given(fractions, fractions, fractions, fractions)
def test_gaussian_division_inverts_multiplication(a, b, c, d):
    x = Scalar(a, b)
    y = Scalar(c, d)
    if y.is_zero():
        return
    assert (x * y) / y == x


@given(fractions, fractions)
def test_conjugation_is_multiplicative(a, b):
    x = Scalar(a, b)
    y = Scalar(b, a)
    assert (x * y).conj() == x.conj() * y.conj()
