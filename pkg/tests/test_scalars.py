from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eisfe.scalars import (
    GaussRational,
    QuadScalar,
    RingMismatchError,
    epsilon,
    format_fraction,
    parse_fraction,
    qs_embed,
)

from conftest import quad_scalars


def test_difference_of_squares():
    for p in (3, 5, 7):
        a = QuadScalar(p, 1, 0, 1)
        b = QuadScalar(p, 1, 0, -1)
        assert a * b == QuadScalar(p, 1 - p)


def test_epsilon_squares_to_chi_minus_one():
    assert epsilon(3) == QuadScalar(3, 0, 1)
    assert epsilon(3) ** 2 == QuadScalar(3, -1)
    assert epsilon(5) == QuadScalar(5, 1)
    assert epsilon(13) ** 2 == QuadScalar(13, 1)


def test_sqrt_inverse():
    assert QuadScalar.sqrt_p(5).inverse() == QuadScalar(5, 0, 0, Fraction(1, 5))


def test_sqrt_squared_is_p():
    for p in (2, 3, 11):
        assert QuadScalar.sqrt_p(p) ** 2 == QuadScalar(p, p)


@pytest.mark.parametrize("r,h,expected", [
    (1, 0, QuadScalar(3, 1)),
    (1, 3, QuadScalar(3, 0, 0, 3)),
    (1, -1, QuadScalar(3, 0, 0, Fraction(1, 3))),
    (2, 4, QuadScalar(3, 18)),
])
def test_qs_embed(r, h, expected):
    assert qs_embed(r, h, 3) == expected


def test_ring_mismatch():
    with pytest.raises(RingMismatchError):
        QuadScalar(3, 1) + QuadScalar(5, 1)


def test_zero_inverse_raises():
    with pytest.raises(ZeroDivisionError):
        QuadScalar(3).inverse()


def test_fraction_text_roundtrip():
    assert parse_fraction("3/6") == Fraction(1, 2)
    assert parse_fraction("-4") == Fraction(-4)
    assert format_fraction(Fraction(-2, 4)) == "-1/2"
    with pytest.raises(ValueError):
        parse_fraction("1/0")


def test_gauss_rational_inverse():
    z = GaussRational(Fraction(1), Fraction(2))
    assert z * z.inverse() == GaussRational(Fraction(1))


@given(quad_scalars(7), quad_scalars(7), quad_scalars(7))
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == QuadScalar(7)


@given(quad_scalars(3, allow_zero=False))
def test_inverse_property(a):
    assert a * a.inverse() == QuadScalar(3, 1)


@given(quad_scalars(5))
def test_json_roundtrip(a):
    assert QuadScalar.from_json(5, a.to_json()) == a


@given(st.integers(-6, 6), st.integers(-6, 6))
def test_embed_is_multiplicative(h1, h2):
    assert qs_embed(1, h1, 3) * qs_embed(1, h2, 3) == qs_embed(1, h1 + h2, 3)
