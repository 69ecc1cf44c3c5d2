import math

import pytest
from hypothesis import given, strategies as st

from pricegame.rational import (
    Rational,
    format_rational,
    parse_rational,
    rational,
    rational_arith,
)


def test_addition_of_thirds_and_halves():
    assert rational_arith(Rational(1, 2), Rational(1, 3), "+") == Rational(5, 6)


def test_canonical_form_of_identity_product():
    assert rational_arith(Rational(2, 4), Rational(1), "*") == Rational(1, 2)


def test_additive_inverse_gives_zero():
    r = rational_arith(Rational(7, 3), Rational(7, 3), "-")
    assert r == 0 and r.denominator == 1


def test_division_by_zero_is_fatal():
    with pytest.raises(ValueError):
        rational_arith(Rational(1), Rational(0), "/")


def test_unknown_operation_rejected():
    with pytest.raises(ValueError):
        rational_arith(Rational(1), Rational(1), "%")


def test_parse_and_format_round_trip():
    assert parse_rational("5/6") == Rational(5, 6)
    assert parse_rational("-7") == Rational(-7)
    assert format_rational(Rational(5, 6)) == "5/6"
    assert format_rational(2) == "2/1"
    assert format_rational(Rational(-3, 9)) == "-1/3"


def test_decimal_notation_rejected():
    with pytest.raises(ValueError):
        parse_rational("0.5")


def test_rational_constructor_forms():
    assert rational(3, 6) == Rational(1, 2)
    assert rational("4/8") == Rational(1, 2)
    assert rational(Rational(1, 2)) == Rational(1, 2)


rationals = st.fractions(
    min_value=-1000, max_value=1000, max_denominator=97
)


@given(rationals, rationals, st.sampled_from("+-*/"))
def test_results_stay_canonical(a, b, op):
    if op == "/" and b == 0:
        return
    r = rational_arith(a, b, op)
    assert r.denominator > 0
    assert math.gcd(abs(r.numerator), r.denominator) == 1


@given(rationals)
def test_format_parse_identity(x):
    assert parse_rational(format_rational(x)) == x
