"""Exact rational arithmetic.

Every number that can reach a threshold comparison in this package is a
Rational.  There is no floating point in any optimization path: leader
values, follower values, prices and LP data are all exact fractions, and
all comparisons are exact.

Rational is the standard library Fraction, which already maintains the
canonical form we rely on: positive denominator, gcd-reduced after every
operation.  This module pins that choice and the one serialization format
for rationals, "numerator/denominator" with no decimal notation anywhere.
"""

from __future__ import annotations

from fractions import Fraction

Rational = Fraction

_OPS = {"+", "-", "*", "/"}


def rational(numerator: int | str | Fraction, denominator: int | None = None) -> Fraction:
    """Build a Rational from ints, an "a/b" string, or another Rational."""
    if denominator is not None:
        return Fraction(numerator, denominator)
    if isinstance(numerator, str):
        return parse_rational(numerator)
    return Fraction(numerator)


def rational_arith(a: Fraction, b: Fraction, op: str) -> Fraction:
    """Apply one of +, -, *, / exactly.  Division by zero is a ValueError."""
    if op not in _OPS:
        raise ValueError(f"unknown operation {op!r}, expected one of {sorted(_OPS)}")
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if b == 0:
        raise ValueError("division by zero")
    return a / b


def parse_rational(text: str) -> Fraction:
    """Parse "a/b" or "a" (no decimal points allowed anywhere)."""
    text = text.strip()
    if "." in text:
        raise ValueError(f"decimal notation is not accepted: {text!r}")
    if "/" in text:
        num, _, den = text.partition("/")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_rational(x: Fraction | int) -> str:
    """Render as "numerator/denominator", always including the denominator."""
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"
