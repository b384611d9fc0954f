"""Exact rational substrate: canonical form, text format, binomials."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from certreal import rat
from certreal.errors import DomainError

rationals = st.fractions(max_denominator=10**6)


def cross_mul_add(a: Fraction, b: Fraction) -> Fraction:
    # independent oracle: textbook cross-multiplication
    return Fraction(a.numerator * b.denominator + b.numerator * a.denominator,
                    a.denominator * b.denominator)


def pascal(m: int, n: int) -> int:
    # independent oracle: Pascal's triangle
    if n == 0:
        return 1
    if n > m:
        return 0
    return pascal(m - 1, n - 1) + pascal(m - 1, n)


def test_add_matches_cross_multiplication():
    assert rat.add(Fraction(1, 2), Fraction(1, 3)) == Fraction(5, 6)
    assert rat.add(Fraction(1, 2), Fraction(1, 3)) == cross_mul_add(Fraction(1, 2), Fraction(1, 3))


def test_mul_identity_and_inverse():
    x = Fraction(7, 3)
    assert rat.mul(x, Fraction(1)) == x
    assert rat.inv(Fraction(2, 3)) == Fraction(3, 2)
    with pytest.raises(DomainError):
        rat.inv(Fraction(0))


def test_cmp_total_order():
    assert rat.cmp(Fraction(1, 3), Fraction(1, 2)) == -1
    assert rat.cmp(Fraction(1, 2), Fraction(1, 2)) == 0
    assert rat.cmp(Fraction(2), Fraction(1)) == 1


@given(rationals, rationals)
def test_add_oracle(a, b):
    assert rat.add(a, b) == cross_mul_add(a, b)


@given(rationals, rationals, rationals)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    if a != 0:
        assert a * rat.inv(a) == 1


@given(rationals)
def test_canonical_form_preserved(a):
    b = rat.mul(a, Fraction(6, 4))
    assert b.denominator > 0
    import math
    assert math.gcd(abs(b.numerator), b.denominator) == 1


def test_binomial_examples():
    assert rat.binomial(5, 0) == 1
    assert rat.binomial(4, 2) == 6 == pascal(4, 2)
    assert rat.binomial(2, 5) == 0


def test_binomial_pascal_identity():
    for m in range(1, 31):
        for n in range(1, m + 1):
            assert rat.binomial(m, n) == rat.binomial(m - 1, n - 1) + rat.binomial(m - 1, n)


def test_factorial():
    assert rat.factorial(0) == 1
    assert rat.factorial(1) == 1
    it = 1
    for j in range(1, 6):
        it *= j
    assert rat.factorial(5) == it == 120


def test_parse_and_format():
    assert rat.parse_rational("5/10") == Fraction(1, 2)
    assert rat.parse_rational("-7/3") == Fraction(-7, 3)
    assert rat.parse_rational("+4") == 4
    assert rat.format_rational(Fraction(-7, 3)) == "-7/3"
    assert rat.format_rational(Fraction(4)) == "4"
    with pytest.raises(DomainError):
        rat.parse_rational("1/0")
    with pytest.raises(DomainError):
        rat.parse_rational("1.5")


def test_interval():
    iv = rat.RatInterval(Fraction(1, 3), Fraction(1, 2))
    assert iv.contains(Fraction(2, 5))
    assert iv.width == Fraction(1, 6)
    with pytest.raises(DomainError):
        rat.RatInterval(Fraction(1), Fraction(0))


def test_pow2_at_most():
    assert rat.pow2_at_most(Fraction(1)) == 1
    assert rat.pow2_at_most(Fraction(3, 10)) == Fraction(1, 4)
    with pytest.raises(DomainError):
        rat.pow2_at_most(Fraction(3, 2))
