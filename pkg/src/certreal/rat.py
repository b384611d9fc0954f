"""Exact rational arithmetic, rational intervals, binomials and factorials.

Rationals are ``fractions.Fraction`` values: the stdlib type already keeps
the canonical form this library relies on (reduced, positive denominator,
zero stored as 0/1), so equality is a syntactic check.  The functions here
wrap the handful of operations the rest of the library names explicitly and
add the text format "p/q" (integer shorthand "p").
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError

Rat = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)

_RAT_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or "p".  A zero denominator is rejected."""
    s = text.strip()
    if not _RAT_RE.match(s):
        raise DomainError(f"not a rational literal: {text!r}")
    if "/" in s:
        num, den = s.split("/")
        if int(den) == 0:
            raise DomainError(f"zero denominator in {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(s))


def format_rational(x: Fraction) -> str:
    """Render in the "p/q" text format, with integer shorthand."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def add(x: Fraction, y: Fraction) -> Fraction:
    return x + y


def mul(x: Fraction, y: Fraction) -> Fraction:
    return x * y


def neg(x: Fraction) -> Fraction:
    return -x


def inv(x: Fraction) -> Fraction:
    if x == 0:
        raise DomainError("inverse of zero")
    return 1 / x


def abs_(x: Fraction) -> Fraction:
    return abs(x)


def cmp(x: Fraction, y: Fraction) -> int:
    """Total order: -1, 0 or 1."""
    if x < y:
        return -1
    return 1 if x > y else 0


def binomial(m: int, n: int) -> int:
    """Number of n-element subsets of an m-element set; 0 when n > m."""
    if m < 0 or n < 0:
        raise DomainError("binomial needs nonnegative arguments")
    return math.comb(m, n)


def factorial(k: int) -> int:
    if k < 0:
        raise DomainError("factorial needs a nonnegative argument")
    return math.factorial(k)


def ceil_frac(x: Fraction) -> int:
    return math.ceil(x)


def floor_frac(x: Fraction) -> int:
    return math.floor(x)


def pow2_at_most(x: Fraction) -> Fraction:
    """Largest power 2**(-t), t >= 0, that is <= x.  Requires 0 < x <= 1."""
    if not 0 < x <= 1:
        raise DomainError("pow2_at_most needs 0 < x <= 1")
    p = ONE
    while p > x:
        p /= 2
    return p


@dataclass(frozen=True)
class RatInterval:
    """Closed rational interval [lo, hi]."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise DomainError(f"interval endpoints out of order: {self.lo} > {self.hi}")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi

    def __str__(self) -> str:
        return f"[{format_rational(self.lo)}, {format_rational(self.hi)}]"
