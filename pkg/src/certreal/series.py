"""Absolutely convergent series with explicit tail certificates.

A ``ConvSeries`` pairs a coefficient stream with a procedure ``tail(k)``
returning an index N such that the absolute tail beyond N is at most 1/k.
Sums are then computable reals: truncate at tail(2k) and evaluate the
partial sum at matching precision.

The exponential series carries the quotable tail certificate
|a^n/n!| <= (2|a|)^m (1/m!) (1/2)^n for n >= m = ceil(2|a|), and partial
sums are evaluated by an integer Horner scheme so that exact rational
summation stays cheap even for thousands of terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

from .creal import CReal, as_creal
from .errors import DomainError
from .rat import factorial

Number = Union[int, Fraction, CReal]


def _ceil_log2(v: Fraction) -> int:
    """Smallest N >= 0 with 2**N >= v."""
    if v <= 1:
        return 0
    t = -((-v.numerator) // v.denominator)  # ceil(v)
    return (t - 1).bit_length()


@dataclass
class ConvSeries:
    """Coefficient stream plus absolute tail certificate.

    ``tail(k)`` returns N with sum_{n>N} |x_n| <= 1/k and is monotone in k.
    ``rat_coeff``/``partial`` are exact fast paths used when every
    coefficient is rational.
    """

    coeff: Callable[[int], CReal]
    tail: Callable[[int], int]
    rat_coeff: Optional[Callable[[int], Fraction]] = None
    partial: Optional[Callable[[int], Fraction]] = None  # exact sum through N

    def partial_sum(self, n_max: int) -> Fraction:
        """Exact partial sum through index n_max (rational coefficients only)."""
        if self.partial is not None:
            return self.partial(n_max)
        if self.rat_coeff is None:
            raise DomainError("series has no exact rational coefficients")
        return sum((self.rat_coeff(n) for n in range(n_max + 1)), Fraction(0))


def sum_series(s: ConvSeries) -> CReal:
    """The sum as a CReal: partial sum through tail(2k), evaluated at
    matching precision, is within 1/k."""

    def compute(k: int) -> Fraction:
        n_max = s.tail(2 * k)
        if s.partial is not None or s.rat_coeff is not None:
            return s.partial_sum(n_max)
        q = 2 * k * (n_max + 1)
        return sum((s.coeff(n).approx(q) for n in range(n_max + 1)), Fraction(0))

    return CReal(compute)


def abs_sum_bound(s: ConvSeries) -> Fraction:
    """A rational upper bound for sum |x_n|."""
    n_max = s.tail(1)
    if s.rat_coeff is not None:
        head = sum((abs(s.rat_coeff(n)) for n in range(n_max + 1)), Fraction(0))
        return head + 1
    q = 2 * (n_max + 1)
    head = sum((abs(s.coeff(n).approx(q)) for n in range(n_max + 1)), Fraction(0))
    return head + Fraction(1, 2) + 1


def _memo_rat(fn: Callable[[int], Fraction]) -> Callable[[int], Fraction]:
    cache: dict[int, Fraction] = {}

    def get(n: int) -> Fraction:
        if n not in cache:
            cache[n] = fn(n)
        return cache[n]

    return get


def geometric(x: Fraction, m: int = 0) -> ConvSeries:
    """The series sum_{n>=m} x^n; requires |x| < 1, sums to x^m/(1-x)."""
    x = Fraction(x)
    if abs(x) >= 1:
        raise DomainError("geometric series converges only for |x| < 1")
    if m < 0:
        raise DomainError("geometric start index must be >= 0")

    def rat_coeff(n: int) -> Fraction:
        return x**n if n >= m else Fraction(0)

    ax = abs(x)

    def tail(k: int) -> int:
        # sum_{n>N} |x|^n = |x|^(N+1)/(1-|x|) <= 1/k
        if x == 0:
            return m
        target = (1 - ax) / k
        n = m
        p = ax ** (m + 1)
        while p > target:
            p *= ax
            n += 1
        return n

    return ConvSeries(coeff=lambda n: CReal.from_rational(rat_coeff(n)),
                      tail=tail, rat_coeff=_memo_rat(rat_coeff))


def exp_partial(a: Fraction, n_max: int) -> Fraction:
    """Exact sum_{n<=n_max} a^n/n! via an integer Horner recurrence."""
    p, q = a.numerator, a.denominator
    acc = 1
    c = 1  # running q^(n_max-n) * n_max!/n!
    for n in range(n_max - 1, -1, -1):
        c = c * q * (n + 1)
        acc = acc * p + c
    return Fraction(acc, c if n_max > 0 else 1)


def exp_tail_cutoff(a: Fraction, k: int) -> int:
    """N such that sum_{n>N} |a|^n/n! <= 1/k, from the geometric majorant
    with m = ceil(2|a|)."""
    m = max(1, math.ceil(2 * abs(a)))
    c = (2 * abs(Fraction(a))) ** m / factorial(m)
    return max(m, _ceil_log2(c * k))


def exp_series(a: Fraction) -> ConvSeries:
    """The exponential series sum a^n/n! as a certified ConvSeries."""
    a = Fraction(a)
    powers: list[Fraction] = [Fraction(1)]

    def rat_coeff(n: int) -> Fraction:
        while len(powers) <= n:
            powers.append(powers[-1] * a / len(powers))
        return powers[n]

    return ConvSeries(coeff=lambda n: CReal.from_rational(rat_coeff(n)),
                      tail=lambda k: exp_tail_cutoff(a, k),
                      rat_coeff=rat_coeff,
                      partial=lambda n_max: exp_partial(a, n_max))


def exp_creal(a: Fraction) -> CReal:
    return sum_series(exp_series(Fraction(a)))


def exp_bounds(a: Fraction, k: int) -> tuple[Fraction, Fraction]:
    """Certified rational enclosure of e^a with width <= 1/k."""
    a = Fraction(a)
    if a >= 0:
        s = exp_partial(a, exp_tail_cutoff(a, 2 * k))
        return s, s + Fraction(1, 2 * k)
    lo_inv, hi_inv = exp_bounds(-a, k)  # e^{-a} >= 1, so widths do not grow
    return 1 / hi_inv, 1 / lo_inv


def exp_lower(a: Fraction, k: int = 4) -> Fraction:
    return exp_bounds(a, k)[0]


def exp_upper(a: Fraction, k: int = 4) -> Fraction:
    return exp_bounds(a, k)[1]


def cauchy_product(s: ConvSeries, t: ConvSeries) -> ConvSeries:
    """Convolution z_n = sum_{i<=n} x_i y_{n-i} with a tail certificate from
    the half-split bound C_{N/2} y' + x' D_{N/2}."""
    bounds: dict[str, Fraction] = {}

    def bx() -> Fraction:
        if "x" not in bounds:
            bounds["x"] = abs_sum_bound(s)
        return bounds["x"]

    def by() -> Fraction:
        if "y" not in bounds:
            bounds["y"] = abs_sum_bound(t)
        return bounds["y"]

    rational = s.rat_coeff is not None and t.rat_coeff is not None

    if rational:
        sc, tc = s.rat_coeff, t.rat_coeff
        rc = _memo_rat(lambda n: sum((sc(i) * tc(n - i) for i in range(n + 1)), Fraction(0)))
        coeff = lambda n: CReal.from_rational(rc(n))
    else:
        rc = None
        cache: dict[int, CReal] = {}

        def coeff(n: int) -> CReal:
            if n not in cache:
                acc = CReal.from_rational(0)
                for i in range(n + 1):
                    acc = acc + s.coeff(i) * t.coeff(n - i)
                cache[n] = acc
            return cache[n]

    def tail(k: int) -> int:
        half = max(s.tail(math.ceil(2 * k * by())), t.tail(math.ceil(2 * k * bx())))
        return 2 * half

    return ConvSeries(coeff=coeff, tail=tail, rat_coeff=rc)


def unit_series() -> ConvSeries:
    """(1, 0, 0, ...): the multiplicative identity for the Cauchy product."""

    def rat_coeff(n: int) -> Fraction:
        return Fraction(1) if n == 0 else Fraction(0)

    return ConvSeries(coeff=lambda n: CReal.from_rational(rat_coeff(n)),
                      tail=lambda k: 0, rat_coeff=rat_coeff)


def _upper_bound(x: Number) -> Fraction:
    x = as_creal(x)
    return x.rat if x.rat is not None else x.bound_abs()


def exp_tail_index(y: Number, z: Number, k: int) -> int:
    """N with y z^n/n! <= 1/k for all n >= N (y, z > 0).

    Past m = ceil(2 z) the terms at least halve at each step, so a
    logarithmic number of halvings suffices; the bound is then verified by
    direct evaluation at N.
    """
    if k < 1:
        raise DomainError("need k >= 1")
    yb = _upper_bound(y)
    zb = _upper_bound(z)
    m = max(1, math.ceil(2 * zb))
    t_m = yb * zb**m / factorial(m)
    n = m + _ceil_log2(t_m * k)
    assert yb * zb**n / factorial(n) <= Fraction(1, k)
    return n


def exp_dominance_bound(m: int, k: int) -> int:
    """X such that x^m e^{-x} <= 1/k for all x >= X.

    x^m e^{-x} descends for x >= m (since (1 + d/x)^m <= e^d there), so it
    is enough to certify the value at X itself; partial sums of the
    exponential series give the certified e^X lower bound.  X is searched
    by doubling, which keeps the cutoff near the true threshold instead of
    at the crude a-priori estimate.
    """
    if m < 0 or k < 1:
        raise DomainError("need m >= 0 and k >= 1")
    x = max(1, m)
    while True:
        lo = exp_partial(Fraction(x), exp_tail_cutoff(Fraction(x), 4))
        if Fraction(x**m) / lo <= Fraction(1, k):
            return x
        x *= 2
