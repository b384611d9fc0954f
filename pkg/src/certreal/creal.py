"""Computable real numbers as precision-indexed rational approximations.

A ``CReal`` is a procedure ``approx(k)`` returning a rational within 1/k of
the number it denotes.  This is a rational Cauchy generating sequence with
its convergence modulus pre-composed, so the consistency law

    |approx(k) - approx(l)| <= 1/k + 1/l

holds by construction and is directly testable.  Values are immutable,
approximations are cached per precision (idempotent writes, so concurrent
queries are safe), and repeated queries at the same precision return the
same rational.

Exact zero-testing of computable reals is undecidable; comparison is
three-valued with an explicit tolerance (`compare`), and multiplicative
inverses require a `SeparationWitness` bounding the number away from zero.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

from .errors import DomainError
from .rat import Rat

Scalar = Union[int, Fraction]


class Comparison(enum.Enum):
    LESS = "less"
    GREATER = "greater"
    WITHIN = "within"


@dataclass(frozen=True)
class SeparationWitness:
    """Certificate that a real x satisfies |x| >= 1/k."""

    k: int

    def __post_init__(self) -> None:
        if self.k < 1:
            raise DomainError("separation witness needs k >= 1")


class CReal:
    """A computable real: ``approx(k)`` is rational with error <= 1/k.

    ``rat`` is set when the number is known to be an exact rational; the
    arithmetic below propagates it so chains of rational operations stay
    exact (and cheap) instead of accumulating precision bookkeeping.
    """

    __slots__ = ("_compute", "_cache", "rat")

    def __init__(self, compute: Callable[[int], Fraction], rat: Optional[Fraction] = None):
        self._compute = compute
        self._cache: dict[int, Fraction] = {}
        self.rat = rat

    def approx(self, k: int) -> Fraction:
        if k < 1:
            raise DomainError("precision index must be >= 1")
        if self.rat is not None:
            return self.rat
        got = self._cache.get(k)
        if got is None:
            got = self._compute(k)
            self._cache[k] = got
        return got

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_rational(a: Scalar) -> CReal:
        a = Fraction(a)
        return CReal(lambda k: a, rat=a)

    @staticmethod
    def from_cauchy(seq: Callable[[int], Fraction], modulus: Callable[[int], int]) -> CReal:
        """Wrap a rational Cauchy sequence with convergence modulus.

        Contract: m, n >= modulus(k) implies |seq(m) - seq(n)| <= 1/k.  The
        returned real reads the sequence at modulus(2k), which is within
        1/(2k) of the limit, hence within 1/k overall.
        """
        return CReal(lambda k: seq(max(1, modulus(2 * k))))

    @staticmethod
    def limit(xs: Callable[[int], "CReal"], modulus: Callable[[int], int]) -> CReal:
        """Limit of a Cauchy sequence of reals with convergence modulus.

        Contract: m, n >= modulus(k) implies |xs(m) - xs(n)| <= 1/k.  Also
        serves monotone limits when the caller supplies a rate for
        |xs(n) - sup| directly.
        """
        return CReal(lambda k: xs(max(1, modulus(2 * k))).approx(2 * k))

    # -- crude bounds --------------------------------------------------

    def bound_abs(self) -> Fraction:
        """A rational B with |self| <= B (from approx(1) + 1)."""
        if self.rat is not None:
            return abs(self.rat)
        return abs(self.approx(1)) + 1

    # -- arithmetic ----------------------------------------------------

    def __neg__(self) -> CReal:
        if self.rat is not None:
            return CReal.from_rational(-self.rat)
        return CReal(lambda k: -self.approx(k))

    def __add__(self, other: object) -> CReal:
        other = as_creal(other)
        if other is NotImplemented:
            return NotImplemented
        if self.rat is not None and other.rat is not None:
            return CReal.from_rational(self.rat + other.rat)
        if self.rat is not None:
            a = self.rat
            return CReal(lambda k: a + other.approx(k))
        if other.rat is not None:
            b = other.rat
            return CReal(lambda k: self.approx(k) + b)
        return CReal(lambda k: self.approx(2 * k) + other.approx(2 * k))

    __radd__ = __add__

    def __sub__(self, other: object) -> CReal:
        other = as_creal(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: object) -> CReal:
        other = as_creal(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def scale(self, c: Scalar) -> CReal:
        """Multiply by an exact rational (cheaper than general product)."""
        c = Fraction(c)
        if c == 0:
            return CReal.from_rational(0)
        if self.rat is not None:
            return CReal.from_rational(c * self.rat)
        return CReal(lambda k: c * self.approx(max(1, math.ceil(abs(c) * k))))

    def __mul__(self, other: object) -> CReal:
        other = as_creal(other)
        if other is NotImplemented:
            return NotImplemented
        if self.rat is not None:
            return other.scale(self.rat)
        if other.rat is not None:
            return self.scale(other.rat)

        def compute(k: int) -> Fraction:
            # |x~ y~ - x y| <= |x~| |y~ - y| + |y| |x~ - x|; the crude
            # bounds come from approx(1) + 1 per the product estimate.
            bx = self.bound_abs()
            by = other.bound_abs()
            kx = math.ceil(2 * k * (by + 1))
            ky = math.ceil(2 * k * (bx + 1))
            return self.approx(max(1, kx)) * other.approx(max(1, ky))

        return CReal(compute)

    __rmul__ = __mul__

    def __abs__(self) -> CReal:
        if self.rat is not None:
            return CReal.from_rational(abs(self.rat))
        return CReal(lambda k: abs(self.approx(k)))

    def inverse(self, witness: SeparationWitness) -> CReal:
        """Multiplicative inverse given |self| >= 1/witness.k.

        Precision amplifies by the square of the witness constant, matching
        the k^2/l Cauchy estimate for reciprocal sequences.
        """
        if self.rat is not None:
            if self.rat == 0:
                raise DomainError("inverse of zero")
            return CReal.from_rational(1 / self.rat)
        k0 = witness.k

        def compute(k: int) -> Fraction:
            m = max(2 * k0, 2 * k0 * k0 * k)
            q = self.approx(m)
            if q == 0:
                # Witness violated: |x| >= 1/k0 forces approx(m) != 0 here.
                raise DomainError("separation witness violated: approx is zero")
            return 1 / q

        return CReal(compute)

    # -- order ----------------------------------------------------------

    def compare(self, other: object, k: int) -> Comparison:
        """Three-valued, tolerance-honest comparison.

        LESS and GREATER are exact verdicts; WITHIN means |x - y| <= 1/k.
        """
        other = as_creal(other)
        d = self.approx(4 * k) - other.approx(4 * k)
        half = Fraction(1, 2 * k)
        if d > half:
            return Comparison.GREATER
        if d < -half:
            return Comparison.LESS
        return Comparison.WITHIN

    def __repr__(self) -> str:
        if self.rat is not None:
            return f"CReal({self.rat})"
        return f"CReal(~{float(self.approx(1000)):.6g})"


def as_creal(x: object) -> CReal:
    if isinstance(x, CReal):
        return x
    if isinstance(x, (int, Fraction)):
        return CReal.from_rational(x)
    return NotImplemented


def compare(x: CReal, y: CReal, k: int) -> Comparison:
    return x.compare(y, k)


def creal_sum(xs: list[CReal]) -> CReal:
    """Sum of finitely many reals with flat precision splitting.

    Chained binary adds would double the precision index at every level;
    here each summand is read once at n-fold precision.
    """
    xs = [as_creal(x) for x in xs]
    if not xs:
        return CReal.from_rational(0)
    if all(x.rat is not None for x in xs):
        return CReal.from_rational(sum(x.rat for x in xs))
    n = len(xs)
    return CReal(lambda k: sum((x.approx(n * k) for x in xs), Fraction(0)))


def render(x: CReal, d: int) -> str:
    """Decimal rendering: floor(q * 10^d)/10^d from q = approx(4 * 10^d),
    with a trailing error marker."""
    if d < 0:
        raise DomainError("need d >= 0")
    q = x.approx(4 * 10**d)
    scaled = math.floor(q * 10**d)
    sign = "-" if scaled < 0 else ""
    digits = abs(scaled)
    whole, frac = divmod(digits, 10**d)
    if d == 0:
        body = f"{sign}{whole}"
    else:
        body = f"{sign}{whole}.{frac:0{d}d}"
    return f"{body} ±1e-{d}"


def positivity_witness(x: CReal, k_max: int = 1 << 20) -> SeparationWitness:
    """Search a separation witness for x != 0 by refining the comparison.

    Raises PrecisionError once k_max is passed; for a number that is
    actually zero this cannot succeed.
    """
    from .errors import PrecisionError

    k = 1
    while k <= k_max:
        q = x.approx(2 * k)
        if abs(q) > Fraction(3, 2 * k):
            # |x| >= |q| - 1/(2k) > 1/k
            return SeparationWitness(k)
        k *= 2
    raise PrecisionError(f"no separation from zero found up to k={k_max}")
