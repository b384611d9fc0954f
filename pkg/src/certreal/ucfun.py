"""Real functions on rational intervals with explicit continuity moduli.

A ``UCFun`` evaluates at rational points to computable reals and carries a
uniform-continuity modulus: ``uc_modulus(k)`` returns ``l`` such that
|a - b| <= 1/l forces |f(a) - f(b)| <= 1/k on the domain.  A ``UDiffFun``
adds a derivative (same domain) and a uniform-derivative modulus for the
difference-quotient defect

    delta_a(b) = (f(b) - f(a))/(b - a) - f'(a).

Moduli are attached at construction, never inferred: each constructor
combines its arguments' moduli by the explicit estimates that make the
closure properties of this function class effective (linear combinations
scale by |x| + |y|, products by twice a bound of the factors, and so on).

Constructors additionally attach interval certificates (`Certs`): rational
bounds for |f|, |f'| and a linear bound K on |delta_a(b)|, computable on
any rational subinterval.  The quadrature module consumes these to drive
midpoint sums with second-order error control; everything else works from
the moduli alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from .creal import CReal, Comparison, SeparationWitness, as_creal
from .errors import DomainError, PrecisionError, ResourceCapError
from .rat import binomial
from .series import exp_creal, exp_upper

Number = Union[int, Fraction, CReal]

_GRID_CAP = 2_000_000


@dataclass(frozen=True)
class Certs:
    """Analytic bounds for a function on a rational subinterval.

    value >= sup |f|, slope >= sup |f'|, and |delta_a(b)| <= delta * |b - a|
    whenever |b - a| <= gap (gap None means unrestricted).
    """

    value: Fraction
    slope: Fraction
    delta: Fraction
    gap: Optional[Fraction] = None


class Domain:
    """Closed interval [u, v] with real endpoints (u < v witnessed), or all
    of Q.  Rational inner/outer hulls are precomputed for clamping and for
    grid constructions."""

    def __init__(self, u: Optional[CReal], v: Optional[CReal], sep: Optional[int]):
        self.u = u
        self.v = v
        self.sep = sep
        if u is None:
            self.lo_out = self.hi_out = None
        else:
            assert v is not None and sep is not None
            q = max(64, 4 * sep)
            self.lo_out = u.rat if u.rat is not None else u.approx(q) - Fraction(1, q)
            self.hi_out = v.rat if v.rat is not None else v.approx(q) + Fraction(1, q)
            if self.lo_out >= self.hi_out:
                raise DomainError("degenerate interval")

    @staticmethod
    def interval(u: Number, v: Number, sep: Optional[int] = None) -> "Domain":
        u, v = as_creal(u), as_creal(v)
        if sep is None:
            if u.rat is not None and v.rat is not None:
                d = v.rat - u.rat
                if d <= 0:
                    raise DomainError("need u < v")
                sep = math.ceil(1 / d)
            else:
                sep = _separation_search(u, v)
        return Domain(u, v, sep)

    @staticmethod
    def all_q() -> "Domain":
        return Domain(None, None, None)

    @property
    def bounded(self) -> bool:
        return self.u is not None

    @property
    def abs_bound(self) -> Fraction:
        """Rational M with |a| <= M for every a in the domain."""
        if not self.bounded:
            raise DomainError("unbounded domain has no abs bound")
        return max(abs(self.lo_out), abs(self.hi_out))

    @property
    def diameter(self) -> Fraction:
        if not self.bounded:
            raise DomainError("unbounded domain has no diameter")
        return self.hi_out - self.lo_out

    def hull(self) -> tuple[Fraction, Fraction]:
        return self.lo_out, self.hi_out

    def same_as(self, other: "Domain") -> bool:
        if self.bounded != other.bounded:
            return False
        if not self.bounded:
            return True
        return self.lo_out == other.lo_out and self.hi_out == other.hi_out

    def inner_hull(self, m: int) -> tuple[Fraction, Fraction]:
        """Rationals lo <= hi with [lo, hi] inside [u, v]; m >= 4*sep."""
        u, v = self.u, self.v
        lo = u.rat if u.rat is not None else u.approx(2 * m) + Fraction(1, 2 * m)
        hi = v.rat if v.rat is not None else v.approx(2 * m) - Fraction(1, 2 * m)
        if lo > hi:
            raise DomainError("interval too small for requested precision")
        return lo, hi

    def provably_outside(self, x: CReal, k: int = 64) -> bool:
        if not self.bounded:
            return False
        return (x.compare(self.u, k) is Comparison.LESS
                or x.compare(self.v, k) is Comparison.GREATER)


def _separation_search(u: CReal, v: CReal, k_max: int = 1 << 20) -> int:
    k = 1
    while k <= k_max:
        d = v.approx(4 * k) - u.approx(4 * k)
        if d > Fraction(1, k):
            # v - u >= d - 1/(2k) >= 1/(2k)
            return 2 * k
        k *= 2
    raise PrecisionError("could not separate interval endpoints")


class UCFun:
    """Evaluation procedure on a rational interval plus a UC modulus."""

    def __init__(self, domain: Domain, eval_fn: Callable[[Fraction], CReal],
                 uc_modulus: Callable[[int], int],
                 local_certs: Optional[Callable[[Fraction, Fraction], Certs]] = None,
                 abs_base: Optional["UCFun"] = None):
        self.domain = domain
        self._eval_fn = eval_fn
        self._uc_modulus = uc_modulus
        self.local_certs = local_certs
        self.abs_base = abs_base
        self._cache: dict[Fraction, CReal] = {}

    def uc_modulus(self, k: int) -> int:
        if k < 1:
            raise DomainError("precision index must be >= 1")
        return max(1, self._uc_modulus(k))

    def eval(self, a: Union[int, Fraction], check: bool = True) -> CReal:
        a = Fraction(a)
        got = self._cache.get(a)
        if got is None:
            if check and self.domain.bounded:
                if self.domain.provably_outside(CReal.from_rational(a)):
                    raise DomainError(f"{a} lies outside the domain")
            got = self._eval_fn(a)
            self._cache[a] = got
        return got

    def certs_on(self, lo: Fraction, hi: Fraction) -> Optional[Certs]:
        if self.local_certs is None:
            return None
        return self.local_certs(lo, hi)


class UDiffFun:
    """A UCFun together with its derivative and a uniform-derivative modulus.

    ``deriv_fun`` exposes the derivative as another UDiffFun (built lazily),
    so towers of derivatives are available where the construction supports
    them; ``deriv`` is the plain UCFun view required by consumers.
    """

    def __init__(self, f: UCFun, ud_modulus: Callable[[int], int],
                 deriv_thunk: Callable[[], "UDiffFun"]):
        self.f = f
        self._ud_modulus = ud_modulus
        self._deriv_thunk = deriv_thunk
        self._deriv: Optional[UDiffFun] = None

    @property
    def domain(self) -> Domain:
        return self.f.domain

    def eval(self, a: Union[int, Fraction], check: bool = True) -> CReal:
        return self.f.eval(a, check=check)

    def ud_modulus(self, k: int) -> int:
        if k < 1:
            raise DomainError("precision index must be >= 1")
        return max(1, self._ud_modulus(k))

    def deriv_fun(self) -> "UDiffFun":
        if self._deriv is None:
            self._deriv = self._deriv_thunk()
        return self._deriv

    @property
    def deriv(self) -> UCFun:
        return self.deriv_fun().f


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def _coeff_bound(c: CReal) -> Fraction:
    return abs(c.rat) if c.rat is not None else c.bound_abs()


def _as_coeffs(coeffs: Sequence[Number]) -> list[CReal]:
    out = [as_creal(c) for c in coeffs]
    # drop exactly-rational trailing zeros so degrees reflect the function
    while len(out) > 1 and out[-1].rat == 0:
        out.pop()
    return out


def poly(coeffs: Sequence[Number], domain: Domain) -> UDiffFun:
    """Polynomial sum y_i a^i by Horner, with the explicit Lipschitz-based
    modulus L = sum i |y_i| M^(i-1) and derivative sum i y_i a^(i-1)."""
    cs = _as_coeffs(coeffs)
    deg = len(cs) - 1
    if not domain.bounded and deg >= 2:
        raise DomainError("nonconstant polynomials need a bounded domain")
    cb = [_coeff_bound(c) for c in cs]

    def eval_horner(a: Fraction) -> CReal:
        acc = cs[-1]
        for c in reversed(cs[:-1]):
            acc = acc.scale(a) + c
        return acc

    if domain.bounded:
        m_hull = domain.abs_bound
        lip = sum((i * cb[i] * m_hull ** (i - 1) for i in range(1, deg + 1)), Fraction(0))
        kk = sum((binomial(i, 2) * cb[i] * m_hull ** (i - 2) for i in range(2, deg + 1)),
                 Fraction(0))
    else:
        lip = cb[1] if deg >= 1 else Fraction(0)
        kk = Fraction(0)

    def local_certs(lo: Fraction, hi: Fraction) -> Certs:
        m = max(abs(lo), abs(hi))
        return Certs(
            value=sum((cb[i] * m**i for i in range(deg + 1)), Fraction(0)),
            slope=sum((i * cb[i] * m ** (i - 1) for i in range(1, deg + 1)), Fraction(0)),
            delta=sum((binomial(i, 2) * cb[i] * m ** (i - 2) for i in range(2, deg + 1)),
                      Fraction(0)),
            gap=None,
        )

    f = UCFun(domain, eval_horner,
              uc_modulus=lambda k: math.ceil(lip * k) if lip > 0 else 1,
              local_certs=local_certs)

    def deriv_thunk() -> UDiffFun:
        dcs = [cs[i].scale(i) for i in range(1, deg + 1)] or [CReal.from_rational(0)]
        return poly(dcs, domain)

    return UDiffFun(f, ud_modulus=lambda k: math.ceil(kk * k) if kk > 0 else 1,
                    deriv_thunk=deriv_thunk)


def constant(c: Number, domain: Domain) -> UDiffFun:
    return poly([c], domain)


def scaled_exp(y: Number, c: Fraction, domain: Domain) -> UDiffFun:
    """f(a) = y * e^(c a): modulus 2|c| e^(|c|M) per the exponential's UC
    estimate, defect modulus c^2 e^(|c|M) from the quadratic remainder bound
    (valid for steps |b - a| <= 1/(2|c|))."""
    c = Fraction(c)
    y = as_creal(y)
    if not domain.bounded:
        raise DomainError("scaled exponential needs a bounded domain")
    yb = _coeff_bound(y)
    if c == 0:
        return poly([y], domain)
    m_hull = domain.abs_bound
    big_e = exp_upper(abs(c) * m_hull) * yb  # >= sup |y e^(c a)|

    def eval_fn(a: Fraction) -> CReal:
        return y * exp_creal(c * a)

    def local_certs(lo: Fraction, hi: Fraction) -> Certs:
        b = yb * exp_upper(max(c * lo, c * hi))
        return Certs(value=b, slope=abs(c) * b, delta=c * c * b,
                     gap=1 / (2 * abs(c)))

    f = UCFun(domain, eval_fn,
              uc_modulus=lambda k: math.ceil(2 * abs(c) * big_e * k),
              local_certs=local_certs)

    def deriv_thunk() -> UDiffFun:
        return scaled_exp(y.scale(c), c, domain)

    return UDiffFun(
        f,
        ud_modulus=lambda k: max(math.ceil(c * c * big_e * k), math.ceil(2 * abs(c))),
        deriv_thunk=deriv_thunk)


def exp_scaled(c: Fraction, domain: Domain) -> UDiffFun:
    return scaled_exp(1, c, domain)


def lin_comb(x: Number, fd: UDiffFun, y: Number, gd: UDiffFun) -> UDiffFun:
    """x f + y g with moduli combined by the (|x| + |y|)/k estimates."""
    if not fd.domain.same_as(gd.domain):
        raise DomainError("linear combination needs a common domain")
    x, y = as_creal(x), as_creal(y)
    xb, yb = _coeff_bound(x), _coeff_bound(y)
    weight = xb + yb
    f, g = fd.f, gd.f

    def eval_fn(a: Fraction) -> CReal:
        return x * f.eval(a, check=False) + y * g.eval(a, check=False)

    def modulus(base_f: Callable[[int], int], base_g: Callable[[int], int],
                k: int) -> int:
        if weight == 0:
            return 1
        m = max(1, math.ceil(weight * k))
        return max(base_f(m), base_g(m))

    local_certs = None
    if f.local_certs is not None and g.local_certs is not None:
        def local_certs(lo: Fraction, hi: Fraction) -> Certs:
            cf, cg = f.local_certs(lo, hi), g.local_certs(lo, hi)
            return Certs(value=xb * cf.value + yb * cg.value,
                         slope=xb * cf.slope + yb * cg.slope,
                         delta=xb * cf.delta + yb * cg.delta,
                         gap=_min_gap(cf.gap, cg.gap))

    out = UCFun(fd.domain, eval_fn,
                uc_modulus=lambda k: modulus(f.uc_modulus, g.uc_modulus, k),
                local_certs=local_certs)
    return UDiffFun(
        out,
        ud_modulus=lambda k: modulus(fd.ud_modulus, gd.ud_modulus, k),
        deriv_thunk=lambda: lin_comb(x, fd.deriv_fun(), y, gd.deriv_fun()))


def _min_gap(a: Optional[Fraction], b: Optional[Fraction]) -> Optional[Fraction]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _value_bound(f: UCFun) -> Fraction:
    if f.local_certs is not None:
        return f.certs_on(*f.domain.hull()).value
    return bound(f, 1)


def _slope_bound(fd: UDiffFun) -> Fraction:
    if fd.f.local_certs is not None:
        return fd.f.certs_on(*fd.domain.hull()).slope
    return bound(fd.deriv, 1)


def product(fd: UDiffFun, gd: UDiffFun) -> UDiffFun:
    """Pointwise product on a bounded common domain.

    UC modulus per the 2y/k product estimate and defect modulus per the
    3y/k Leibniz estimate, with y a rational bound for the factors and
    their derivatives.
    """
    if not fd.domain.same_as(gd.domain):
        raise DomainError("product needs a common domain")
    if not fd.domain.bounded:
        raise DomainError("product needs a bounded domain")
    f, g = fd.f, gd.f
    yf, yg = _value_bound(f), _value_bound(g)
    y2 = max(yf, yg, Fraction(1))
    dyf, dyg = _slope_bound(fd), _slope_bound(gd)
    y3 = max(y2, dyf, dyg)

    def eval_fn(a: Fraction) -> CReal:
        return f.eval(a, check=False) * g.eval(a, check=False)

    def uc_modulus(k: int) -> int:
        m = math.ceil(2 * y2 * k)
        return max(f.uc_modulus(m), g.uc_modulus(m))

    def ud_modulus(k: int) -> int:
        m = math.ceil(3 * y3 * k)
        return max(fd.ud_modulus(m), gd.ud_modulus(m),
                   f.uc_modulus(m), g.uc_modulus(m))

    local_certs = None
    if f.local_certs is not None and g.local_certs is not None:
        def local_certs(lo: Fraction, hi: Fraction) -> Certs:
            cf, cg = f.local_certs(lo, hi), g.local_certs(lo, hi)
            gap = _min_gap(_min_gap(cf.gap, cg.gap), Fraction(1))
            # delta_{fg,a}(b) = (f(b)-f(a)) g'(a) + f(b) delta_g + g(a) delta_f
            kk = (cf.slope + cf.delta * gap) * cg.slope \
                + cf.value * cg.delta + cg.value * cf.delta
            return Certs(value=cf.value * cg.value,
                         slope=cf.slope * cg.value + cf.value * cg.slope,
                         delta=kk, gap=gap)

    out = UCFun(fd.domain, eval_fn, uc_modulus=uc_modulus, local_certs=local_certs)
    return UDiffFun(
        out, ud_modulus=ud_modulus,
        deriv_thunk=lambda: lin_comb(1, product(fd.deriv_fun(), gd), 1,
                                     product(fd, gd.deriv_fun())))


def polyexp(y: Number, n: int, c: Fraction, domain: Domain) -> UDiffFun:
    """f(a) = y a^n e^(c a), assembled from the product/lin_comb closure."""
    if n < 0:
        raise DomainError("need n >= 0")
    if n == 0:
        return scaled_exp(y, c, domain)
    mono = poly([0] * n + [1], domain)
    return product(mono, scaled_exp(y, c, domain))


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def bound(f: UCFun, k: int) -> Fraction:
    """Rational B with |f| <= B on the domain, by the finite-net argument:
    grid at spacing 1/uc_modulus(k), plus 1/k for the net and 1/k for the
    evaluations."""
    if not f.domain.bounded:
        raise DomainError("bound needs a bounded domain")
    lo, hi = f.domain.hull()
    step = Fraction(1, f.uc_modulus(k))
    n = math.ceil((hi - lo) / step)
    if n > _GRID_CAP:
        raise ResourceCapError(f"bound grid of {n} points exceeds the cap")
    best = Fraction(0)
    for i in range(n + 1):
        a = min(lo + i * step, hi)
        best = max(best, abs(f.eval(a, check=False).approx(k)))
    return best + Fraction(2, k)


def abs_fun(f: UCFun) -> UCFun:
    """|f|, with the same modulus (the absolute value is 1-Lipschitz)."""
    return UCFun(f.domain, lambda a: abs(f.eval(a, check=False)),
                 uc_modulus=f.uc_modulus, abs_base=f)


def eval_at_real(f: UCFun, x: CReal) -> CReal:
    """Extension of f to reals close to the domain, via the UC modulus:
    pick a rational a with |x - a| <= 1/uc_modulus(2k) and read f(a)."""
    dom = f.domain
    if dom.bounded and dom.provably_outside(x):
        raise DomainError("point provably outside the domain")
    if x.rat is not None and (not dom.bounded or
                              dom.lo_out <= x.rat <= dom.hi_out):
        ok = True
        if dom.bounded:
            lo, hi = dom.inner_hull(max(64, 4 * dom.sep))
            ok = lo <= x.rat <= hi
        if ok:
            return f.eval(x.rat, check=False)

    def compute(k: int) -> Fraction:
        m = 2 * f.uc_modulus(2 * k)
        if dom.bounded:
            m = max(m, 4 * dom.sep)
            lo, hi = dom.inner_hull(m)
            a = min(max(x.approx(2 * m), lo), hi)
        else:
            a = x.approx(2 * m)
        return f.eval(a, check=False).approx(2 * k)

    return CReal(compute)


def approx_zero(f: UCFun, k: int) -> Fraction:
    """A rational y in the domain with |f(y)| <= 1/k, assuming a sign change
    across the interval.  Walks a grid fine enough that f moves by at most
    1/(4k) per cell; some grid value must then sit within 1/(2k) of zero."""
    dom = f.domain
    if not dom.bounded:
        raise DomainError("approximate zero finding needs a bounded interval")
    m = max(4 * dom.sep, 8 * k)
    lo, hi = dom.inner_hull(m)
    step = Fraction(1, f.uc_modulus(4 * k))
    n = math.ceil((hi - lo) / step)
    if n > _GRID_CAP:
        raise ResourceCapError(f"zero-finding grid of {n} points exceeds the cap")
    prec = 8 * k
    tol = Fraction(1, 2 * k)
    vals = []
    for i in range(n + 1):
        a = min(lo + i * step, hi)
        s = f.eval(a, check=False).approx(prec)
        if abs(s) <= tol:
            q = f.eval(a, check=False).approx(4 * k)
            if abs(q) <= Fraction(3, 4 * k):
                return a
        vals.append(s)
    if (vals[0] > 0) == (vals[-1] > 0):
        raise DomainError("no sign change detectable at this precision")
    # A definite sign flip between adjacent grid points of a 1/(4k)-dense
    # grid contradicts the modulus, so reaching here means the modulus or
    # the precondition is broken.
    raise PrecisionError("sign change present but no small value found")


def approx_extremum(f: UCFun, k: int, which: str = "max") -> Fraction:
    """Grid point whose value is within 1/k of the global extremum."""
    if which not in ("min", "max"):
        raise DomainError("which must be 'min' or 'max'")
    dom = f.domain
    if not dom.bounded:
        raise DomainError("extremum search needs a bounded domain")
    lo, hi = dom.hull()
    step = Fraction(1, f.uc_modulus(3 * k))
    n = math.ceil((hi - lo) / step)
    if n > _GRID_CAP:
        raise ResourceCapError(f"extremum grid of {n} points exceeds the cap")
    best_a, best_v = lo, f.eval(lo, check=False).approx(3 * k)
    for i in range(1, n + 1):
        a = min(lo + i * step, hi)
        v = f.eval(a, check=False).approx(3 * k)
        if (which == "max" and v > best_v) or (which == "min" and v < best_v):
            best_a, best_v = a, v
    return best_a


def derived_uc_modulus(fd: UDiffFun, k: int) -> int:
    """UC modulus from a bounded uniform derivative: with |f'| <= y the
    two-point estimate gives |f(b) - f(a)| <= (y + 1)/k once steps shrink
    below 1/max(ud_modulus(k), k)."""
    y = _slope_bound(fd)
    m = max(1, math.ceil((y + 1) * k))
    return max(fd.ud_modulus(k), m)


def escape_extreme(fd: UDiffFun, x: CReal, s: SeparationWitness,
                   max_rounds: int = 24) -> tuple[Fraction, Fraction]:
    """Rationals b', b'' with f(b') < f(x) < f(b''), given f'(x) != 0.

    Follows the effective escape construction: take l so the defect stays
    below |f'(x)|/3 within 1/l-steps, pick a rational a on the proper side
    of x where f' is still at least half of f'(x) and the value margin
    (1/12l)|f'(x)| survives, and step from a by between 1/(2l) and 1/l.
    The final inequalities are certified by comparisons, retrying with
    doubled precision up to a cap.
    """
    dom = fd.domain
    if not dom.bounded:
        raise DomainError("escape construction needs a bounded interval")
    dfx = eval_at_real(fd.deriv, x)
    q = dfx.approx(2 * s.k)
    if q > 0:
        neg = lin_comb(-1, fd, 0, fd)
        lo_pt, hi_pt = escape_extreme(neg, x, s, max_rounds)
        return hi_pt, lo_pt
    if q >= 0:
        raise DomainError("separation witness for f'(x) is violated")

    fx = eval_at_real(fd.f, x)
    glow = Fraction(1, s.k)
    l = max(fd.ud_modulus(3 * s.k), 1)
    # keep x +- 1/l strictly inside [u, v]
    while (CReal.from_rational(Fraction(1, l)) + x).compare(dom.v, 4 * l) is not Comparison.LESS \
            or (x - CReal.from_rational(Fraction(1, l))).compare(dom.u, 4 * l) is not Comparison.GREATER:
        l *= 2
        if l > (1 << 40):
            raise PrecisionError("x is not certifiably interior")
    margin = glow / (12 * l)
    deriv = fd.deriv
    half_df = dfx.scale(Fraction(1, 2))

    def pick(side: int, prec: int) -> Optional[Fraction]:
        # side +1: a just right of x (descending), -1: just left (ascending)
        a = x.approx(2 * prec) + side * Fraction(1, prec)
        lo_in, hi_in = dom.inner_hull(max(4 * dom.sep, 2 * l))
        if not (lo_in + Fraction(1, l) <= a <= hi_in - Fraction(1, l)):
            return None
        if deriv.eval(a, check=False).compare(half_df, prec) is not Comparison.LESS:
            return None
        fa = fd.eval(a, check=False)
        if side > 0:
            if (fa - margin).compare(fx, prec) is not Comparison.LESS:
                return None
        else:
            if (fa + margin).compare(fx, prec) is not Comparison.GREATER:
                return None
        b = a + side * Fraction(3, 4 * l)
        target = fd.eval(b, check=False)
        want = Comparison.LESS if side > 0 else Comparison.GREATER
        if target.compare(fx, prec) is want:
            return b
        return None

    b_lo = b_hi = None
    prec = max(4 * l, 4 * s.k)
    for _ in range(max_rounds):
        if b_lo is None:
            b_lo = pick(+1, prec)
        if b_hi is None:
            b_hi = pick(-1, prec)
        if b_lo is not None and b_hi is not None:
            return b_lo, b_hi
        prec *= 2
    raise PrecisionError("escape margins not certifiable at the precision cap")


def shift_arg(f: UCFun, x: Fraction) -> UCFun:
    """g(a) = f(a + x) on the shifted domain (rational shift)."""
    x = Fraction(x)
    dom = f.domain
    if not dom.bounded:
        new_dom = Domain.all_q()
    else:
        new_dom = Domain.interval(dom.u - CReal.from_rational(x),
                                  dom.v - CReal.from_rational(x), sep=dom.sep)
    certs = None
    if f.local_certs is not None:
        certs = lambda lo, hi: f.local_certs(lo + x, hi + x)
    return UCFun(new_dom, lambda a: f.eval(a + x, check=False),
                 uc_modulus=f.uc_modulus, local_certs=certs,
                 abs_base=None)
