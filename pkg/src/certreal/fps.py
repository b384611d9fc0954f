"""Convergent formal power series and the quasi-formal calculus.

A ``ConvFPS`` is a coefficient stream together with a growth certificate:
for every radius y > 0, ``growth(y)`` produces rationals (C, r) with
0 < r < 1 and |x_n| y^n <= C r^n for all n.  The certificate is what makes
the quasi-formal operations effective: the shifted series

    f(a + x) has coefficient_n = sum_{m >= n} binom(m, n) x_m x^(m-n)

needs a computable tail index for its inner sums, and evaluation of formal
primitives at real points needs one for the outer sums.

Internally the series built here (polynomials, the formal exponential and
everything the ring operations and shifts produce from them) also carry the
sharper exponential-type bound |x_n| <= C s^n / n!.  That family is closed
under every operation - products add the s parameters, the quasi-formal
shift multiplies C by e^(s|x|) - and its factorially decaying tails keep
inner sums short where a geometric certificate would overshoot badly.  The
radius-indexed geometric interface is derived from it.

Newton integration evaluates the formal primitive at the two endpoints;
the improper variant takes the limit along an explicit certified cutoff
schedule driven by the exponential-dominance bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from .creal import CReal, as_creal, creal_sum
from .errors import DomainError
from .rat import binomial, factorial
from .series import ConvSeries, exp_dominance_bound, exp_upper, exp_creal, sum_series

Number = Union[int, Fraction, CReal]

Growth = tuple[Fraction, Fraction]
Expo = tuple[Fraction, Fraction]  # (C, s): |x_n| <= C s^n / n!


def _geom_tail_index(c: Fraction, r: Fraction, k: int) -> int:
    """Smallest-ish N with sum_{n>N} c r^n = c r^(N+1)/(1-r) <= 1/k."""
    if c <= 0:
        return 0
    target = (1 - r) / (c * k)
    n = 0
    p = r
    while p > target:
        p *= r
        n += 1
        if n > 10_000_000:
            raise DomainError("growth certificate too weak for a tail index")
    return n


def _fact_tail_index(c: Fraction, t: Fraction, k: int) -> int:
    """N with sum_{m>N} c t^m / m! <= 1/k.

    Past m >= 2t the terms at least halve, so the tail is at most twice its
    first term; a float scan locates the candidate and the exact inequality
    2 c t^(N+1)/(N+1)! <= 1/k is then verified (and bumped if needed).
    """
    if c <= 0 or t <= 0:
        return 0
    n = max(1, math.ceil(2 * t))
    target = -math.log2(float(Fraction(1, k) / (2 * c))) if c * k > 0 else 0.0
    lt = math.log2(float(t)) if t > 0 else 0.0
    while n * lt - math.lgamma(n + 2) / math.log(2) > -target - 2:
        n += max(1, n // 8)
    while 2 * c * t ** (n + 1) / factorial(n + 1) > Fraction(1, k):
        n += 1 + n // 8
    return n


def _peak_bound(t: Fraction) -> Fraction:
    """max_n (n+1) t^n for 0 < t < 1, by walking past the peak."""
    best = Fraction(1)
    p = Fraction(1)
    n = 0
    while True:
        p *= t
        n += 1
        v = (n + 1) * p
        if v <= best:
            return best
        best = v


def _growth_from_expo(expo: Expo, y: Fraction) -> Growth:
    """Geometric certificate at radius y from |x_n| <= C s^n/n!:
    (sy)^n/n! <= (2sy)^m/m! (1/2)^n for n >= m = ceil(2sy)."""
    c, s = expo
    t = s * y
    if t == 0:
        return max(c, Fraction(1)), Fraction(1, 2)
    m = max(1, math.ceil(2 * t))
    lead = max((2 * t) ** m / factorial(m),
               max((t**n * 2**n / factorial(n) for n in range(m)), default=Fraction(0)))
    return max(c * lead, Fraction(1)), Fraction(1, 2)


class ConvFPS:
    """Coefficient stream (memoized) plus radius-indexed growth certificate."""

    def __init__(self, coeff: Callable[[int], CReal],
                 growth: Optional[Callable[[Fraction], Growth]] = None,
                 rat_coeff: Optional[Callable[[int], Fraction]] = None,
                 expo: Optional[Expo] = None):
        if growth is None and expo is None:
            raise DomainError("a convergence certificate is required")
        self._coeff = coeff
        self._growth = growth
        self.rat_coeff = rat_coeff
        self.expo = expo
        self._ccache: dict[int, CReal] = {}
        self._gcache: dict[Fraction, Growth] = {}

    def coeff(self, n: int) -> CReal:
        if n < 0:
            raise DomainError("coefficient index must be >= 0")
        if n not in self._ccache:
            self._ccache[n] = self._coeff(n)
        return self._ccache[n]

    def growth(self, y: Fraction) -> Growth:
        y = Fraction(y)
        if y <= 0:
            raise DomainError("growth radius must be positive")
        if y not in self._gcache:
            if self._growth is not None:
                c, r = self._growth(y)
            else:
                c, r = _growth_from_expo(self.expo, y)
            if not 0 < r < 1:
                raise DomainError("growth ratio must lie in (0, 1)")
            self._gcache[y] = (c, r)
        return self._gcache[y]

    def truncation(self, n_terms: int) -> list[CReal]:
        return [self.coeff(n) for n in range(n_terms)]


def _bound_of(x: CReal) -> Fraction:
    return abs(x.rat) if x.rat is not None else x.bound_abs()


def fps_from_coeffs(coeffs: Sequence[Number]) -> ConvFPS:
    """Polynomial viewed as a convergent FPS."""
    cs = [as_creal(c) for c in coeffs] or [CReal.from_rational(0)]
    cb = [_bound_of(c) for c in cs]
    rational = all(c.rat is not None for c in cs)
    expo = (max((cb[n] * factorial(n) for n in range(len(cs))), default=Fraction(0)),
            Fraction(1))
    return ConvFPS(
        coeff=lambda n: cs[n] if n < len(cs) else CReal.from_rational(0),
        expo=expo,
        rat_coeff=(lambda n: cs[n].rat if n < len(cs) else Fraction(0)) if rational else None)


def fps_zero() -> ConvFPS:
    return fps_from_coeffs([0])


def fps_one() -> ConvFPS:
    return fps_from_coeffs([1])


def fps_exp() -> ConvFPS:
    """The formal exponential: coefficients 1/n!."""
    return ConvFPS(coeff=lambda n: CReal.from_rational(Fraction(1, factorial(n))),
                   expo=(Fraction(1), Fraction(1)),
                   rat_coeff=lambda n: Fraction(1, factorial(n)))


def fps_lin_comb(z: Number, f: ConvFPS, w: Number, g: ConvFPS) -> ConvFPS:
    z, w = as_creal(z), as_creal(w)
    zb, wb = _bound_of(z), _bound_of(w)

    expo = None
    if f.expo and g.expo:
        expo = (zb * f.expo[0] + wb * g.expo[0], max(f.expo[1], g.expo[1]))

    def growth(y: Fraction) -> Growth:
        cf, rf = f.growth(y)
        cg, rg = g.growth(y)
        return zb * cf + wb * cg + 1, max(rf, rg)

    rat = None
    if z.rat is not None and w.rat is not None and f.rat_coeff and g.rat_coeff:
        zr, wr, fr, gr = z.rat, w.rat, f.rat_coeff, g.rat_coeff
        rat = lambda n: zr * fr(n) + wr * gr(n)
    return ConvFPS(coeff=lambda n: z * f.coeff(n) + w * g.coeff(n),
                   growth=None if expo else growth, rat_coeff=rat, expo=expo)


def fps_product(f: ConvFPS, g: ConvFPS) -> ConvFPS:
    """Cauchy product.  Exponential-type certificates convolve exactly
    (the s parameters add); the geometric fallback absorbs the (n+1)
    convolution factor into a slightly larger ratio."""

    expo = None
    if f.expo and g.expo:
        expo = (f.expo[0] * g.expo[0], f.expo[1] + g.expo[1])

    def growth(y: Fraction) -> Growth:
        cf, rf = f.growth(y)
        cg, rg = g.growth(y)
        r0 = max(rf, rg)
        r = (1 + r0) / 2
        return cf * cg * _peak_bound(r0 / r), r

    rat = None
    if f.rat_coeff and g.rat_coeff:
        fr, gr = f.rat_coeff, g.rat_coeff

        def rat(n: int) -> Fraction:
            return sum((fr(i) * gr(n - i) for i in range(n + 1)), Fraction(0))

    def coeff(n: int) -> CReal:
        if rat is not None:
            return CReal.from_rational(rat(n))
        return creal_sum([f.coeff(i) * g.coeff(n - i) for i in range(n + 1)])

    return ConvFPS(coeff=coeff, growth=None if expo else growth,
                   rat_coeff=rat, expo=expo)


def scale_arg(f: ConvFPS, x: Number) -> ConvFPS:
    """f(x a): coefficient_n = x_n x^n."""
    x = as_creal(x)
    xb = _bound_of(x)
    powers: list[CReal] = [CReal.from_rational(1)]

    def xpow(n: int) -> CReal:
        while len(powers) <= n:
            powers.append(powers[-1] * x)
        return powers[n]

    expo = (f.expo[0], f.expo[1] * xb) if f.expo else None

    def growth(y: Fraction) -> Growth:
        if xb == 0:
            return _bound_of(f.coeff(0)) + 1, Fraction(1, 2)
        return f.growth(xb * y)

    rat = None
    if x.rat is not None and f.rat_coeff:
        xr, fr = x.rat, f.rat_coeff
        rat = lambda n: fr(n) * xr**n
    return ConvFPS(coeff=lambda n: f.coeff(n) * xpow(n),
                   growth=None if expo else growth, rat_coeff=rat, expo=expo)


def formal_derivative(f: ConvFPS) -> ConvFPS:
    expo = (f.expo[0] * f.expo[1], f.expo[1]) if f.expo else None

    def growth(y: Fraction) -> Growth:
        c, r = f.growth(y)
        rho = (1 + r) / 2
        return (c * r / y) * _peak_bound(r / rho) + 1, rho

    rat = None
    if f.rat_coeff:
        fr = f.rat_coeff
        rat = lambda n: (n + 1) * fr(n + 1)
    return ConvFPS(coeff=lambda n: f.coeff(n + 1).scale(n + 1),
                   growth=None if expo else growth, rat_coeff=rat, expo=expo)


def formal_primitive(f: ConvFPS) -> ConvFPS:
    expo = None
    if f.expo:
        c, s = f.expo
        expo = (c / s, s) if s > 0 else (max(c, Fraction(1)), Fraction(1))

    def growth(y: Fraction) -> Growth:
        c, r = f.growth(y)
        return c * y / r + 1, r

    rat = None
    if f.rat_coeff:
        fr = f.rat_coeff
        rat = lambda n: Fraction(0) if n == 0 else fr(n - 1) / n

    def coeff(n: int) -> CReal:
        if n == 0:
            return CReal.from_rational(0)
        return f.coeff(n - 1).scale(Fraction(1, n))

    return ConvFPS(coeff=coeff, growth=None if expo else growth,
                   rat_coeff=rat, expo=expo)


def quasi_shift(f: ConvFPS, x: Number) -> ConvFPS:
    """f(a + x): each coefficient is a certified binomial series over the
    original coefficients; the result carries a derived growth certificate
    (for exponential-type series, C picks up exactly a factor e^(s |x|))."""
    x = as_creal(x)
    xb = _bound_of(x)
    xhat = max(xb, Fraction(1))
    powers: list[CReal] = [CReal.from_rational(1)]

    def xpow(n: int) -> CReal:
        while len(powers) <= n:
            powers.append(powers[-1] * x)
        return powers[n]

    if f.expo:
        c0, s0 = f.expo
        inner_t = 2 * s0 * xhat  # binom(m,n) x̄^(m-n) |x_m| <= C (2 s x̂)^m / m!

        def inner_tail(n: int, k: int) -> int:
            return max(n, _fact_tail_index(c0, inner_t, k))

        expo = (c0 * exp_upper(s0 * xb), s0)
    else:
        c_out, r_out = f.growth(2 * xhat + 1)

        def inner_tail(n: int, k: int) -> int:
            return max(n, _geom_tail_index(c_out, r_out, k))

        expo = None

    def coeff_series(n: int) -> ConvSeries:
        def term(m: int) -> CReal:
            if m < n:
                return CReal.from_rational(0)
            return f.coeff(m).scale(binomial(m, n)) * xpow(m - n)

        rat_term = None
        if f.rat_coeff and x.rat is not None:
            fr, xr = f.rat_coeff, x.rat
            rat_term = lambda m: Fraction(0) if m < n else fr(m) * binomial(m, n) * xr ** (m - n)

        return ConvSeries(coeff=term, tail=lambda k: inner_tail(n, k),
                          rat_coeff=rat_term)

    def coeff(n: int) -> CReal:
        return sum_series(coeff_series(n))

    def growth(y: Fraction) -> Growth:
        c, r = f.growth(xb + 2 * y)
        return c / (1 - r) + 1, Fraction(1, 2)

    return ConvFPS(coeff=coeff, growth=None if expo else growth, expo=expo)


def newton_integral(f: ConvFPS, u: Number, v: Number) -> CReal:
    """Difference of the formal primitive's certified values at v and u."""
    return _primitive_value(f, as_creal(v)) - _primitive_value(f, as_creal(u))


def _primitive_value(f: ConvFPS, x: CReal) -> CReal:
    """sum_n x_n x^(n+1)/(n+1) as a certified series sum."""
    xb = _bound_of(x)
    if xb == 0 and x.rat is not None:
        return CReal.from_rational(0)
    scale = max(xb, Fraction(1))
    if f.expo:
        c0, s0 = f.expo
        tail = lambda k: _fact_tail_index(c0 * scale, s0 * xb, k)
    else:
        c0, r0 = f.growth(xb + 1)
        tail = lambda k: _geom_tail_index(scale * c0, r0, k)
    powers: list[CReal] = [CReal.from_rational(1)]

    def xpow(n: int) -> CReal:
        while len(powers) <= n:
            powers.append(powers[-1] * x)
        return powers[n]

    def term(n: int) -> CReal:
        return f.coeff(n).scale(Fraction(1, n + 1)) * xpow(n + 1)

    rat_term = None
    if f.rat_coeff and x.rat is not None:
        fr, xr = f.rat_coeff, x.rat
        rat_term = lambda n: fr(n) * xr ** (n + 1) / (n + 1)

    return sum_series(ConvSeries(coeff=term, tail=tail, rat_coeff=rat_term))


# ---------------------------------------------------------------------------
# improper Newton integrals of p(a) Exp(-a)
# ---------------------------------------------------------------------------


def polyexp_fps(p: Sequence[Number]) -> ConvFPS:
    """The convergent FPS of p(a) e^(-a)."""
    return fps_product(fps_from_coeffs(p), scale_arg(fps_exp(), -1))


def _repeated_derivative_sum(p: Sequence[CReal]) -> list[CReal]:
    """P = p + p' + p'' + ...; satisfies P - P' = p, so -P(a) e^-a is the
    closed primitive of p(a) e^-a, which yields the decay rate of the
    Newton integrals' limit."""
    acc = list(p)
    cur = list(p)
    while len(cur) > 1:
        cur = [cur[i].scale(i) for i in range(1, len(cur))]
        for i, c in enumerate(cur):
            acc[i] = acc[i] + c
    return acc


def improper_cutoff(p: Sequence[Number], j: int) -> int:
    """Y such that |(N) integral over [0, Y] - limit| <= 1/j for p(a)Exp(-a)."""
    cs = [as_creal(c) for c in p]
    big_p = _repeated_derivative_sum(cs)
    pbar = sum((_bound_of(c) for c in big_p), Fraction(0)) + 1
    deg = len(cs) - 1
    return exp_dominance_bound(deg, math.ceil(j * pbar))


def newton_improper_polyexp(p: Sequence[Number], k: int) -> CReal:
    """(N) integral of p(a) Exp(-a) over [0, +infinity), within 1/k.

    The limit is taken along the certified cutoff schedule: beyond the
    exponential-dominance cutoff the primitive's remaining variation
    (a polynomial times e^-a) is below budget.
    """
    if k < 1:
        raise DomainError("need k >= 1")
    q = polyexp_fps(p)

    def compute(j: int) -> Fraction:
        y_cut = improper_cutoff(p, 2 * j)
        return newton_integral(q, 0, y_cut).approx(2 * j)

    value = CReal(compute)
    value.approx(k)
    return value


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoeffReport:
    residuals: dict
    tolerance: Fraction

    @property
    def ok(self) -> bool:
        return all(max(rs, default=Fraction(0)) <= self.tolerance
                   for rs in self.residuals.values())


def _coeff_residuals(f: ConvFPS, g: ConvFPS, n_terms: int, prec: int) -> list[Fraction]:
    out = []
    for n in range(n_terms):
        d = f.coeff(n) - g.coeff(n)
        out.append(abs(d.approx(prec)) + Fraction(1, prec))
    return out


def verify_shift_algebra(f: ConvFPS, g: ConvFPS, x: Number, y: Number,
                         n_terms: int, k: int) -> CoeffReport:
    """Coefficientwise residuals (first n_terms) of the shift identities:
    shifting twice equals shifting by the sum, and shifting commutes with
    products."""
    prec = 4 * k
    x, y = as_creal(x), as_creal(y)
    two_step = quasi_shift(quasi_shift(f, x), y)
    one_step = quasi_shift(f, x + y)
    prod_shift = quasi_shift(fps_product(f, g), x)
    shift_prod = fps_product(quasi_shift(f, x), quasi_shift(g, x))
    return CoeffReport(
        residuals={
            "repeated_shift": _coeff_residuals(two_step, one_step, n_terms, prec),
            "shift_of_product": _coeff_residuals(prod_shift, shift_prod, n_terms, prec),
        },
        tolerance=Fraction(1, k))


def verify_newton_algebra(f: ConvFPS, g: ConvFPS, u: Number, v: Number,
                          w: Number, x: Number, shift: Number, k: int,
                          improper_poly: Optional[Sequence[Number]] = None) -> CoeffReport:
    """Residuals of the Newton-integral identities: linearity, additivity
    along u -> v -> w, argument shift, and (when a polynomial is supplied)
    the improper linearity/additivity/shift instances on p(a) Exp(-a)."""
    prec = 8 * k
    x = as_creal(x)
    shift = as_creal(shift)
    resid: dict = {}

    combo = fps_lin_comb(x, f, 1, g)
    lhs = newton_integral(combo, u, v)
    rhs = x * newton_integral(f, u, v) + newton_integral(g, u, v)
    resid["linearity"] = [abs((lhs - rhs).approx(prec)) + Fraction(1, prec)]

    add = newton_integral(f, u, w) - newton_integral(f, u, v) - newton_integral(f, v, w)
    resid["additivity"] = [abs(add.approx(prec)) + Fraction(1, prec)]

    sh = newton_integral(quasi_shift(f, shift), u, v) \
        - newton_integral(f, as_creal(u) + shift, as_creal(v) + shift)
    resid["shift"] = [abs(sh.approx(prec)) + Fraction(1, prec)]

    if improper_poly is not None:
        resid.update(_improper_residuals(improper_poly, k, prec))
    return CoeffReport(residuals=resid, tolerance=Fraction(3, k))


def shift_poly_coeffs(p: Sequence[Number], s: Number) -> list[CReal]:
    """Exact coefficients of p(a + s)."""
    cs = [as_creal(c) for c in p]
    s = as_creal(s)
    out: list[CReal] = [CReal.from_rational(0) for _ in cs]
    spow: list[CReal] = [CReal.from_rational(1)]
    while len(spow) < len(cs):
        spow.append(spow[-1] * s)
    for t, c in enumerate(cs):
        for j in range(t + 1):
            out[j] = out[j] + c.scale(binomial(t, j)) * spow[t - j]
    return out


def newton_improper_of_shifted(p: Sequence[Number], s: Number, k: int) -> CReal:
    """(N) integral over [0, inf) of the quasi-shifted series
    (p(a) Exp(-a))(a + s), evaluated through the quasi-formal shift.

    Only the cutoff schedule uses the exact coefficient expansion of
    p(a + s) (for the decay-rate constant); the integrand itself is the
    binomial double-sum series.
    """
    s = as_creal(s)
    shifted = quasi_shift(polyexp_fps(p), s)
    p_shift = shift_poly_coeffs(p, s)
    # the shifted integrand is e^-s * p(a + s) e^-a; |e^-s| <= e^|s|
    efac = exp_upper(_bound_of(s))

    def compute(j: int) -> Fraction:
        y_cut = improper_cutoff(p_shift, math.ceil(2 * j * efac))
        return newton_integral(shifted, 0, y_cut).approx(2 * j)

    value = CReal(compute)
    value.approx(k)
    return value


def _improper_residuals(p: Sequence[Number], k: int, prec: int) -> dict:
    out: dict = {}
    cs = [as_creal(c) for c in p]
    base = newton_improper_polyexp(cs, 4 * k)
    # linearity: integral of 3p equals 3 times the integral of p
    lin = newton_improper_polyexp([c.scale(3) for c in cs], 4 * k) - base.scale(3)
    out["improper_linearity"] = [abs(lin.approx(prec)) + Fraction(1, prec)]
    # additivity at v = 1: full = [0, v] head + quasi-shifted remainder
    v = Fraction(1)
    head = newton_integral(polyexp_fps(cs), 0, v)
    tail_series = newton_improper_of_shifted(cs, v, 4 * k)
    add = base - head - tail_series
    out["improper_additivity"] = [abs(add.approx(prec)) + Fraction(1, prec)]
    # shift: quasi-shift route against the coefficient-expanded route;
    # (p Exp(-a))(a + v) = e^-v p(a + v) Exp(-a), so rescaling by e^v must
    # land on the exactly expanded polynomial's integral
    direct = newton_improper_polyexp(shift_poly_coeffs(cs, v), 4 * k)
    sh = tail_series * exp_creal(v) - direct
    out["improper_shift"] = [abs(sh.approx(prec)) + Fraction(1, prec)]
    return out


def dump_truncation(f: ConvFPS, n_terms: int, digits: int = 6) -> str:
    """Per line: index, numerator, denominator (exact coefficients) or a
    decimal with an error marker."""
    lines = []
    for n in range(n_terms):
        c = f.coeff(n)
        if c.rat is not None:
            lines.append(f"{n} {c.rat.numerator} {c.rat.denominator}")
        else:
            from .creal import render
            lines.append(f"{n} {render(c, digits)}")
    return "\n".join(lines)
