"""UC/uniformly-differentiable functions: constructors, moduli, finders."""

import math
import random
from fractions import Fraction

import pytest

from certreal.creal import CReal, Comparison, SeparationWitness
from certreal.errors import DomainError
from certreal.series import exp_bounds
from certreal.ucfun import (Domain, UCFun, abs_fun, approx_extremum,
                            approx_zero, bound, derived_uc_modulus,
                            escape_extreme, eval_at_real, exp_scaled,
                            lin_comb, poly, polyexp, product, scaled_exp,
                            shift_arg)


def sym_diff(coeffs):
    """Independent oracle: symbolic differentiation of coefficient lists."""
    return [Fraction(i) * Fraction(c) for i, c in enumerate(coeffs)][1:] or [Fraction(0)]


def horner(coeffs, a):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * Fraction(a) + Fraction(c)
    return acc


@pytest.fixture(scope="module")
def dom03() -> Domain:
    return Domain.interval(0, 3)


@pytest.fixture(scope="module")
def dom01() -> Domain:
    return Domain.interval(0, 1)


# -- polynomials -------------------------------------------------------------


def test_poly_constant_has_zero_derivative(dom03):
    f = poly([Fraction(5, 2)], dom03)
    assert f.eval(Fraction(1, 3)).approx(10) == Fraction(5, 2)
    assert f.deriv.eval(Fraction(1, 3)).approx(10) == 0


def test_poly_identity(dom01):
    f = poly([0, 1], dom01)
    assert f.deriv.eval(Fraction(2, 5)).approx(10) == 1
    assert f.ud_modulus(7) == 1  # exact difference quotient


def test_poly_square(dom03):
    f = poly([0, 0, 1], dom03)
    assert f.eval(Fraction(3, 2)).approx(100) == Fraction(9, 4)
    assert f.deriv.eval(Fraction(3, 2)).approx(100) == 3


def test_poly_matches_symbolic_oracle(dom03):
    rng = random.Random(11)
    for _ in range(10):
        coeffs = [Fraction(rng.randrange(-5, 6), rng.choice([1, 2, 3])) for _ in range(5)]
        f = poly(coeffs, dom03)
        d = sym_diff(coeffs)
        for a in (Fraction(0), Fraction(1, 3), Fraction(5, 2)):
            assert f.eval(a).approx(10**6) == horner(coeffs, a)
            assert f.deriv.eval(a).approx(10**6) == horner(d, a)


def test_poly_unbounded_domain_rules():
    allq = Domain.all_q()
    poly([1, 2], allq)  # linear is fine
    with pytest.raises(DomainError):
        poly([0, 0, 1], allq)


# -- exponentials ------------------------------------------------------------


def test_exp_scaled_values(dom03):
    f = exp_scaled(Fraction(-1), dom03)
    # oracle: series for e, then long division
    lo, hi = exp_bounds(Fraction(-1), 10**8)
    got = f.eval(1).approx(10**8)
    assert lo - Fraction(2, 10**8) <= got <= hi + Fraction(2, 10**8)
    assert abs(f.deriv.eval(0).approx(10**6) + 1) <= Fraction(1, 10**6)


def test_exp_scaled_zero_is_constant(dom03):
    f = exp_scaled(Fraction(0), dom03)
    assert f.eval(2).approx(10) == 1
    assert f.deriv.eval(2).approx(10) == 0


def test_polyexp_reduces_and_derivatives(dom03):
    f0 = polyexp(1, 0, Fraction(-1), dom03)
    g = exp_scaled(Fraction(-1), dom03)
    for a in (Fraction(0), Fraction(1, 2)):
        assert f0.eval(a).approx(10**4) == g.eval(a).approx(10**4)

    f1 = polyexp(1, 1, Fraction(-1), dom03)
    assert abs(f1.deriv.eval(0).approx(10**5) - 1) <= Fraction(1, 10**5)

    f2 = polyexp(1, 2, Fraction(-1), dom03)
    want = exp_bounds(Fraction(-1), 10**7)[0]  # (2-1) e^-1
    assert abs(f2.deriv.eval(1).approx(10**6) - want) <= Fraction(3, 10**6)


# -- algebra -----------------------------------------------------------------


def test_lin_comb(dom01):
    f = poly([0, 1], dom01)
    g = poly([0, 0, 1], dom01)
    h = lin_comb(1, f, 0, g)
    assert h.eval(Fraction(1, 3)).approx(100) == Fraction(1, 3)
    z = lin_comb(1, f, -1, f)
    for a in (Fraction(0), Fraction(2, 3)):
        assert abs(z.eval(a).approx(50)) <= Fraction(2, 50)
    s = lin_comb(2, f, 3, g)
    assert s.eval(Fraction(1, 2)).approx(1000) == Fraction(7, 4)


def test_lin_comb_domain_mismatch(dom01, dom03):
    with pytest.raises(DomainError):
        lin_comb(1, poly([0, 1], dom01), 1, poly([0, 1], dom03))


def test_product_vs_polyexp_oracle(dom03):
    prod = product(poly([0, 1], dom03), exp_scaled(Fraction(-1), dom03))
    pe = polyexp(1, 1, Fraction(-1), dom03)
    for i in range(20):
        a = Fraction(i, 7)
        d = (prod.eval(a) - pe.eval(a)).approx(10**6)
        assert abs(d) <= Fraction(2, 10**6)
    # Leibniz instance: (a e^-a)' at 0 is 1
    assert abs(prod.deriv.eval(0).approx(10**5) - 1) <= Fraction(2, 10**5)


def test_product_identity_factor(dom03):
    one = poly([1], dom03)
    g = polyexp(1, 1, Fraction(1), dom03)
    prod = product(one, g)
    for a in (Fraction(0), Fraction(3, 2)):
        assert abs((prod.eval(a) - g.eval(a)).approx(10**4)) <= Fraction(2, 10**4)


# -- bound / abs -------------------------------------------------------------


def test_bound(dom03):
    k = 10
    b = bound(poly([5], dom03).f, k)
    assert Fraction(5) <= b <= Fraction(5) + Fraction(2, k)
    b2 = bound(poly([0, 1], Domain.interval(0, 1)).f, k)
    assert 1 <= b2 <= 1 + Fraction(2, k)
    b3 = bound(exp_scaled(Fraction(-1), dom03).f, k)
    assert 1 <= b3 <= 1 + Fraction(2, k)


def test_abs_fun(dom01):
    f = abs_fun(poly([-2], dom01).f)
    assert f.eval(Fraction(1, 2)).approx(10) == 2
    g = abs_fun(poly([Fraction(-1, 2), 1], dom01).f)
    assert g.eval(0).approx(100) == Fraction(1, 2)
    # modulus is preserved: sample pairs
    base = poly([Fraction(-1, 2), 1], dom01)
    rng = random.Random(2)
    l = g.uc_modulus(50)
    for _ in range(100):
        a = Fraction(rng.randrange(0, 10**4), 10**4)
        b = min(a + Fraction(1, l), Fraction(1))
        d = abs(g.eval(a).approx(10**4) - g.eval(b).approx(10**4))
        assert d <= Fraction(1, 50) + Fraction(2, 10**4)


# -- extension to reals ------------------------------------------------------


def sqrt2_real() -> CReal:
    def compute(k):
        lo, hi = Fraction(1), Fraction(2)
        while hi - lo > Fraction(1, k):
            mid = (lo + hi) / 2
            if mid * mid <= 2:
                lo = mid
            else:
                hi = mid
        return lo
    return CReal(compute)


def test_eval_at_real_identity_and_square():
    dom = Domain.interval(1, 2)
    s2 = sqrt2_real()
    ident = poly([0, 1], dom)
    v = eval_at_real(ident.f, s2)
    assert abs(v.approx(10**5) - s2.approx(10**5)) <= Fraction(2, 10**5)
    sq = poly([0, 0, 1], dom)
    v2 = eval_at_real(sq.f, s2)
    for k in (100, 10**4):
        assert abs(v2.approx(k) - 2) <= Fraction(1, k)


def test_eval_at_real_rational_agrees():
    dom = Domain.interval(0, 3)
    f = polyexp(1, 1, Fraction(-1), dom)
    a = Fraction(5, 4)
    direct = f.eval(a).approx(10**4)
    via = eval_at_real(f.f, CReal.from_rational(a)).approx(10**4)
    assert abs(direct - via) <= Fraction(2, 10**4)


def test_eval_at_real_outside_domain():
    dom = Domain.interval(0, 1)
    f = poly([0, 1], dom)
    with pytest.raises(DomainError):
        eval_at_real(f.f, CReal.from_rational(5))


def test_eval_at_real_strategy_independent():
    dom = Domain.interval(1, 2)
    sq = poly([0, 0, 1], dom)
    s2 = sqrt2_real()
    k = 1000
    standard = eval_at_real(sq.f, s2).approx(k)
    # alternative selection strategy: approximate twice as finely
    m = 4 * sq.f.uc_modulus(2 * k)
    a = min(max(s2.approx(2 * m), Fraction(1)), Fraction(2))
    alt = sq.f.eval(a, check=False).approx(2 * k)
    assert abs(standard - alt) <= Fraction(2, k)


# -- approximate zeroes and extrema ------------------------------------------


def test_approx_zero_identity():
    dom = Domain.interval(-1, 1)
    f = poly([0, 1], dom)
    y = approx_zero(f.f, 20)
    assert abs(y) <= Fraction(1, 20)


def test_approx_zero_sqrt2():
    dom = Domain.interval(1, 2)
    f = poly([-2, 0, 1], dom)
    y = approx_zero(f.f, 100)
    assert abs(y * y - 2) <= Fraction(1, 100)


def test_approx_zero_exp():
    dom = Domain.interval(0, 1)
    f = lin_comb(1, exp_scaled(Fraction(-1), dom), 1, poly([Fraction(-1, 2)], dom))
    y = approx_zero(f.f, 50)
    assert abs(f.eval(y).approx(400)) <= Fraction(1, 50) + Fraction(1, 400)


def test_approx_zero_requires_sign_change():
    dom = Domain.interval(0, 1)
    f = poly([1, 1], dom)  # strictly positive
    with pytest.raises(DomainError):
        approx_zero(f.f, 10)


def test_approx_extremum_constant(dom01):
    f = poly([Fraction(3, 7)], dom01)
    a = approx_extremum(f.f, 10, "max")
    assert f.eval(a).approx(100) == Fraction(3, 7)


def test_approx_extremum_parabola(dom01):
    f = poly([0, 1, -1], dom01)  # a(1-a), max 1/4 at 1/2
    k = 50
    a = approx_extremum(f.f, k, "max")
    assert abs(f.eval(a).approx(4 * k) - Fraction(1, 4)) <= Fraction(1, k) + Fraction(1, 4 * k)


def test_approx_extremum_exp():
    dom = Domain.interval(0, 2)
    f = exp_scaled(Fraction(-1), dom)
    k = 50
    a = approx_extremum(f.f, k, "min")
    want = exp_bounds(Fraction(-2), 10**6)[0]
    assert abs(f.eval(a).approx(10**5) - want) <= Fraction(1, k) + Fraction(1, 10**4)


# -- escape construction -----------------------------------------------------


def test_escape_extreme_increasing(dom01):
    f = poly([0, 1], dom01)
    x = CReal.from_rational(Fraction(1, 2))
    b_lo, b_hi = escape_extreme(f, x, SeparationWitness(1))
    assert b_lo < Fraction(1, 2) < b_hi
    assert f.eval(b_lo).approx(100) < Fraction(1, 2) < f.eval(b_hi).approx(100)


def test_escape_extreme_decreasing(dom01):
    f = poly([0, -1], dom01)
    x = CReal.from_rational(Fraction(1, 2))
    b_lo, b_hi = escape_extreme(f, x, SeparationWitness(1))
    fx = Fraction(-1, 2)
    assert f.eval(b_lo).approx(1000) < fx < f.eval(b_hi).approx(1000)


def test_escape_extreme_polyexp(dom01):
    f = polyexp(1, 1, Fraction(-1), dom01)
    x = CReal.from_rational(Fraction(1, 4))
    # f'(1/4) = (3/4) e^(-1/4) > 1/2
    b_lo, b_hi = escape_extreme(f, x, SeparationWitness(2))
    fx = f.eval(Fraction(1, 4)).approx(10**6)
    assert f.eval(b_lo).approx(10**6) < fx < f.eval(b_hi).approx(10**6)


# -- modulus soundness suites ------------------------------------------------


def _sample_pairs(dom, l, rng, count):
    lo, hi = dom.hull()
    den = 10**6
    for _ in range(count):
        a = lo + (hi - lo) * Fraction(rng.randrange(0, den + 1), den)
        step = Fraction(rng.randrange(-den, den + 1), den) * Fraction(1, l)
        b = min(max(a + step, lo), hi)
        yield a, b


def modulus_suite(fun, ks=(1, 10, 100), pairs=170, seed=23):
    rng = random.Random(seed)
    p = 10**4
    for k in ks:
        l = fun.uc_modulus(k)
        for a, b in _sample_pairs(fun.domain, l, rng, pairs):
            d = abs(fun.eval(a, check=False).approx(p) - fun.eval(b, check=False).approx(p))
            assert d <= Fraction(1, k) + Fraction(2, p), (a, b, k)


def test_modulus_soundness_suite(dom03):
    fam = [
        poly([1, -2, Fraction(1, 2), 0, 1], dom03).f,
        exp_scaled(Fraction(-2), dom03).f,
        polyexp(2, 2, Fraction(1), dom03).f,
        lin_comb(Fraction(1, 2), poly([0, 1], dom03), -3,
                 exp_scaled(Fraction(1), dom03)).f,
    ]
    for fun in fam:
        modulus_suite(fun)


def test_ud_modulus_soundness(dom03):
    rng = random.Random(29)
    fam = [poly([1, -2, Fraction(1, 2), 0, 1], dom03),
           polyexp(1, 1, Fraction(-1), dom03)]
    p = 10**6
    for fd in fam:
        for k in (1, 10, 100):
            l = fd.ud_modulus(k)
            for a, b in _sample_pairs(fd.domain, l, rng, 60):
                if a == b:
                    continue
                fa = fd.eval(a, check=False).approx(p)
                fb = fd.eval(b, check=False).approx(p)
                da = fd.deriv.eval(a, check=False).approx(p)
                delta = (fb - fa) / (b - a) - da
                slack = Fraction(2, p) / abs(b - a) + Fraction(1, p)
                assert abs(delta) <= Fraction(1, k) + slack, (a, b, k)


def test_derived_modulus_from_bounded_derivative(dom03):
    # functions with bounded uniform derivative pass the UC suite using the
    # (y+1)/k-derived modulus
    fd = polyexp(1, 1, Fraction(-1), dom03)
    rng = random.Random(31)
    p = 10**4
    for k in (1, 10):
        l = derived_uc_modulus(fd, k)
        for a, b in _sample_pairs(fd.domain, l, rng, 80):
            d = abs(fd.eval(a, check=False).approx(p) - fd.eval(b, check=False).approx(p))
            assert d <= Fraction(1, k) + Fraction(2, p)


def test_shift_arg(dom03):
    f = poly([0, 0, 1], dom03)
    g = shift_arg(f.f, Fraction(1))
    assert g.eval(Fraction(1, 2)).approx(100) == Fraction(9, 4)
