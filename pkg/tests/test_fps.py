"""Quasi-formal power series: ring laws, shifts, Newton integrals."""

import math
import random
from fractions import Fraction

import pytest

from certreal.creal import CReal
from certreal.errors import DomainError
from certreal.fps import (ConvFPS, dump_truncation, formal_derivative,
                          formal_primitive, fps_exp, fps_from_coeffs,
                          fps_lin_comb, fps_one, fps_product, fps_zero,
                          newton_improper_polyexp, newton_integral,
                          polyexp_fps, quasi_shift, scale_arg,
                          shift_poly_coeffs, verify_newton_algebra,
                          verify_shift_algebra)
from certreal.quadrature import integrate_improper_polyexp
from certreal.series import exp_creal


def brute_convolution(xs, ys, n):
    return sum((xs[i] * ys[n - i] for i in range(n + 1)), Fraction(0))


def test_one_is_identity():
    f = fps_exp()
    prod = fps_product(fps_one(), f)
    for n in range(8):
        assert prod.coeff(n).rat == f.coeff(n).rat


def test_product_by_hand():
    prod = fps_product(fps_from_coeffs([1, 1]), fps_from_coeffs([1, -1]))
    assert [prod.coeff(n).rat for n in range(5)] == [1, 0, -1, 0, 0]


def test_product_vs_brute_convolution():
    f, g = fps_exp(), scale_arg(fps_exp(), Fraction(-1, 2))
    prod = fps_product(f, g)
    xs = [f.coeff(n).rat for n in range(60)]
    ys = [g.coeff(n).rat for n in range(60)]
    for n in range(50):
        assert abs(prod.coeff(n).approx(10**7) - brute_convolution(xs, ys, n)) \
            <= Fraction(1, 10**6)


def test_exp_times_exp_neg_vanishes():
    prod = fps_product(fps_exp(), scale_arg(fps_exp(), -1))
    assert prod.coeff(0).rat == 1
    for n in range(1, 30):
        assert abs(prod.coeff(n).approx(10**7)) <= Fraction(1, 10**6)


def test_ring_associativity_truncations():
    f = fps_from_coeffs([1, 2, 3])
    g = fps_exp()
    h = scale_arg(fps_exp(), -1)
    lhs = fps_product(fps_product(f, g), h)
    rhs = fps_product(f, fps_product(g, h))
    for n in range(12):
        assert abs((lhs.coeff(n) - rhs.coeff(n)).approx(10**7)) <= Fraction(1, 10**6)


def test_order_additivity():
    f = fps_from_coeffs([0, 0, 3])   # ord 2
    g = fps_from_coeffs([0, 5])      # ord 1

    def ord_of(h, upto=10):
        for n in range(upto):
            if h.coeff(n).rat != 0:
                return n
        return None

    assert ord_of(fps_product(f, g)) == ord_of(f) + ord_of(g) == 3


def test_formal_derivative_and_primitive():
    e = fps_exp()
    d = formal_derivative(e)
    for n in range(8):
        assert d.coeff(n).rat == e.coeff(n).rat
    p = formal_primitive(e)
    assert p.coeff(0).rat == 0
    for n in range(1, 8):
        assert p.coeff(n).rat == e.coeff(n).rat  # Exp - 1
    assert formal_primitive(fps_zero()).coeff(3).rat == 0
    # round trips
    rt = formal_derivative(formal_primitive(fps_from_coeffs([2, -1, 5])))
    assert [rt.coeff(n).rat for n in range(4)] == [2, -1, 5, 0]


def test_scale_arg_rules():
    f = fps_from_coeffs([1, 2, 3])
    g = scale_arg(f, Fraction(1, 2))
    assert [g.coeff(n).rat for n in range(3)] == [1, 1, Fraction(3, 4)]
    # f(0 a) collapses to the constant term
    z = scale_arg(f, 0)
    assert [z.coeff(n).rat for n in range(3)] == [1, 0, 0]
    # (int f(xa)) = (1/x) (int f)(xa)
    x = Fraction(3)
    lhs = formal_primitive(scale_arg(f, x))
    rhs = scale_arg(formal_primitive(f), x)
    for n in range(6):
        assert lhs.coeff(n).rat * x == rhs.coeff(n).rat


def test_quasi_shift_zero_is_identity():
    f = fps_exp()
    sh = quasi_shift(f, 0)
    for n in range(10):
        assert abs((sh.coeff(n) - f.coeff(n)).approx(10**7)) <= Fraction(1, 10**6)


def test_quasi_shift_polynomial_oracle():
    # (a+1)^2 + 2(a+1) + 1 = a^2 + 4a + 4
    sh = quasi_shift(fps_from_coeffs([1, 2, 1]), 1)
    want = [4, 4, 1, 0]
    for n, w in enumerate(want):
        assert abs(sh.coeff(n).approx(10**7) - w) <= Fraction(1, 10**6)


def test_quasi_shift_exp():
    sh = quasi_shift(fps_exp(), 1)
    e = exp_creal(Fraction(1))
    for n in range(10):
        d = sh.coeff(n) - e.scale(Fraction(1, math.factorial(n)))
        assert abs(d.approx(10**5)) <= Fraction(1, 10**4)


def test_quasi_formal_exponential_identity():
    # Exp(x(a + y/x)) = exp(y) Exp(xa) for rational x != 0 and y
    for x, y in ((Fraction(2), Fraction(1)), (Fraction(-1), Fraction(1, 2))):
        lhs = quasi_shift(scale_arg(fps_exp(), x), y / x)
        ey = exp_creal(y)
        for n in range(8):
            want = ey * CReal.from_rational(x**n / math.factorial(n))
            assert abs((lhs.coeff(n) - want).approx(10**5)) <= Fraction(1, 10**4)


def test_verify_shift_algebra():
    rep = verify_shift_algebra(fps_exp(), fps_from_coeffs([1, 1]),
                               Fraction(1, 2), Fraction(1, 2), 10, 10**4)
    assert rep.ok
    # polynomial instance is exact to working precision
    rep2 = verify_shift_algebra(fps_from_coeffs([1, 1]), fps_from_coeffs([1, 1]),
                                1, 0, 6, 10**6)
    assert rep2.ok


def test_growth_certificate_spot_check():
    rng = random.Random(13)
    fam = [fps_exp(), polyexp_fps([1, 0, 2]), quasi_shift(fps_exp(), 1)]
    for f in fam:
        for y in (Fraction(1, 2), Fraction(3)):
            c, r = f.growth(y)
            assert 0 < r < 1
            for _ in range(25):
                n = rng.randrange(0, 100)
                xn = abs(f.coeff(n).approx(10**6)) - Fraction(1, 10**6)
                assert xn * y**n <= c * r**n


def test_newton_integral_basics():
    assert newton_integral(fps_one(), 0, 1).approx(1000) == 1
    v = newton_integral(fps_from_coeffs([0, 1]), 0, 1)
    assert abs(v.approx(10**6) - Fraction(1, 2)) <= Fraction(2, 10**6)


def test_fake_lm_bound():
    # |(N) int_0^i a^k Exp(-a)| <= i^(k+1) e^i, e over-approximated by 2.7183
    e_up = Fraction(27183, 10000)
    for i in range(5):
        for k in range(5):
            f = fps_product(fps_from_coeffs([0] * k + [1]), scale_arg(fps_exp(), -1))
            val = newton_integral(f, 0, i)
            r = val.approx(10**6)
            assert abs(r) <= Fraction(i) ** (k + 1) * e_up**i + Fraction(1, 10**6)


def test_newton_improper_values():
    for coeffs, want in (([1], 1), ([0, 0, 1], 2), ([1, 0, 1], 3)):
        v = newton_improper_polyexp(coeffs, 100)
        assert abs(v.approx(400) - want) <= Fraction(1, 100)


def test_newton_algebra_proper():
    rep = verify_newton_algebra(fps_exp(), fps_from_coeffs([1, 2]),
                                0, 1, 2, Fraction(1, 2), 1, 100)
    assert rep.ok, rep.residuals
    # additivity with v = u has residual 0
    same = newton_integral(fps_exp(), 0, 2) \
        - newton_integral(fps_exp(), 0, 0) - newton_integral(fps_exp(), 0, 2)
    assert abs(same.approx(10**4)) <= Fraction(2, 10**4)


@pytest.mark.slow
def test_newton_algebra_improper_instances():
    rep = verify_newton_algebra(fps_exp(), fps_from_coeffs([1]),
                                0, 1, 2, 1, 1, 20, improper_poly=[1])
    assert rep.ok, rep.residuals
    assert {"improper_linearity", "improper_additivity", "improper_shift"} \
        <= set(rep.residuals)


def test_cross_route_agreement():
    # the central redundancy: Riemann and Newton improper integrals agree,
    # and both land on sum x_i i!
    k = 100
    for coeffs in ([1], [0, 1], [2, 0, 1], [0, 0, 0, 1], [1, 2, 0, 0, 1],
                   [0, 1, 0, 0, 0, 1]):
        riem = integrate_improper_polyexp(coeffs, k)
        newt = newton_improper_polyexp(coeffs, k)
        want = sum(c * math.factorial(i) for i, c in enumerate(coeffs))
        assert abs((riem - newt).approx(4 * k)) <= Fraction(2, k)
        assert abs(riem.approx(4 * k) - want) <= Fraction(1, k)
        assert abs(newt.approx(4 * k) - want) <= Fraction(1, k)


def test_dump_truncation_format():
    text = dump_truncation(fps_exp(), 3)
    assert text.splitlines() == ["0 1 1", "1 1 1", "2 1 2"]
    shifted = dump_truncation(quasi_shift(fps_exp(), 1), 2, digits=3)
    assert shifted.splitlines()[0].startswith("0 2.718")


def test_certificate_required():
    with pytest.raises(DomainError):
        ConvFPS(coeff=lambda n: CReal.from_rational(0))
