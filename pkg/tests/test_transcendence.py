"""The Hilbert verifier and the Liouville machinery."""

import math
from fractions import Fraction

import pytest

from certreal.creal import CReal
from certreal.errors import DomainError, ResourceCapError
from certreal.rat import factorial
from certreal.transcendence import (CandidateRelation, build_pm,
                                    compute_B, convergents_of, enclose_A,
                                    eval_int_poly, hilbert_report,
                                    lambda_approx, lambda_defect_bound,
                                    lambda_irrationality_tail, lambda_value,
                                    lambda_witness, liouville_check,
                                    liouville_constant, onAm_bound,
                                    poly_root_bisect, shift_int_poly)
from certreal.series import exp_creal, sum_series, exp_series


def horner_shift(coeffs, i):
    """Independent oracle for p(a+i): repeated synthetic division by (a - i)
    in reverse (Taylor coefficients at i)."""
    cs = list(coeffs)
    out = []
    for _ in range(len(cs)):
        # evaluate and deflate at a = i via Horner
        acc = 0
        new = []
        for c in reversed(cs):
            acc = acc * i + c
            new.append(acc)
        out.append(acc)
        cs = list(reversed(new[:-1]))
        if not cs:
            break
    return out


GRID_RELATIONS = {
    1: [(1, 1), (-2, 1), (5, 1), (1, -3), (-2, 7)],
    2: [(1, 1, 1), (-2, 0, 1), (5, -1, 2), (1, 4, -1)],
    3: [(1, 1, 1, 1), (-2, 3, 0, 1), (5, 0, -2, 1)],
}


def test_build_pm_hand_expansion():
    assert build_pm(1, 1) == [0, 1, -2, 1]  # a(a-1)^2


def test_build_pm_shape():
    for n in (1, 2, 3):
        for m in (1, 2, 4):
            pm = build_pm(n, m)
            assert pm[0] == 0                       # factor a^m
            assert len(pm) - 1 == m + n * (m + 1)   # degree
            assert pm[-1] == 1                      # monic
            assert len(pm) - 1 < (n + 1) * (m + 1)


def test_shift_int_poly_matches_horner_oracle():
    pm = build_pm(2, 2)
    for i in (0, 1, 2, 3):
        assert shift_int_poly(pm, i) == horner_shift(pm, i)


def test_compute_B_congruence_grid():
    # exact congruence and divisibility for n <= 3, m <= 6, a0 in {1,-2,5}
    for n, rels in GRID_RELATIONS.items():
        for coeffs in rels:
            rel = CandidateRelation(coeffs)
            for m in range(1, 7):
                b = compute_B(rel, m)  # asserts both properties internally
                assert b % factorial(m) == 0
                want = coeffs[0] * (-1) ** (n * (m + 1)) \
                    * factorial(n) ** (m + 1) * factorial(m)
                assert (b - want) % factorial(m + 1) == 0


def test_compute_B_second_path():
    # independent second path: B(m) = sum_i a_i sum_j c_{i,j} j! with the
    # shifted coefficients from the Horner-shift oracle
    for coeffs in ((1, 1), (-2, 0, 1), (5, 0, -2, 1)):
        rel = CandidateRelation(coeffs)
        n = rel.degree
        for m in range(1, 7):
            pm = build_pm(n, m)
            alt = sum(a_i * sum(c * factorial(j)
                                for j, c in enumerate(horner_shift(pm, i)))
                      for i, a_i in enumerate(coeffs))
            assert alt == compute_B(rel, m)


def test_B_nonzero_when_coprime():
    for coeffs in ((1, 1), (-2, 0, 1), (5, 0, -2, 1)):
        rel = CandidateRelation(coeffs)
        n = rel.degree
        for m in range(1, 7):
            if math.gcd(m + 1, abs(coeffs[0]) * factorial(n)) == 1:
                b = compute_B(rel, m)
                assert b != 0 and abs(b) >= factorial(m)


def test_relation_validation():
    with pytest.raises(DomainError):
        CandidateRelation((0, 1))
    with pytest.raises(DomainError):
        CandidateRelation((1, 0))
    with pytest.raises(DomainError):
        CandidateRelation((1,))


def test_enclosure_width_shrinks():
    rel = CandidateRelation((1, 1))
    narrow = enclose_A(rel, 2, 64)
    wide = enclose_A(rel, 2, 16)
    assert narrow.width <= wide.width
    assert narrow.width == Fraction(2, 64)


def test_enclosure_routes_agree():
    rel = CandidateRelation((-3, 1))
    for m in (1, 2):
        a = enclose_A(rel, m, 64, route="newton")
        b = enclose_A(rel, m, 64, route="riemann")
        assert a.lo <= b.hi and b.lo <= a.hi  # overlapping enclosures


def test_onAm_bound_holds():
    for n, rels in GRID_RELATIONS.items():
        for coeffs in rels[:2]:
            rel = CandidateRelation(coeffs)
            y, z = onAm_bound(rel)
            assert z == Fraction(n) ** (n + 1)
            for m in range(1, 7):
                enc = enclose_A(rel, m, 64)
                assert max(abs(enc.lo), abs(enc.hi)) <= y * z**m


def test_enclosure_excludes_negated_B():
    # for the false relation 1 + e = 0 the enclosure excludes -B(m)
    rel = CandidateRelation((1, 1))
    for m in (1, 2):
        b = compute_B(rel, m)
        enc = enclose_A(rel, m, 64)
        assert not (enc.lo <= -b <= enc.hi)


def test_hilbert_report_refutes():
    rep = hilbert_report(CandidateRelation((-3, 1)), 8)
    assert rep.refuted and rep.witness_m is not None and rep.witness_m <= 8
    # independent check that e differs from 3: e <= 2.7183 < 3 - 1/4
    e = exp_creal(Fraction(1)).approx(10**4)
    assert abs(e - 3) > Fraction(1, 4)

    rep2 = hilbert_report(CandidateRelation((1, 1)), 8)
    assert rep2.refuted
    # soundness: |B| - |A|-enclosure top >= m! (1 - 1/10)
    for rep_x in (rep, rep2):
        e0 = next(e for e in rep_x.entries if e.verdict)
        mf = factorial(e0.m)
        assert abs(e0.B) - max(abs(e0.A_lo), abs(e0.A_hi)) >= mf * Fraction(9, 10)


def test_coprimality_filter():
    # a0 even with n = 1: every even m+1 shares a factor with a0 * n!
    rel = CandidateRelation((-2, 1))
    rep = hilbert_report(rel, 6)
    flags = {e.m: e.coprime for e in rep.entries}
    assert flags[1] is False and flags[3] is False  # m+1 even
    assert flags[2] is True


def test_report_serialization():
    rep = hilbert_report(CandidateRelation((1, 1)), 3)
    d = rep.to_json_dict()
    assert d["verdict"] == "refuted"
    rec = d["entries"][0]
    assert set(rec) == {"m", "B", "B_mod_mfact", "congruence_ok", "A_lo",
                        "A_hi", "bound_ok", "verdict"}
    int(rec["B"])  # decimal integer text
    assert "/" in rec["A_lo"] or rec["A_lo"].lstrip("-").isdigit()


# -- Liouville ---------------------------------------------------------------


@pytest.fixture(scope="module")
def sqrt2():
    return poly_root_bisect([-2, 0, 1], Fraction(1), Fraction(2))


def test_poly_root_bisect(sqrt2):
    q = sqrt2.approx(10**6)
    assert abs(q * q - 2) <= Fraction(5, 10**6)
    with pytest.raises(DomainError):
        poly_root_bisect([1, 0, 1], Fraction(0), Fraction(1))


def test_liouville_constant(sqrt2):
    y = liouville_constant([-2, 0, 1], sqrt2, 20)
    assert Fraction(1, 5) <= y <= 1
    # grid-bound oracle on |2a| over [sqrt2-1, sqrt2+1]
    w_true = 2 * (sqrt2.approx(10**6) + 1)
    assert 1 / y >= w_true - Fraction(1, 2)
    # scaling the polynomial by 2 halves 1/w
    y2 = liouville_constant([-4, 0, 2], sqrt2, 20)
    assert Fraction(1, 2) * Fraction(95, 100) <= y2 / y <= Fraction(1, 2) * Fraction(105, 100)


def test_liouville_constant_needs_root(sqrt2):
    with pytest.raises(DomainError):
        liouville_constant([-3, 0, 1], sqrt2, 50)
    with pytest.raises(DomainError):
        liouville_constant([-2, 1], sqrt2, 20)


def test_liouville_check_convergents(sqrt2):
    y = liouville_constant([-2, 0, 1], sqrt2, 20)
    convs = convergents_of(sqrt2, 10**4)
    assert Fraction(3, 2) in convs and Fraction(7, 5) in convs and Fraction(17, 12) in convs
    wit = liouville_check([-2, 0, 1], sqrt2, y, convs)
    assert wit.all_ok
    # exact-oracle cross-check: |sqrt2 - p/q| > y/q^2 iff (p/q + y/q^2)^2 < 2
    # or (p/q - y/q^2)^2 > 2, decided in integers
    for s in wit.samples:
        r = Fraction(s.p, s.q)
        rhs = y / s.q**2
        assert (r + rhs) ** 2 < 2 or (r - rhs) ** 2 > 2


def test_liouville_check_far_integer(sqrt2):
    y = liouville_constant([-2, 0, 1], sqrt2, 20)
    wit = liouville_check([-2, 0, 1], sqrt2, y, [Fraction(7)])
    assert wit.samples[0].status == "ok"


def test_liouville_witness_serialization(sqrt2):
    y = liouville_constant([-2, 0, 1], sqrt2, 20)
    wit = liouville_check([-2, 0, 1], sqrt2, y, [Fraction(3, 2)])
    d = wit.to_json_dict()
    assert d["degree"] == 2 and d["samples"][0]["status"] == "ok"


# -- lambda ------------------------------------------------------------------


def test_lambda_approx_values():
    assert lambda_approx(1) == (1, 2)
    assert lambda_approx(2) == (3, 4)
    k3, l3 = lambda_approx(3)
    assert l3 == 64
    # exact defect certification for m = 2, 3
    for m in (2, 3):
        km, lm = lambda_approx(m)
        assert lambda_defect_bound(m) <= Fraction(1, lm**m)
    with pytest.raises(ResourceCapError):
        lambda_approx(7)


def test_lambda_value_matches_approximants():
    lam = lambda_value()
    for m in (1, 2, 3):
        km, lm = lambda_approx(m)
        q = lam.approx(lm**m * 4)
        assert abs(q - Fraction(km, lm)) <= Fraction(1, lm**m) + Fraction(1, lm**m * 4)


def test_lambda_witness():
    m = lambda_witness(2, Fraction(1, 10))
    assert m == 3
    km, lm = lambda_approx(m)
    # the approximant violates the degree-2 inequality with constant 1/10
    assert lambda_defect_bound(m) < Fraction(1, 10) / lm**2
    assert lambda_witness(2, Fraction(2)) == 3
    with pytest.raises(ResourceCapError):
        lambda_witness(6, Fraction(1, 10**100))
    with pytest.raises(DomainError):
        lambda_witness(1, Fraction(1, 10))


def test_lambda_irrationality_tails():
    for l in (1, 2, 3):
        lo, hi = lambda_irrationality_tail(l)
        assert 0 < lo <= hi < 1
    # oracle: direct partial sums stay inside the certified bracket
    for l in (1, 2, 3):
        lo, hi = lambda_irrationality_tail(l)
        direct = sum(l * Fraction(1, 2 ** (factorial(n) - factorial(l)))
                     for n in range(l + 1, l + 4))
        assert lo <= direct <= hi
