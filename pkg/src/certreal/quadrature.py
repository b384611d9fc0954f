"""Certified Riemann integration of UC functions on rational intervals.

Integrals are limits of Riemann sums over partitions of shrinking norm;
here every returned approximation carries an explicit error budget, split
between the partition (rule) error and the precision of the point
evaluations.

Two uniform schemes are used, both with midpoint tags:

* modulus scheme - the generic route: partition norm below
  1/uc_modulus(ceil(2 (v - u + 1) k)) forces the Riemann sum within 1/k of
  the integral (norm-based two-partition estimate).

* certificate scheme - when the integrand carries interval certificates,
  the midpoint sum over a cell [x0, x1] of width d satisfies

      |integral - f(mid) d| <= K d^3 / 12

  because f(b) = f(mid) + (f'(mid) + delta(b)) (b - mid), the linear term
  integrates to zero by symmetry, and |delta| <= K |b - mid|.  Cell counts
  then scale with sqrt(k) instead of k, which is what makes the longer
  poly x exp integrals tractable at exact-rational cost.  Unit blocks are
  certified separately so that decaying factors (e^-a) actually shrink the
  local constants.  For |f| built over a certified f, cells on which f
  provably keeps its sign reuse the second-order bound; the remaining
  cells fall back to the first-order slope bound.

Improper integrals of p(a) e^-a split at a cutoff A with the certified
tail majorant |p(a)| <= C e^(a/2), C = (sum |coeff|) (2 deg)! 2^deg, so
that the tail beyond A is at most 2 C e^(-A/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from .creal import CReal, Comparison, as_creal, creal_sum
from .errors import DomainError, PrecisionError, ResourceCapError
from .rat import factorial
from .series import exp_bounds, exp_dominance_bound, exp_partial, exp_tail_cutoff
from .ucfun import Certs, Domain, UCFun, UDiffFun, abs_fun, bound, eval_at_real, poly, exp_scaled, product, shift_arg

Number = Union[int, Fraction, CReal]

_CELL_CAP = 40_000_000


@dataclass(frozen=True)
class TaggedPartition:
    """Ordered subdivision points with one rational tag per cell."""

    points: Sequence[Fraction]
    tags: Sequence[Fraction]

    def __post_init__(self) -> None:
        pts, tags = self.points, self.tags
        if len(pts) < 2 or len(tags) != len(pts) - 1:
            raise DomainError("partition needs n+1 points and n tags")
        for i in range(len(pts) - 1):
            if not pts[i] < pts[i + 1]:
                raise DomainError("partition points must increase strictly")
            if not pts[i] <= tags[i] <= pts[i + 1]:
                raise DomainError(f"tag {tags[i]} escapes its cell")

    @property
    def norm(self) -> Fraction:
        return max(b - a for a, b in zip(self.points, self.points[1:]))

    @staticmethod
    def uniform(lo: Fraction, hi: Fraction, n: int) -> "TaggedPartition":
        step = (hi - lo) / n
        pts = [lo + i * step for i in range(n)] + [hi]
        tags = [(pts[i] + pts[i + 1]) / 2 for i in range(n)]
        return TaggedPartition(pts, tags)


@dataclass(frozen=True)
class IntegralResult:
    value: CReal
    requested_k: int
    partition_norm_used: Fraction


def riemann_sum(f: UCFun, p: TaggedPartition) -> CReal:
    """Exact weighted sum of the tagged values."""
    dom = f.domain
    if dom.bounded:
        lo, hi = dom.hull()
        if p.points[0] < lo or p.points[-1] > hi:
            raise DomainError("partition leaves the domain")
    terms = [f.eval(t, check=False).scale(b - a)
             for a, b, t in zip(p.points, p.points[1:], p.tags)]
    return creal_sum(terms)


# ---------------------------------------------------------------------------
# core fixed-endpoint integrator
# ---------------------------------------------------------------------------


def _block_edges(lo: Fraction, hi: Fraction) -> list[Fraction]:
    nb = max(1, math.ceil(hi - lo))
    return [lo + (hi - lo) * i / nb for i in range(nb)] + [hi]


def _alloc_cells(kappas: list[Fraction], budget: Fraction,
                 mins: list[int]) -> list[int]:
    """Cells per block minimizing the total count subject to
    sum kappa_j / (12 n_j^2) <= budget.  Floats guide the allocation; the
    exact Fractions certify it afterwards."""
    t = sum(float(k) ** (1 / 3) for k in kappas if k > 0)
    if t == 0:
        ns = [max(1, m) for m in mins]
    else:
        c = math.sqrt(t / (12 * float(budget)))
        ns = [max(1, m, math.ceil(float(k) ** (1 / 3) * c))
              for k, m in zip(kappas, mins)]
    while sum((k / (12 * n * n) for k, n in zip(kappas, ns)), Fraction(0)) > budget:
        ns = [2 * n for n in ns]
    if sum(ns) > _CELL_CAP:
        raise ResourceCapError(f"{sum(ns)} quadrature cells exceed the cap")
    return ns


def _approx_cert(f: UCFun, lo: Fraction, hi: Fraction, j: int,
                 signed_base: Optional[UCFun]) -> tuple[Fraction, Fraction]:
    """Midpoint sum within 1/j using interval certificates.

    ``signed_base`` is set when f = |g|: cells where g provably keeps its
    sign reuse g's second-order bound, other cells take the first-order
    slope bound and the whole partition is refined until the a-posteriori
    error certificate fits the budget.
    """
    base = signed_base if signed_base is not None else f
    edges = _block_edges(lo, hi)
    blocks = list(zip(edges, edges[1:]))
    certs = [base.certs_on(a, b) for a, b in blocks]
    rule_budget = Fraction(1, 2 * j)
    eval_budget = Fraction(1, 2 * j)
    kappas = [c.delta * (b - a) ** 3 for c, (a, b) in zip(certs, blocks)]
    mins = [1 if c.gap is None else math.ceil((b - a) / c.gap)
            for c, (a, b) in zip(certs, blocks)]
    ns = _alloc_cells(kappas, rule_budget, mins)

    for _ in range(60):
        total_cells = sum(ns)
        q = max(1, math.ceil((hi - lo) / eval_budget))
        acc = Fraction(0)
        err = Fraction(0)
        norm = Fraction(0)
        for (a, b), c, n in zip(blocks, certs, ns):
            width = b - a
            step = width / n
            norm = max(norm, step)
            half_osc = c.slope * step / 2
            for i in range(n):
                mid = a + step * (2 * i + 1) / 2
                v = f.eval(mid, check=False).approx(q)
                acc += v * step
                if signed_base is None:
                    err += c.delta * step**3 / 12
                else:
                    # sign-certain iff |g(mid)| clears the possible swing
                    if abs(v) > half_osc + Fraction(1, q):
                        err += c.delta * step**3 / 12
                    else:
                        err += c.slope * step**2 / 4
        if err <= rule_budget:
            return acc, norm
        ns = [2 * n for n in ns]
        if sum(ns) > _CELL_CAP:
            raise ResourceCapError("quadrature refinement exceeds the cell cap")
    raise PrecisionError("a-posteriori quadrature certificate did not converge")


def _approx_modulus(f: UCFun, lo: Fraction, hi: Fraction, j: int) -> tuple[Fraction, Fraction]:
    """Uniform midpoint sum with the norm prescribed by the UC modulus."""
    d = hi - lo
    l_req = f.uc_modulus(math.ceil(2 * (d + 1) * j))        # spec'd norm bound
    l = max(l_req, f.uc_modulus(math.ceil(2 * (d + 1) * 2 * j)))
    n = math.ceil(d * l)
    if n > _CELL_CAP:
        raise ResourceCapError(f"{n} quadrature cells exceed the cap; "
                               "integrand lacks interval certificates")
    q = max(1, math.ceil(4 * j * d))
    step = d / n
    acc = Fraction(0)
    for i in range(n):
        mid = lo + step * (2 * i + 1) / 2
        acc += f.eval(mid, check=False).approx(q) * step
    return acc, step


def _approx_fixed(f: UCFun, lo: Fraction, hi: Fraction, j: int) -> tuple[Fraction, Fraction]:
    if lo == hi:
        return Fraction(0), Fraction(0)
    if f.local_certs is not None:
        return _approx_cert(f, lo, hi, j, None)
    if f.abs_base is not None and f.abs_base.local_certs is not None:
        return _approx_cert(f, lo, hi, j, f.abs_base)
    return _approx_modulus(f, lo, hi, j)


def _value_bound_of(f: UCFun) -> Fraction:
    if f.local_certs is not None:
        return f.certs_on(*f.domain.hull()).value
    if f.abs_base is not None and f.abs_base.local_certs is not None:
        return f.abs_base.certs_on(*f.domain.hull()).value
    return bound(f, 1)


def integrate(f: UCFun, u: Number, v: Number, k: int) -> IntegralResult:
    """Certified integral of f from u to v: |value - integral| <= 1/k.

    Follows the orientation conventions: the reversed interval negates the
    integral, and endpoints that agree within tolerance give zero.
    """
    if k < 1:
        raise DomainError("need k >= 1")
    u, v = as_creal(u), as_creal(v)
    dom = f.domain
    if dom.bounded and (dom.provably_outside(u) or dom.provably_outside(v)):
        raise DomainError("integration endpoint outside the domain")
    b_val = _value_bound_of(f) + 1
    cmp = u.compare(v, math.ceil(8 * k * b_val))
    if cmp is Comparison.WITHIN:
        return IntegralResult(CReal.from_rational(0), k, Fraction(0))
    if cmp is Comparison.GREATER:
        res = integrate(f, v, u, k)
        return IntegralResult(-res.value, k, res.partition_norm_used)

    norm_box: dict[int, Fraction] = {}

    def rat_for(j: int) -> Fraction:
        m = math.ceil(16 * j * b_val)
        if dom.bounded:
            m = max(m, 4 * dom.sep)
            ilo, ihi = dom.inner_hull(m)
        else:
            ilo, ihi = None, None
        lo = u.rat if u.rat is not None else u.approx(2 * m)
        hi = v.rat if v.rat is not None else v.approx(2 * m)
        if dom.bounded:
            lo, hi = min(max(lo, ilo), ihi), min(max(hi, ilo), ihi)
        if lo >= hi:
            return Fraction(0)
        # endpoint snapping moved each end by at most 3/(2m): budget 1/(4j)
        val, norm = _approx_fixed(f, lo, hi, 2 * j)
        norm_box[j] = norm
        return val

    value = CReal(rat_for)
    value.approx(k)
    return IntegralResult(value, k, norm_box.get(k, Fraction(0)))


# ---------------------------------------------------------------------------
# improper poly x exp integrals
# ---------------------------------------------------------------------------


def _poly_eval_rat(coeffs: Sequence[Fraction], a: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * a + c
    return acc


class _PolyExpKernel:
    """Fast certified evaluator state for integral of p(a) e^-a over [0, A].

    Within each unit block [n, n+1] the factor e^-a splits as
    e^-n * e^-(a - n): the block constant is enclosed once and the small
    remainder is an exact truncated series, so cell evaluations stay on
    short rationals.
    """

    def __init__(self, coeffs: list[CReal]):
        self.coeffs = coeffs
        self.cbounds = [abs(c.rat) if c.rat is not None else c.bound_abs()
                        for c in coeffs]
        self.rational = all(c.rat is not None for c in coeffs)
        deg = len(coeffs) - 1
        self.tail_c = sum(self.cbounds, Fraction(0)) * factorial(2 * deg) * 2**deg

    def rat_coeffs(self, q: int) -> list[Fraction]:
        if self.rational:
            return [c.rat for c in self.coeffs]
        n = len(self.coeffs)
        return [c.approx(q * n) for c in self.coeffs]

    def proper_part(self, a_cut: int, j: int) -> Fraction:
        """Riemann midpoint value of the integral over [0, a_cut] within 1/j."""
        dom = Domain.interval(0, a_cut)
        fun = product(poly(self.coeffs, dom), exp_scaled(Fraction(-1), dom)).f
        edges = [Fraction(t) for t in range(a_cut + 1)]
        blocks = list(zip(edges, edges[1:]))
        certs = [fun.certs_on(a, b) for a, b in blocks]
        rule_budget = Fraction(1, 2 * j)
        eval_budget = Fraction(1, 2 * j)
        kappas = [c.delta for c in certs]
        mins = [1 if c.gap is None else math.ceil(1 / c.gap) for c in certs]
        ns = _alloc_cells(kappas, rule_budget, mins)

        # coefficient read-off error: |p~(a) - p(a)| <= eps_c on [0, A]
        eps_c = Fraction(0)
        deg = len(self.coeffs) - 1
        q_coeff = 8 * j * (a_cut + 1) * (deg + 1) * max(1, a_cut) ** deg
        pc = self.rat_coeffs(q_coeff)
        if not self.rational:
            # each coefficient is read within 1/(q_coeff * (deg + 1))
            eps_c = Fraction(1, q_coeff) * max(1, a_cut) ** deg

        per_block_budget = (eval_budget - eps_c * a_cut) / max(1, a_cut)
        if per_block_budget <= 0:
            raise PrecisionError("coefficient precision exhausted the budget")
        acc = Fraction(0)
        for (a, b), c, n in zip(blocks, certs, ns):
            pbound = sum((cb * max(1, abs(b)) ** i for i, cb in enumerate(self.cbounds)),
                         Fraction(1))
            # series order for e^-t with t in [0, 1): remainder <= 1/order!
            tau_target = per_block_budget / (4 * pbound)
            order = 3
            while Fraction(1, factorial(order)) > tau_target:
                order += 1
            eta_den = math.ceil(4 * pbound * 2 / per_block_budget)
            e_lo, e_hi = exp_bounds(Fraction(-a), eta_den)
            e_mid = (e_lo + e_hi) / 2
            step = Fraction(1, n) * (b - a)
            inner = Fraction(0)
            for i in range(n):
                t = step * (2 * i + 1) / 2
                inner += _poly_eval_rat(pc, a + t) * exp_partial(-t, order) * step
            acc += e_mid * inner
        return acc

    def cutoff(self, j: int) -> int:
        """A with the tail of the integral beyond A at most 1/j."""
        need = math.ceil(4 * j * max(1, self.tail_c))
        return 2 * exp_dominance_bound(0, need)


def integrate_improper_polyexp(p: Sequence[Number], k: int) -> CReal:
    """Integral of p(a) e^-a over [0, +infinity), certified within 1/k.

    The cutoff comes from the exponential-dominance bound applied to the
    tail majorant C e^(a/2); the finite part runs through the certificate
    quadrature at matching precision.
    """
    coeffs = [as_creal(c) for c in p]
    if not coeffs:
        raise DomainError("need at least one coefficient")
    kernel = _PolyExpKernel(coeffs)

    def compute(j: int) -> Fraction:
        a_cut = kernel.cutoff(2 * j)
        return kernel.proper_part(a_cut, 2 * j)

    value = CReal(compute)
    value.approx(k)
    return value


# ---------------------------------------------------------------------------
# identity checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FtaCheck:
    ok: bool
    residual_bound: Fraction
    tolerance: Fraction


def _endpoint_value(g: UDiffFun, x: CReal) -> CReal:
    if x.rat is not None:
        return g.eval(x.rat, check=False)
    return eval_at_real(g.f, x)


def check_fta(g: UDiffFun, u: Number, v: Number, k: int) -> FtaCheck:
    """Certify |integral of g' from u to v - (g(v) - g(u))| <= 1/k."""
    u, v = as_creal(u), as_creal(v)
    lhs = integrate(g.deriv, u, v, 2 * k).value
    rhs = _endpoint_value(g, v) - _endpoint_value(g, u)
    resid = abs(lhs - rhs).approx(8 * k) + Fraction(1, 8 * k)
    return FtaCheck(ok=resid <= Fraction(1, k), residual_bound=resid,
                    tolerance=Fraction(1, k))


@dataclass(frozen=True)
class AlgebraReport:
    residuals: dict
    tolerance: Fraction

    @property
    def ok(self) -> bool:
        return all(r <= self.tolerance for r in self.residuals.values())


def verify_integral_algebra(f: UDiffFun, g: UDiffFun, u: Number, v: Number,
                            w: Number, x: Number, y: Number, shift: Fraction,
                            k: int) -> AlgebraReport:
    """Residuals for the integral identities, each certified <= 3/k when the
    identities hold: linearity, additivity (u <= v <= w), argument shift,
    monotonicity of f against g (caller supplies f <= g), the absolute-value
    inequality and the length-times-bound estimate."""
    x, y = as_creal(x), as_creal(y)
    xb = x.rat if x.rat is not None else x.bound_abs()
    yb = y.rat if y.rat is not None else y.bound_abs()
    kk = math.ceil(4 * k * (1 + abs(xb) + abs(yb)))
    read = 8 * k

    def val(fun: UCFun, a: Number, b: Number) -> CReal:
        return integrate(fun, a, b, kk).value

    from .ucfun import lin_comb
    resid: dict = {}
    combo = lin_comb(x, f, y, g)
    lhs = val(combo.f, u, v)
    rhs = x * val(f.f, u, v) + y * val(g.f, u, v)
    resid["linearity"] = abs(lhs - rhs).approx(read) + Fraction(1, read)

    resid["additivity"] = abs(val(f.f, u, w) - val(f.f, u, v) - val(f.f, v, w)) \
        .approx(read) + Fraction(1, read)

    shifted = shift_arg(f.f, Fraction(shift))
    us, vs = as_creal(u) - Fraction(shift), as_creal(v) - Fraction(shift)
    resid["shift"] = abs(val(shifted, us, vs) - val(f.f, u, v)).approx(read) \
        + Fraction(1, read)

    mono = (val(f.f, u, v) - val(g.f, u, v)).approx(read) + Fraction(1, read)
    resid["monotonicity"] = max(Fraction(0), mono)

    fabs = abs_fun(f.f)
    absresid = (abs(val(f.f, u, v)) - val(fabs, u, v)).approx(read) + Fraction(1, read)
    resid["abs_inequality"] = max(Fraction(0), absresid)

    bnd = _value_bound_of(f.f)
    d = (as_creal(v) - as_creal(u)).approx(read) + Fraction(1, read)
    lm = (abs(val(f.f, u, v)) - bnd * d).approx(read) + Fraction(1, read)
    resid["lm_bound"] = max(Fraction(0), lm)

    return AlgebraReport(residuals=resid, tolerance=Fraction(3, k))
