"""Exact construction of the slope-one staircase counter-example.

The target is a uniformly continuous f on the rational unit interval whose
extension attains a strict global maximum at 1/sqrt(2) while the (pointwise,
non-uniform) derivative is constantly 1.  It is the limit of stage
functions: stage n consists of 2^(n-1)+1 slope-one segments separated by
irrational breaks, all jumps equal to 1/(2^(n-1) sqrt(2)), with a final
"blue" part of each segment frozen forever and the uncolored initial parts
repeatedly shaved and shifted upward so every enumerated rational
eventually lands in a blue piece.

All break and offset arithmetic happens in the exact quadratic field
Q(sqrt 2), where every comparison is decidable, so the stage invariants
and the slope/continuity checks are exact, not approximate.

Stages grow exponentially, so two evaluation modes coexist:

* explicit stages (`build_stage`) for small n - invariant checks, dumps
  and the continuity estimate;

* a chronicle of per-step global data (the shaving length c_n and the
  single possible blue-extension event) that lets a single point's segment
  be tracked through arbitrarily many stages in O(1) state.  Evaluating
  f at the j-th enumerated rational needs the chronicle only up to j.

Canonical choices where the construction leaves freedom: shaved pieces
have x-length min(c_n/2, half the uncolored length); blue extensions cut
at the midpoint between the segment's left break and the point being
colored; c_(n+1) is the largest power of 1/2 that is at most 1/(n+1) and
strictly below every uncolored x-length.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DomainError, ResourceCapError
from .rat import format_rational


# ---------------------------------------------------------------------------
# the exact field Q(sqrt 2)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QSqrt2:
    """p + q*sqrt(2) with rational p, q; ordering is decided exactly."""

    p: Fraction
    q: Fraction

    @staticmethod
    def of(p=0, q=0) -> "QSqrt2":
        return QSqrt2(Fraction(p), Fraction(q))

    def __add__(self, other: "QSqrt2") -> "QSqrt2":
        return QSqrt2(self.p + other.p, self.q + other.q)

    def __sub__(self, other: "QSqrt2") -> "QSqrt2":
        return QSqrt2(self.p - other.p, self.q - other.q)

    def __neg__(self) -> "QSqrt2":
        return QSqrt2(-self.p, -self.q)

    def __mul__(self, other: "QSqrt2") -> "QSqrt2":
        return QSqrt2(self.p * other.p + 2 * self.q * other.q,
                      self.p * other.q + self.q * other.p)

    def scale(self, c: Fraction) -> "QSqrt2":
        c = Fraction(c)
        return QSqrt2(self.p * c, self.q * c)

    def sign(self) -> int:
        p, q = self.p, self.q
        if q == 0:
            return (p > 0) - (p < 0)
        if p == 0:
            return 1 if q > 0 else -1
        if p > 0 and q > 0:
            return 1
        if p < 0 and q < 0:
            return -1
        # mixed signs: compare p^2 with 2 q^2 (equality impossible for p,q != 0)
        if p > 0:  # q < 0
            return 1 if p * p > 2 * q * q else -1
        return 1 if 2 * q * q > p * p else -1

    def __lt__(self, other: "QSqrt2") -> bool:
        return (self - other).sign() < 0

    def __le__(self, other: "QSqrt2") -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other: "QSqrt2") -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other: "QSqrt2") -> bool:
        return (self - other).sign() >= 0

    def is_rational(self) -> bool:
        return self.q == 0

    def __float__(self) -> float:
        return float(self.p) + float(self.q) * math.sqrt(2)

    def __str__(self) -> str:
        return f"{format_rational(self.p)} + {format_rational(self.q)}*sqrt2"


Q_ZERO = QSqrt2.of(0, 0)
Q_ONE = QSqrt2.of(1, 0)
INV_SQRT2 = QSqrt2.of(0, Fraction(1, 2))  # 1/sqrt(2) = sqrt(2)/2
Q_HALF = Fraction(1, 2)


def jump_of_stage(n: int) -> QSqrt2:
    """All jumps of stage n equal 1/(2^(n-1) sqrt 2) = sqrt(2)/2^n."""
    return QSqrt2.of(0, Fraction(1, 2**n))


def _pow2_below(x: QSqrt2, cap: Fraction) -> Fraction:
    """Largest power 2^-t <= cap that is strictly below x (x > 0)."""
    if x.sign() <= 0:
        raise DomainError("need a positive bound")
    p = Fraction(1)
    while p > cap:
        p /= 2
    while not QSqrt2.of(p, 0) < x:
        p /= 2
    return p


# ---------------------------------------------------------------------------
# enumeration of the rational unit interval
# ---------------------------------------------------------------------------


def _cw_value(i: int) -> Fraction:
    """i-th term of the breadth-first tree enumeration of positive
    rationals (heap numbering: left child p/(p+q), right child (p+q)/q)."""
    p, q = 1, 1
    for bit in bin(i)[3:]:
        if bit == "0":
            q += p
        else:
            p += q
    return Fraction(p, q)


def _cw_index(x: Fraction) -> int:
    """Inverse of _cw_value (x > 0 in lowest terms)."""
    p, q = x.numerator, x.denominator
    bits = []
    while (p, q) != (1, 1):
        if p < q:
            bits.append("0")
            q -= p
        else:
            bits.append("1")
            p -= q
    i = 1
    for bit in reversed(bits):
        i = 2 * i + (1 if bit == "1" else 0)
    return i


def enumerate_q01(j: int) -> Fraction:
    """Deterministic bijective enumeration of [0, 1] cap Q: 0, 1, then the
    tree enumeration mapped through x -> x/(1+x)."""
    if j < 1:
        raise DomainError("enumeration is 1-based")
    if j == 1:
        return Fraction(0)
    if j == 2:
        return Fraction(1)
    x = _cw_value(j - 2)
    return x / (1 + x)


def index_q01(a: Fraction) -> int:
    a = Fraction(a)
    if not 0 <= a <= 1:
        raise DomainError("enumeration covers [0, 1] only")
    if a == 0:
        return 1
    if a == 1:
        return 2
    return 2 + _cw_index(a / (1 - a))


# ---------------------------------------------------------------------------
# stage data
# ---------------------------------------------------------------------------


@dataclass
class Segment:
    """One slope-one piece: value a + offset for a in (left, right).

    ``blue_from`` marks the frozen final part (blue_from, right); None means
    no blue yet.  The first segment is entirely blue and closed at 0, the
    last is closed at 1.
    """

    left: QSqrt2
    right: QSqrt2
    offset: QSqrt2
    blue_from: Optional[QSqrt2]
    full_blue: bool = False
    left_closed: bool = False
    right_closed: bool = False

    def contains(self, a: Fraction) -> bool:
        qa = QSqrt2.of(a, 0)
        if qa < self.left or (qa == self.left and not self.left_closed):
            return False
        if qa > self.right or (qa == self.right and not self.right_closed):
            return False
        return True

    def is_blue_at(self, a: Fraction) -> bool:
        if self.full_blue:
            return True
        return self.blue_from is not None and QSqrt2.of(a, 0) > self.blue_from

    def uncolored_length(self) -> QSqrt2:
        if self.full_blue:
            return Q_ZERO
        bound = self.blue_from if self.blue_from is not None else self.right
        return bound - self.left

    def value_at(self, a: Fraction) -> QSqrt2:
        return QSqrt2.of(a, 0) + self.offset


@dataclass(frozen=True)
class StageFunction:
    n: int
    segments: tuple
    c: Fraction

    @property
    def jump(self) -> QSqrt2:
        return jump_of_stage(self.n)

    def locate(self, a: Fraction) -> Segment:
        qa = QSqrt2.of(a, 0)
        lo, hi = 0, len(self.segments) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.segments[mid].left < qa or \
                    (self.segments[mid].left == qa and self.segments[mid].left_closed):
                lo = mid
            else:
                hi = mid - 1
        seg = self.segments[lo]
        if not seg.contains(a):
            raise DomainError(f"{a} is not in [0, 1]")
        return seg

    def value(self, a: Fraction) -> QSqrt2:
        return self.locate(a).value_at(a)

    def dump(self) -> str:
        lines = [f"stage {self.n}  segments {len(self.segments)}  "
                 f"c {format_rational(self.c)}"]
        for i, s in enumerate(self.segments, start=1):
            blue = "all" if s.full_blue else \
                ("-" if s.blue_from is None else str(s.blue_from))
            lines.append(f"{i} | left {s.left} | right {s.right} | "
                         f"offset {s.offset} | blue {blue}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# the construction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StepRecord:
    """Global data of the step from stage n to n+1: the shaving length c_n
    and the blue-extension event (segment left break, new boundary), if the
    newly processed point was uncolored."""

    c: Fraction
    case2: Optional[tuple]


@dataclass
class PointState:
    """A tracked point's segment data at the current stage."""

    left: QSqrt2
    right: QSqrt2
    offset: QSqrt2
    blue_from: Optional[QSqrt2]
    full_blue: bool

    def is_blue_at(self, a: Fraction) -> bool:
        if self.full_blue:
            return True
        return self.blue_from is not None and QSqrt2.of(a, 0) > self.blue_from


def _initial_state(a: Fraction, b21: Optional[QSqrt2]) -> PointState:
    qa = QSqrt2.of(a, 0)
    if qa < INV_SQRT2:
        return PointState(left=Q_ZERO, right=INV_SQRT2, offset=Q_ZERO,
                          blue_from=None, full_blue=True)
    return PointState(left=INV_SQRT2, right=Q_ONE, offset=-INV_SQRT2,
                      blue_from=b21, full_blue=False)


def _shave_length(c_n: Fraction, uncolored: QSqrt2) -> QSqrt2:
    half_c = QSqrt2.of(c_n / 2, 0)
    half_u = uncolored.scale(Q_HALF)
    return half_u if half_u < half_c else half_c


class Construction:
    """Shared chronicle of the stage construction plus point tracking."""

    def __init__(self) -> None:
        a1 = enumerate_q01(1)
        # stage 1 coloring: the first enumerated point must be blue in f_1
        if QSqrt2.of(a1, 0) < INV_SQRT2:
            self.b21: Optional[QSqrt2] = None
            mu1 = Q_ONE - INV_SQRT2
        else:
            self.b21 = (INV_SQRT2 + QSqrt2.of(a1, 0)).scale(Q_HALF)
            mu1 = self.b21 - INV_SQRT2
        self.c: list[Fraction] = [Fraction(0), _pow2_below(mu1, Fraction(1))]
        self.steps: list[StepRecord] = []

    # -- chronicle ------------------------------------------------------

    def ensure_steps(self, n_steps: int) -> None:
        """Extend the chronicle so that steps 1..n_steps are known."""
        while len(self.steps) < n_steps:
            n = len(self.steps) + 1
            a_next = enumerate_q01(n + 1)
            st = self.track(a_next, n)
            case2 = None
            case2_min: Optional[QSqrt2] = None
            if not st.is_blue_at(a_next):
                new_beta = (st.left + QSqrt2.of(a_next, 0)).scale(Q_HALF)
                case2 = (st.left, new_beta)
                u_after = new_beta - st.left
                ln = _shave_length(self.c[n], u_after)
                rem = u_after - ln
                case2_min = ln if ln < rem else rem
            self.steps.append(StepRecord(c=self.c[n], case2=case2))
            mu = QSqrt2.of(self.c[n] / 2, 0)
            if case2_min is not None and case2_min < mu:
                mu = case2_min
            self.c.append(_pow2_below(mu, Fraction(1, n + 1)))

    def step_point(self, state: PointState, a: Fraction, n: int) -> PointState:
        """Apply step n (f_n -> f_(n+1)) to the point's segment."""
        if state.full_blue:
            return state
        rec = self.steps[n - 1]
        if rec.case2 is not None and rec.case2[0] == state.left:
            state = replace(state, blue_from=rec.case2[1])
        bound = state.blue_from if state.blue_from is not None else state.right
        ln = _shave_length(rec.c, bound - state.left)
        cut = state.left + ln
        if QSqrt2.of(a, 0) < cut:
            return PointState(left=state.left, right=cut,
                              offset=state.offset + jump_of_stage(n).scale(Q_HALF),
                              blue_from=None, full_blue=False)
        return replace(state, left=cut)

    def track(self, a: Fraction, to_stage: int) -> PointState:
        """Segment state of `a` at stage `to_stage`, stopping early once
        blue (blue pieces are definitive)."""
        self.ensure_steps(to_stage - 1)
        state = _initial_state(a, self.b21)
        for n in range(1, to_stage):
            if state.is_blue_at(a):
                return state
            state = self.step_point(state, a, n)
        return state

    def eval_point(self, a: Fraction) -> tuple[QSqrt2, int]:
        """The limit value f(a) (exact in Q(sqrt 2)) and the stage at which
        it became definitive."""
        a = Fraction(a)
        if not 0 <= a <= 1:
            raise DomainError("f is defined on [0, 1]")
        j = index_q01(a)
        state = _initial_state(a, self.b21)
        for n in range(1, j + 1):
            if state.is_blue_at(a):
                return QSqrt2.of(a, 0) + state.offset, n
            self.ensure_steps(n)
            state = self.step_point(state, a, n)
        if not state.is_blue_at(a):
            raise ArithmeticError("point not blue by its enumeration stage")
        return QSqrt2.of(a, 0) + state.offset, j + 1


_GLOBAL = Construction()


def eval_f(a: Fraction) -> QSqrt2:
    """Exact value of the limit function at a rational point."""
    return _GLOBAL.eval_point(Fraction(a))[0]


def eval_f_with_stage(a: Fraction) -> tuple[QSqrt2, int]:
    return _GLOBAL.eval_point(Fraction(a))


# ---------------------------------------------------------------------------
# explicit stages
# ---------------------------------------------------------------------------

_STAGE_CAP = 22


def build_stage(n: int) -> StageFunction:
    """Materialize stage n (2^(n-1)+1 segments); n is capped since the
    segment count doubles per stage."""
    if n < 1:
        raise DomainError("stages start at n = 1")
    if n > _STAGE_CAP:
        raise ResourceCapError(f"explicit stages are capped at n = {_STAGE_CAP}")
    con = _GLOBAL
    con.ensure_steps(n - 1)
    segs = [
        Segment(left=Q_ZERO, right=INV_SQRT2, offset=Q_ZERO, blue_from=None,
                full_blue=True, left_closed=True),
        Segment(left=INV_SQRT2, right=Q_ONE, offset=-INV_SQRT2,
                blue_from=con.b21, right_closed=True),
    ]
    for step_n in range(1, n):
        rec = con.steps[step_n - 1]
        if rec.case2 is not None:
            for seg in segs[1:]:
                if seg.left == rec.case2[0]:
                    seg.blue_from = rec.case2[1]
                    break
            else:
                raise ArithmeticError("blue-extension segment not found")
        half_jump = jump_of_stage(step_n).scale(Q_HALF)
        new_segs = [segs[0]]
        for seg in segs[1:]:
            ln = _shave_length(rec.c, seg.uncolored_length())
            cut = seg.left + ln
            new_segs.append(Segment(left=seg.left, right=cut,
                                    offset=seg.offset + half_jump,
                                    blue_from=None))
            seg.left = cut
            new_segs.append(seg)
        segs = new_segs
    return StageFunction(n=n, segments=tuple(segs), c=con.c[n])


def check_stage_invariants(st: StageFunction) -> None:
    """Exact verification of every stage invariant; raises on violation."""
    n = st.n
    segs = st.segments
    if len(segs) != 2 ** (n - 1) + 1:
        raise ArithmeticError("wrong segment count")
    if segs[0].right != INV_SQRT2:
        raise ArithmeticError("first break must be 1/sqrt2")
    jump = jump_of_stage(n)
    for i in range(len(segs) - 1):
        if not segs[i].right == segs[i + 1].left:
            raise ArithmeticError("segments must abut")
        if not segs[i].left < segs[i].right:
            raise ArithmeticError("empty segment")
        if (segs[i].offset - segs[i + 1].offset) != jump:
            raise ArithmeticError("jump differs from 1/(2^(n-1) sqrt2)")
        if i >= 1 and segs[i].right.is_rational():
            raise ArithmeticError("interior break must be irrational")
    if st.c > Fraction(1, n):
        raise ArithmeticError("c_n exceeds 1/n")
    if st.c <= 0:
        raise ArithmeticError("c_n must be positive")
    cq = QSqrt2.of(st.c, 0)
    for i, seg in enumerate(segs[1:], start=2):
        u = seg.uncolored_length()
        if u.sign() <= 0:
            raise ArithmeticError("uncolored part must be nonempty")
        if u < cq:
            raise ArithmeticError("uncolored length below c_n")
        # values of non-first segments stay below 1/sqrt2
        top = seg.right + seg.offset
        if i < len(segs):
            if top > INV_SQRT2:
                raise ArithmeticError("segment values reach 1/sqrt2")
        else:
            if not top < INV_SQRT2:
                raise ArithmeticError("last segment value reaches 1/sqrt2")
        if seg.blue_from is not None:
            if not seg.left < seg.blue_from < seg.right:
                raise ArithmeticError("blue boundary escapes its segment")


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UCReport:
    k: int
    stage: int
    c: Fraction
    trials: int
    failures: int
    max_diff: float

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def to_json_dict(self) -> dict:
        return {"k": self.k, "stage": self.stage, "c": format_rational(self.c),
                "trials": self.trials, "failures": self.failures,
                "max_diff": self.max_diff}


def verify_uc_estimate(k: int, trials: int, seed: int = 20260810) -> UCReport:
    """Certify |f(a) - f(b)| <= 1/k for sampled pairs with |a - b| <= c_n.

    Stage n is chosen with n >= 2k and jump_n <= 1/(2k); every point's
    limit value lies within [f_n, f_n + jump_n] (upward shifts beyond
    stage n total less than one jump), so the exact stage-n inequality
    |f_n(a) - f_n(b)| + jump_n <= 1/k certifies the limit estimate.
    """
    if k < 1:
        raise DomainError("need k >= 1")
    n = 2 * k
    while (2**n) ** 2 < 8 * k * k:  # 2^n >= 2 k sqrt2  <=>  4^n >= 8 k^2
        n += 1
    if n > _STAGE_CAP:
        raise ResourceCapError("continuity check stage exceeds the cap")
    st = build_stage(n)
    jump = st.jump
    bound = QSqrt2.of(Fraction(1, k), 0)
    rng = random.Random(seed)
    failures = 0
    max_diff = 0.0
    den = 1 << 20
    for _ in range(trials):
        a = Fraction(rng.randrange(0, den + 1), den)
        delta = st.c * Fraction(rng.randrange(-den, den + 1), den)
        b = min(max(a + delta, Fraction(0)), Fraction(1))
        diff = st.value(a) - st.value(b)
        if diff.sign() < 0:
            diff = -diff
        if not diff + jump <= bound:
            failures += 1
        max_diff = max(max_diff, float(diff))
    return UCReport(k=k, stage=n, c=st.c, trials=trials, failures=failures,
                    max_diff=max_diff)


@dataclass(frozen=True)
class SlopeReport:
    a: Fraction
    blue_stage: int
    samples: int
    all_exact: bool
    stable_under_refinement: bool

    @property
    def ok(self) -> bool:
        return self.all_exact and self.stable_under_refinement


def verify_slope_one(a: Fraction, k: int = 8) -> SlopeReport:
    """Exact slope check: once a is blue, pick k rationals b on a blue side
    of a and verify (f(b) - f(a))/(b - a) = 1 exactly; also re-track two
    further stages to confirm the value is definitive."""
    a = Fraction(a)
    con = _GLOBAL
    value, stage = con.eval_point(a)
    state = con.track(a, stage)
    if state.full_blue:
        lo, hi = Q_ZERO, state.right
    else:
        lo, hi = state.blue_from, state.right
    qa = QSqrt2.of(a, 0)
    room_right = hi - qa
    room_left = qa - lo
    side = 1 if room_right.sign() > 0 else -1
    room = room_right if side == 1 else room_left
    step = _pow2_below(room, Fraction(1, 2))
    all_exact = True
    for i in range(1, k + 1):
        b = a + side * step / (2**i)
        fb = QSqrt2.of(b, 0) + state.offset  # definitive blue value
        quotient_num = fb - (QSqrt2.of(a, 0) + state.offset)
        if quotient_num != QSqrt2.of(b - a, 0):
            all_exact = False
    later = con.track(a, stage + 2)
    stable = later.is_blue_at(a) and later.offset == state.offset
    return SlopeReport(a=a, blue_stage=stage, samples=k,
                       all_exact=all_exact, stable_under_refinement=stable)
