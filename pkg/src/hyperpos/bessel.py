"""Normalized Bessel functions and their first positive zeros.

The normalized Bessel function is

    JJ_alpha(x) = 0F1(alpha + 1; -x^2/4) = Gamma(alpha + 1) (x/2)^(-alpha) J_alpha(x),

so JJ_alpha(0) = 1 and JJ_alpha shares its positive zeros with J_alpha.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real

from .errors import DomainError, SearchError
from .special_core import (
    HypergeometricSpec,
    SeriesEvaluation,
    eval_pFq,
    hyp1f2,
    mp_context,
)

SCAN_STEP = math.pi / 4
DEFAULT_ZERO_TOL = 1e-13
DEFAULT_SEARCH_LIMIT = 1e4


class BracketKind(enum.Enum):
    THEOREM_GUARANTEE = "TheoremGuarantee"
    SIGN_CHANGE_CERTIFIED = "SignChangeCertified"


@dataclass(frozen=True)
class ZeroBracket:
    """An interval known to contain a zero.

    Theorem brackets may start at 0 and may be closed on the right;
    certified brackets have function values of opposite sign at both ends.
    """

    lo: float
    hi: float
    kind: BracketKind
    closed_hi: bool = False
    clause: str = ""

    def __post_init__(self):
        if not 0 <= self.lo < self.hi:
            raise DomainError(f"bracket needs 0 <= lo < hi, got ({self.lo}, {self.hi})")
        if self.kind is BracketKind.SIGN_CHANGE_CERTIFIED and self.lo <= 0:
            raise DomainError("a certified bracket must have lo > 0")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float) -> bool:
        upper_ok = x <= self.hi if self.closed_hi else x < self.hi
        return self.lo < x and upper_ok

    def within(self, other: "ZeroBracket", slack: float = 0.0) -> bool:
        """True when this bracket lies inside ``other`` (respecting its right end).

        ``slack`` widens ``other`` on the right, for comparing brackets whose
        ends are themselves computed to finite accuracy.
        """
        hi = other.hi + slack
        upper_ok = self.hi <= hi if (other.closed_hi or slack) else self.hi < hi
        return self.lo >= other.lo and upper_ok


def _check_order(alpha: Real) -> None:
    if not alpha > -1:
        raise DomainError(f"normalized Bessel order must exceed -1, got {alpha}")


def normalized_bessel_series(alpha: Real, x: Real, **kwargs) -> SeriesEvaluation:
    _check_order(alpha)
    return eval_pFq(HypergeometricSpec((), (alpha + 1,)), x, **kwargs)


def eval_normalized_bessel(alpha: Real, x: Real, **kwargs) -> float:
    """JJ_alpha(x) from the 0F1 series."""
    return normalized_bessel_series(alpha, x, **kwargs).value


def _is_half_odd(alpha: Real) -> bool:
    twice = 2 * alpha
    return twice == math.floor(twice) and int(twice) % 2 == 1


def half_integer_closed_form(alpha: Real, x: Real) -> float:
    """JJ_alpha(x) for half-odd-integer alpha >= -1/2 by upward recurrence.

    Seeds are cos x and sin x / x; each step applies
    JJ_{n+1} = 4 n (n+1) / x^2 (JJ_n - JJ_{n-1}).  The difference cancels for
    small x, so the recurrence runs with enough extra digits to absorb the
    x^-2 amplification of every step.
    """
    if not (alpha >= -0.5 and _is_half_odd(alpha)):
        raise DomainError(f"closed form needs 2*alpha an odd integer >= -1, got {alpha}")
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    steps = int(alpha - Fraction(1, 2))
    ctx = mp_context()
    lost = 2 * max(steps, 0) * max(0.0, math.log10((abs(float(alpha)) + 2) / float(x)))
    ctx.dps = 20 + math.ceil(lost)
    xm = ctx.mpf(Fraction(x).numerator) / Fraction(x).denominator
    prev, cur = ctx.cos(xm), ctx.sin(xm) / xm
    if alpha == -0.5:
        return float(prev)
    order = ctx.mpf(1) / 2
    for _ in range(steps):
        prev, cur = cur, 4 * order * (order + 1) / (xm * xm) * (cur - prev)
        order += 1
    return float(cur)


def first_zero_bounds(alpha: Real) -> ZeroBracket:
    """Classical enclosure of j_alpha, the first positive zero of J_alpha.

    (3 + 2a) pi/4 < j_a < (7 + 2a) pi/8 for |a| < 1/2 and
    sqrt(a (a + 2)) < j_a < sqrt(2 (a + 1)(a + 3)) for a > 0; on (0, 1/2) the
    intersection is returned.
    """
    candidates = []
    if abs(alpha) < 0.5:
        a = float(alpha)
        candidates.append(((3 + 2 * a) * math.pi / 4, (7 + 2 * a) * math.pi / 8))
    if alpha > 0:
        a = float(alpha)
        candidates.append((math.sqrt(a * (a + 2)), math.sqrt(2 * (a + 1) * (a + 3))))
    if not candidates:
        raise DomainError(f"no enclosure of j_alpha is available for alpha = {alpha}")
    lo = max(c[0] for c in candidates)
    hi = min(c[1] for c in candidates)
    return ZeroBracket(lo, hi, BracketKind.THEOREM_GUARANTEE)


def _sign(alpha, x) -> int:
    ev = normalized_bessel_series(alpha, x)
    return ev.certified_sign


def _bisect(f_sign, lo: float, hi: float, sign_lo: int, abs_tol: float) -> tuple[float, float]:
    while hi - lo > abs_tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        s = f_sign(mid)
        if s == 0:
            return mid, mid
        if s == sign_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def scan_sign_change(f_sign, start: float, step: float, x_max: float) -> tuple[float, float, int]:
    """Walk right from ``start`` until the certified sign changes.

    Returns (left, right, sign at left).  An uncertain sign (0) at a sample
    is treated as a zero located at that sample.
    """
    left = start
    sign_left = f_sign(left) if left > 0 else 1
    if sign_left == 0:
        return left, left, 0
    x = left
    while x < x_max:
        x = min(x + step, x_max)
        s = f_sign(x)
        if s == 0:
            return x, x, 0
        if s != sign_left:
            return left, x, sign_left
        left = x
    raise SearchError(f"no sign change found below x = {x_max}")


@functools.lru_cache(maxsize=4096)
def first_zero_bracket(
    alpha: Real,
    abs_tol: float = DEFAULT_ZERO_TOL,
    step: float = SCAN_STEP,
    x_max: float = DEFAULT_SEARCH_LIMIT,
) -> ZeroBracket:
    """Certified bracket of width <= abs_tol around j_alpha."""
    _check_order(alpha)
    try:
        start = first_zero_bounds(alpha).lo
    except DomainError:
        start = 0.0
    f_sign = functools.partial(_sign, alpha)
    left, right, s = scan_sign_change(f_sign, start, step, x_max)
    if s != 0:
        left, right = _bisect(f_sign, left, right, s, abs_tol)
    if left == right:
        # the series could not resolve a sign: the zero sits at this sample
        span = max(abs_tol, 4 * math.ulp(left))
        return ZeroBracket(left - span / 2, left + span / 2, BracketKind.SIGN_CHANGE_CERTIFIED)
    return ZeroBracket(left, right, BracketKind.SIGN_CHANGE_CERTIFIED)


def first_zero(alpha: Real, abs_tol: float = DEFAULT_ZERO_TOL, **kwargs) -> float:
    """j_alpha to within ``abs_tol``, located by scanning then bisection."""
    bracket = first_zero_bracket(alpha, abs_tol, **kwargs)
    return 0.5 * (bracket.lo + bracket.hi)


def bessel_zeros(alpha: Real, x_max: float, abs_tol: float = DEFAULT_ZERO_TOL) -> list[float]:
    """All positive zeros of JJ_alpha on (0, x_max], in increasing order."""
    _check_order(alpha)
    f_sign = functools.partial(_sign, alpha)
    zeros = []
    start = 0.0
    while True:
        try:
            left, right, s = scan_sign_change(f_sign, start, SCAN_STEP, x_max)
        except SearchError:
            return zeros
        if s != 0:
            left, right = _bisect(f_sign, left, right, s, abs_tol)
        z = 0.5 * (left + right)
        zeros.append(z)
        start = right + 1e-9 if right > left else right + 1e-9
        if start >= x_max:
            return zeros


def squared_bessel(alpha: Real, x: Real) -> float:
    """JJ_alpha(x/2)^2, computed by squaring so the result is never negative."""
    if not alpha > -0.5:
        raise DomainError(f"squared Bessel identity needs alpha > -1/2, got {alpha}")
    value = eval_normalized_bessel(alpha, Fraction(x) / 2)
    return value * value


def squared_bessel_1f2(alpha: Real, x: Real) -> float:
    """The same square summed as 1F2(alpha + 1/2; alpha + 1, 2 alpha + 1; -x^2/4)."""
    if not alpha > -0.5:
        raise DomainError(f"squared Bessel identity needs alpha > -1/2, got {alpha}")
    half = Fraction(1, 2)
    return hyp1f2(alpha + half, alpha + 1, 2 * alpha + 1, x)
