"""Expansion of 1F2 in squares of normalized Bessel functions.

For any nu with 2 nu not a negative integer,

    1F2(a; b, c; -x^2/4) = JJ_nu(x/2)^2
        + sum_{n>=1} c_n (x/4)^(2n) JJ_{n+nu}(x/2)^2,

    c_n = S(n, nu)/n! * (2n + 2nu)/(n + 2nu) * (2nu + 1)_n / (nu + 1)_n^2,

    S(n, nu) = 4F3(-n, n + 2nu, nu + 1, a; nu + 1/2, b, c; 1).

When every c_n has one sign the 1F2 lies strictly above (or below) the
leading square.  Four parameter families reduce S(n, nu) to a closed form
by the Saalschutz or Watson summation; their coefficient signs are read off
Pochhammer factors exactly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real

from .bessel import BracketKind, ZeroBracket, first_zero
from .errors import DomainError, PoleError
from .special_core import (
    HypergeometricSpec,
    Method,
    ParameterTriple,
    SeriesEvaluation,
    eval_pFq,
    is_nonpositive_integer,
    pochhammer_sign,
    terminating_sum,
)

HALF = Fraction(1, 2)
DEFAULT_MAX_N = 60
GENERAL_ZERO_TOL = 1e-13
# relative gap below which float parameters are taken to satisfy a family's
# defining equation
MATCH_TOL = 1e-13


class SignPattern(enum.Enum):
    ALL_POSITIVE = "AllPositive"
    ALL_NEGATIVE = "AllNegative"
    ALL_ZERO = "AllZero"
    MIXED = "Mixed"


class Reduction(enum.Enum):
    GENERAL = "General4F3"
    BOUNDARY_PLANE = "SaalschutzBoundaryPlane"
    SHIFTED_C = "SaalschutzShiftedC"
    WATSON = "WatsonCEquals2a"
    SINE_CASE = "B4SineCase"


class Conclusion(enum.Enum):
    STRICT_LOWER = "StrictLowerBoundBySquare"
    STRICT_UPPER = "StrictUpperBoundBySquare"
    EXACT_SQUARE = "ExactSquare"
    NO_CONCLUSION = "NoConclusion"


@dataclass(frozen=True)
class GasperExpansion:
    """Coefficients c_1..c_max_n of the squared-Bessel expansion.

    ``signs`` holds the sign of each coefficient; for a closed-form reduction
    it comes from factor signs, otherwise from the value with a relative zero
    tolerance.  Coefficients that vanish identically (the odd terms of the
    Watson family, or every term past a terminating factor) do not enter the
    sign pattern unless all of them vanish.  ``exact`` is True when the
    pattern is proven for every n, not only for the stored ones.
    """

    nu: Real
    triple: ParameterTriple
    coefficients: tuple
    signs: tuple
    sign_pattern: SignPattern
    reduction: Reduction
    exact: bool

    def values(self) -> list[float]:
        return [v for _, v in self.coefficients]


def _close(x: Real, y: Real) -> bool:
    if not (isinstance(x, float) or isinstance(y, float)):
        return x == y
    return abs(x - y) <= MATCH_TOL * max(1.0, abs(x), abs(y))


def _snap(value: Real, scale: Real = 1) -> Real:
    """Float factors within rounding of zero are treated as zero."""
    if isinstance(value, float) and abs(value) <= MATCH_TOL * max(1.0, abs(float(scale))):
        return 0
    return value


def check_nu(nu: Real) -> None:
    if is_nonpositive_integer(2 * nu) and 2 * nu != 0:
        raise DomainError(f"2*nu must not be a negative integer, got nu = {nu}")


# --------------------------------------------------------------------------
# unit-argument summation formulas

def _direct_3f2(upper, lower) -> float:
    return terminating_sum(upper, lower, 1)


def s_coefficient(n: int, nu: Real, t: ParameterTriple) -> float:
    """S(n, nu) = 4F3(-n, n + 2nu, nu + 1, a; nu + 1/2, b, c; 1), summed directly."""
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    if n == 0:
        return 1.0
    return terminating_sum([-n, n + 2 * nu, nu + 1, t.a], [nu + HALF, t.b, t.c], 1)


def _poch_ratio(n: int, upper, lower) -> float:
    value = 1.0
    for j in range(n):
        for u in upper:
            value *= float(u) + j
        for l in lower:
            den = float(l) + j
            if den == 0:
                raise PoleError("denominator Pochhammer symbol vanishes")
            value /= den
    return value


def saalschutz_3f2(n: int, alpha: Real, beta: Real, gamma: Real) -> float:
    """Closed form of 3F2(-n, n + alpha, beta; gamma, 1 + alpha + beta - gamma; 1)."""
    delta = 1 + alpha + beta - gamma
    return _poch_ratio(n, [alpha + 1 - gamma, gamma - beta], [gamma, delta])


def watson_3f2(n: int, alpha: Real, beta: Real) -> float:
    """Closed form of 3F2(-n, n + 2 alpha, beta; alpha + 1/2, 2 beta; 1); zero for odd n."""
    if n % 2:
        return 0.0
    k = n // 2
    return _poch_ratio(k, [HALF, alpha + HALF - beta], [alpha + HALF, beta + HALF])


# --------------------------------------------------------------------------
# reduced coefficient families; each returns (value, sign) of c_n

def _prefactor(n: int, nu: Real) -> float:
    """(2n + 2nu)/(n + 2nu) * (2nu + 1)_n / ((nu + 1)_n^2 n!)."""
    value = (2 * n + 2 * float(nu)) / (n + 2 * float(nu))
    for j in range(1, n + 1):
        value *= (2 * float(nu) + j) / ((float(nu) + j) ** 2 * j)
    return value


def _prefactor_sign(n: int, nu: Real) -> int:
    s = (1 if 2 * n + 2 * nu > 0 else -1 if 2 * n + 2 * nu < 0 else 0)
    s *= 1 if n + 2 * nu > 0 else -1
    return s * pochhammer_sign(2 * nu + 1, n)


def _factor_sign(n: int, upper, lower) -> int:
    s = 1
    for u in upper:
        s *= pochhammer_sign(u, n)
    for l in lower:
        ls = pochhammer_sign(l, n)
        if ls == 0:
            raise PoleError("denominator Pochhammer symbol vanishes")
        s *= ls
    return s


def boundary_plane_coefficient(n: int, a: Real, b: Real) -> tuple[float, int]:
    """c_n on b + c = 3a + 1/2 with nu = a - 1/2.

    (2n + 2a - 1)/(n + 2a - 1) (2a)_n / (n! (a + 1/2)_n^2)
      * (2a - b)_n (b - a - 1/2)_n / ((b)_n (3a + 1/2 - b)_n)
    """
    c = 3 * a + HALF - b
    upper = [_snap(2 * a - b, a), _snap(b - a - HALF, a)]
    lower = [b, c]
    sign = _factor_sign(n, upper, lower) * _prefactor_sign(n, a - HALF)
    if sign == 0:
        return 0.0, 0
    value = (2 * n + 2 * float(a) - 1) / (n + 2 * float(a) - 1)
    af = float(a)
    value *= _poch_ratio(n, [2 * af] + upper, [af + 0.5, af + 0.5] + lower)
    value /= math.factorial(n) if n < 170 else math.inf
    return value, sign


def shifted_c_coefficient(n: int, a: Real, b: Real) -> tuple[float, int]:
    """c_n for c = a + b - 1/2 with nu = b - 1.

    (2n + 2b - 2)/(n + 2b - 2) (2b - 1)_n / (n! (b)_n^2)
      * (b - a - 1/2)_n / (a + b - 1/2)_n
    """
    upper = [_snap(b - a - HALF, b)]
    lower = [a + b - HALF]
    sign = _factor_sign(n, upper, lower) * _prefactor_sign(n, b - 1)
    if sign == 0:
        return 0.0, 0
    bf = float(b)
    value = (2 * n + 2 * bf - 2) / (n + 2 * bf - 2)
    value *= _poch_ratio(n, [2 * bf - 1] + upper, [bf, bf] + lower) / math.factorial(n)
    return value, sign


def watson_coefficient(n: int, a: Real, b: Real) -> tuple[float, int]:
    """c_n for c = 2a with nu = b - 1; zero unless n = 2k, where

    (2k + b - 1)/(k + b - 1) (b)_k / (k! (b)_2k^2) * (b - a - 1/2)_k / (a + 1/2)_k
    """
    if n % 2:
        return 0.0, 0
    k = n // 2
    shift = _snap(b - a - HALF, b)
    sign = _factor_sign(k, [b, shift], [a + HALF])
    sign *= (1 if 2 * k + b - 1 > 0 else -1) * (1 if k + b - 1 > 0 else -1)
    if sign == 0:
        return 0.0, 0
    bf = float(b)
    value = (2 * k + bf - 1) / (k + bf - 1)
    value *= _poch_ratio(k, [bf, shift], [float(a) + 0.5, 1.0])
    value *= _poch_ratio(2 * k, [], [bf, bf])
    return value, sign


def sine_case_coefficient(n: int, a: Real) -> tuple[float, int]:
    """c_n for (b, c) = (a + 1, 3/2) with nu = 1/2: (2n + 1) (1 - a)_n / ((1 + a)_n (3/2)_n^2)."""
    upper = [_snap(1 - a, a)]
    lower = [1 + a]
    sign = _factor_sign(n, upper, lower)
    if sign == 0:
        return 0.0, 0
    return (2 * n + 1) * _poch_ratio(n, upper, lower + [1.5, 1.5]), sign


def general_coefficient(n: int, nu: Real, t: ParameterTriple) -> tuple[float, int]:
    """c_n from the directly summed 4F3 with a relative zero tolerance."""
    s = s_coefficient(n, nu, t)
    pre = _prefactor(n, nu)
    scale = pre * _s_term_scale(n, nu, t)
    value = s * pre
    if abs(value) <= GENERAL_ZERO_TOL * abs(scale):
        return value, 0
    return value, 1 if value > 0 else -1


def _s_term_scale(n: int, nu: Real, t: ParameterTriple) -> float:
    upper = [-n, float(n + 2 * nu), float(nu + 1), float(t.a)]
    lower = [float(nu + HALF), float(t.b), float(t.c)]
    term, total = 1.0, 1.0
    for k in range(n):
        for u in upper:
            term *= u + k
        for l in lower:
            term /= l + k
        term /= k + 1
        total += abs(term)
    return total


# --------------------------------------------------------------------------
# selecting a reduction

def _orientations(t: ParameterTriple):
    yield t
    if t.b != t.c:
        yield t.swapped()


def match_reduction(t: ParameterTriple, nu: Real) -> tuple[Reduction, ParameterTriple]:
    """The cheapest closed form valid for (t, nu), with b and c ordered for it."""
    for o in _orientations(t):
        if _close(nu, HALF) and _close(o.b, o.a + 1) and _close(o.c, 1.5):
            return Reduction.SINE_CASE, o
    for o in _orientations(t):
        if _close(nu, o.a - HALF) and _close(o.b + o.c, 3 * o.a + HALF):
            return Reduction.BOUNDARY_PLANE, o
    for o in _orientations(t):
        if _close(nu, o.b - 1) and _close(o.c, o.a + o.b - HALF):
            return Reduction.SHIFTED_C, o
    for o in _orientations(t):
        if _close(nu, o.b - 1) and _close(o.c, 2 * o.a):
            return Reduction.WATSON, o
    return Reduction.GENERAL, t


def natural_nu(t: ParameterTriple) -> tuple[Real, Reduction] | None:
    """An expansion order for which some closed form applies, if any."""
    for nu in (HALF, t.a - HALF, t.b - 1, t.c - 1):
        try:
            check_nu(nu)
        except DomainError:
            continue
        reduction, _ = match_reduction(t, nu)
        if reduction is not Reduction.GENERAL:
            return nu, reduction
    return None


def coefficient(n: int, nu: Real, t: ParameterTriple, reduction: Reduction) -> tuple[float, int]:
    """(value, sign) of c_n computed along ``reduction`` (t already oriented)."""
    if reduction is Reduction.BOUNDARY_PLANE:
        return boundary_plane_coefficient(n, t.a, t.b)
    if reduction is Reduction.SHIFTED_C:
        return shifted_c_coefficient(n, t.a, t.b)
    if reduction is Reduction.WATSON:
        return watson_coefficient(n, t.a, t.b)
    if reduction is Reduction.SINE_CASE:
        return sine_case_coefficient(n, t.a)
    return general_coefficient(n, nu, t)


def _stable_from(upper) -> int:
    """Index beyond which every listed Pochhammer factor keeps its sign."""
    worst = 0
    for u in upper:
        if u < 0:
            worst = max(worst, math.ceil(-u) + 1)
    return worst


def _pattern(signs) -> SignPattern:
    nonzero = [s for s in signs if s != 0]
    if not nonzero:
        return SignPattern.ALL_ZERO
    if all(s > 0 for s in nonzero):
        return SignPattern.ALL_POSITIVE
    if all(s < 0 for s in nonzero):
        return SignPattern.ALL_NEGATIVE
    return SignPattern.MIXED


def expand(
    t: ParameterTriple,
    nu: Real,
    max_n: int = DEFAULT_MAX_N,
    reduction: Reduction | None = None,
) -> GasperExpansion:
    """Coefficients c_1..c_max_n, along the fastest valid closed form by default.

    Passing ``reduction=Reduction.GENERAL`` forces direct 4F3 summation.
    """
    check_nu(nu)
    if max_n < 1:
        raise DomainError(f"max_n must be >= 1, got {max_n}")
    chosen, oriented = match_reduction(t, nu)
    if reduction is Reduction.GENERAL:
        chosen, oriented = Reduction.GENERAL, t
    elif reduction is not None and reduction is not chosen:
        raise DomainError(f"{reduction.value} does not apply to {t} with nu = {nu}")
    coeffs, signs = [], []
    for n in range(1, max_n + 1):
        value, sign = coefficient(n, nu, oriented, chosen)
        coeffs.append((n, value))
        signs.append(sign)
    pattern = _pattern(signs)
    exact = False
    if chosen is not Reduction.GENERAL:
        a, b = oriented.a, oriented.b
        factors = {
            Reduction.BOUNDARY_PLANE: [2 * a - b, b - a - HALF, 2 * nu],
            Reduction.SHIFTED_C: [b - a - HALF, 2 * nu],
            Reduction.WATSON: [b - a - HALF, b - 1],
            Reduction.SINE_CASE: [1 - a],
        }[chosen]
        limit = _stable_from(factors)
        if chosen is Reduction.WATSON:
            limit = 2 * limit + 1
        exact = max_n >= limit
    return GasperExpansion(nu, t, tuple(coeffs), tuple(signs), pattern, chosen, exact)


def bound_conclusion(e: GasperExpansion) -> Conclusion:
    return {
        SignPattern.ALL_POSITIVE: Conclusion.STRICT_LOWER,
        SignPattern.ALL_NEGATIVE: Conclusion.STRICT_UPPER,
        SignPattern.ALL_ZERO: Conclusion.EXACT_SQUARE,
        SignPattern.MIXED: Conclusion.NO_CONCLUSION,
    }[e.sign_pattern]


def square_zero_bracket(e: GasperExpansion) -> ZeroBracket | None:
    """(0, 2 j_nu) when the expansion lies below the square JJ_nu(x/2)^2."""
    if bound_conclusion(e) is not Conclusion.STRICT_UPPER or not e.nu > -1:
        return None
    return ZeroBracket(0.0, 2 * first_zero(e.nu), BracketKind.THEOREM_GUARANTEE,
                       clause=f"below square of order {e.nu}")


# --------------------------------------------------------------------------
# summing the expansion

def _jj_squared(order: Real, x: Real) -> float:
    value = eval_pFq(HypergeometricSpec((), (order + 1,)), Fraction(x) / 2).value
    return value * value


def eval_via_gasper(
    t: ParameterTriple,
    nu: Real,
    x: Real,
    max_n: int = DEFAULT_MAX_N,
    expansion: GasperExpansion | None = None,
) -> SeriesEvaluation:
    """1F2 summed as JJ_nu(x/2)^2 + sum_n c_n (x/4)^(2n) JJ_{n+nu}(x/2)^2."""
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    e = expansion if expansion is not None else expand(t, nu, max_n)
    xf = float(x)
    quarter_sq = (xf / 4.0) ** 2
    terms = [_jj_squared(nu, x)]
    power = 1.0
    last, previous = 0.0, 0.0
    for n, c in e.coefficients:
        power *= quarter_sq
        if c == 0.0:
            continue
        term = c * power * _jj_squared(n + nu, x)
        terms.append(term)
        previous, last = last, abs(term)
    if previous > 0 and last < previous:
        q = last / previous
        tail = last * q / (1 - q)
    else:
        tail = last
    value = math.fsum(terms)
    rounding = 8 * 2.0**-53 * math.fsum(abs(v) for v in terms)
    return SeriesEvaluation(value, len(terms), tail, Method.GASPER_SUM, rounding,
                            extras={"reduction": e.reduction.value})
