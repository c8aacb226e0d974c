"""Scalar special functions and the hypergeometric series engine.

Every routine here is a pure function.  Parameters may be ``int``, ``float``
or :class:`fractions.Fraction`; rational inputs keep boundary comparisons
exact and are converted to binary only at evaluation time.

The series engine sums

    sum_k  prod(upper)_k / (k! prod(lower)_k) * z^k

first in double precision.  When the observed cancellation makes the double
result unreliable it re-sums the same recurrence in a thread-local mpmath
context whose working precision is chosen from the size of the largest term.
"""

from __future__ import annotations

import enum
import math
import os
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Sequence

import mpmath
from mpmath.ctx_mp import MPContext

from .errors import ConvergenceError, DomainError, PoleError

EULER_GAMMA = 0.5772156649015329
SQRT_PI = math.sqrt(math.pi)

#: Largest intermediate term tolerated relative to the result before the
#: engine leaves double precision.
CANCELLATION_LIMIT = 1e8
DEFAULT_REL_TOL = 1e-13
DEFAULT_MAX_TERMS = 5000
MAX_DIGITS = 1200
ZERO_DETECT_DIGITS = 160
UNIT_ROUNDOFF = 2.0**-53
PRECISION_ENV = "HYPERPOS_PRECISION"


class Method(enum.Enum):
    DIRECT_SERIES = "DirectSeries"
    ASYMPTOTIC = "Asymptotic"
    GASPER_SUM = "GasperSum"


def is_nonpositive_integer(x: Real) -> bool:
    return x <= 0 and x == math.floor(x)


def _check_positive(name: str, value: Real) -> None:
    if not value > 0:
        raise DomainError(f"{name} must be positive, got {value}")


@dataclass(frozen=True)
class ParameterTriple:
    """Parameters of 1F2(a; b, c; -x^2/4); all strictly positive."""

    a: Real
    b: Real
    c: Real

    def __post_init__(self):
        for name in ("a", "b", "c"):
            _check_positive(name, getattr(self, name))

    @property
    def sigma(self) -> Real:
        """Decay exponent of the oscillatory asymptotic term, b + c - a - 1/2."""
        return self.b + self.c - self.a - Fraction(1, 2)

    def swapped(self) -> "ParameterTriple":
        return ParameterTriple(self.a, self.c, self.b)

    def as_floats(self) -> tuple[float, float, float]:
        return float(self.a), float(self.b), float(self.c)

    def spec(self) -> "HypergeometricSpec":
        return HypergeometricSpec((self.a,), (self.b, self.c))


@dataclass(frozen=True)
class HypergeometricSpec:
    """Numerator and denominator parameters of a pFq evaluated at -x^2/4."""

    upper: tuple
    lower: tuple

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(self.upper))
        object.__setattr__(self, "lower", tuple(self.lower))
        for value in self.lower:
            if is_nonpositive_integer(value):
                raise PoleError(f"lower parameter {value} is zero or a negative integer")
        if len(self.upper) > len(self.lower) and not self.terminates:
            raise DomainError("series in -x^2/4 diverges unless len(upper) <= len(lower)")

    @property
    def terminates(self) -> bool:
        return any(is_nonpositive_integer(u) for u in self.upper)

    @property
    def is_pFp1(self) -> bool:
        return len(self.lower) == len(self.upper) + 1


@dataclass(frozen=True)
class SeriesEvaluation:
    """A value together with how it was obtained and how far it can be trusted.

    ``tail_bound`` covers truncation (or, for the asymptotic formula, the size
    of the neglected correction terms); ``rounding_bound`` covers arithmetic
    error in the summation.  ``digits`` is the decimal working precision.
    """

    value: float
    terms_used: int
    tail_bound: float
    method: Method
    rounding_bound: float = 0.0
    digits: int = 16
    in_validity_gate: bool | None = None
    extras: dict = field(default_factory=dict, compare=False)

    @property
    def error_bound(self) -> float:
        return self.tail_bound + self.rounding_bound

    @property
    def certified_sign(self) -> int:
        """+1 or -1 when |value| exceeds the error bound, else 0."""
        if abs(self.value) <= self.error_bound:
            return 0
        return 1 if self.value > 0 else -1


# --------------------------------------------------------------------------
# gamma, beta, Pochhammer

def _lgamma_near_one_coeffs(count: int = 64) -> list[float]:
    # log Gamma(1 + e) = -gamma*e + sum_{k>=2} (-1)^k zeta(k) e^k / k
    coeffs = [0.0, -EULER_GAMMA]
    for k in range(2, count):
        coeffs.append((-1) ** k * float(mpmath.zeta(k)) / k)
    return coeffs


_LG1 = _lgamma_near_one_coeffs()


def _lgamma1p(e: float) -> float:
    acc = 0.0
    for coeff in reversed(_LG1):
        acc = acc * e + coeff
    return acc


def ln_gamma(x: Real) -> float:
    """log Gamma(x) for x > 0.

    Near the zeros of log Gamma at 1 and 2 a Taylor series in x - 1 keeps the
    relative error small; elsewhere the C library value is used.
    """
    if not x > 0:
        raise DomainError(f"ln_gamma requires x > 0, got {x}")
    x = float(x)
    if 0.5 <= x <= 1.5:
        return _lgamma1p(x - 1.0)
    if 1.5 < x <= 2.5:
        return math.log1p(x - 2.0) + _lgamma1p(x - 2.0)
    return math.lgamma(x)


def gamma_sign(x: Real) -> int:
    if x > 0:
        return 1
    if is_nonpositive_integer(x):
        return 0
    return -1 if math.floor(-x) % 2 == 0 else 1


def rgamma(x: Real) -> float:
    """1/Gamma(x), equal to zero at the poles 0, -1, -2, ..."""
    if is_nonpositive_integer(x):
        return 0.0
    x = float(x)
    if abs(x) < 170:
        return 1.0 / math.gamma(x)
    return gamma_sign(x) * math.exp(-math.lgamma(x))


def beta(p: Real, q: Real) -> float:
    """Euler's beta function B(p, q) for p, q > 0."""
    if not (p > 0 and q > 0):
        raise DomainError(f"beta requires p, q > 0, got ({p}, {q})")
    p, q = float(p), float(q)
    if p + q < 170:
        return math.gamma(p) * math.gamma(q) / math.gamma(p + q)
    return math.exp(ln_gamma(p) + ln_gamma(q) - ln_gamma(p + q))


def pochhammer(alpha: Real, k: int):
    """Rising factorial (alpha)_k = alpha (alpha+1) ... (alpha+k-1).

    Integer and Fraction arguments give exact results; floats overflow to inf.
    """
    if k < 0:
        raise DomainError(f"pochhammer index must be >= 0, got {k}")
    result = 1 if not isinstance(alpha, float) else 1.0
    for j in range(k):
        result *= alpha + j
        if result == 0:
            break
    return result


def pochhammer_sign(alpha: Real, k: int) -> int:
    """Sign of (alpha)_k read off its factors, no magnitudes involved."""
    sign = 1
    for j in range(k):
        factor = alpha + j
        if factor == 0:
            return 0
        if factor < 0:
            sign = -sign
    return sign


# --------------------------------------------------------------------------
# the series engine

_local = threading.local()


def mp_context() -> MPContext:
    """The calling thread's private mpmath context."""
    ctx = getattr(_local, "ctx", None)
    if ctx is None:
        ctx = _local.ctx = MPContext()
    return ctx


def to_mp(ctx: MPContext, value):
    if isinstance(value, Fraction):
        return ctx.mpf(value.numerator) / value.denominator
    return ctx.mpf(value)


def precision_mode(precision: str | None = None) -> str:
    mode = precision or os.environ.get(PRECISION_ENV, "extended")
    if mode not in ("double", "extended"):
        raise DomainError(f"{PRECISION_ENV} must be 'double' or 'extended', got {mode}")
    return mode


@dataclass
class _RawSum:
    value: object
    terms_used: int
    tail: float
    weighted_abs: float
    max_abs: float
    overflow: bool = False


def _sum_terms(upper, lower, z, one, rel_tol, max_terms, unit, exhaust):
    """Sum the series by its term recurrence in the arithmetic of ``one``.

    ``weighted_abs`` is sum_j (j+1) |t_j|, the scale of accumulated rounding
    in the products that build each term.
    """
    t = one
    terms = [t]
    partial = one
    weighted = 1.0
    max_abs = 1.0
    prev_abs = 1.0
    decreasing = 0
    k = 0
    zero = one * 0
    while True:
        if k >= max_terms:
            raise ConvergenceError(f"series not settled after {max_terms} terms")
        ratio = z / (k + 1)
        for u in upper:
            ratio *= u + k
        for l in lower:
            ratio /= l + k
        t = t * ratio
        k += 1
        t_abs = float(abs(t))
        if t == zero:
            return _RawSum(_total(terms), k, 0.0, weighted, max_abs)
        if math.isinf(t_abs):
            return _RawSum(partial, k, math.inf, math.inf, math.inf, overflow=True)
        terms.append(t)
        partial = partial + t
        weighted += (k + 1) * t_abs
        max_abs = max(max_abs, t_abs)
        decreasing = decreasing + 1 if t_abs < prev_abs else 0
        prev_abs = t_abs
        if exhaust or decreasing < 3:
            continue
        floor = max(float(abs(partial)), unit * weighted)
        if t_abs > rel_tol * floor:
            continue
        ratio = z / (k + 1)
        for u in upper:
            ratio *= u + k
        for l in lower:
            ratio /= l + k
        nxt = float(abs(t * ratio))
        q = nxt / t_abs
        if q < 1.0:
            return _RawSum(_total(terms), k, nxt / (1.0 - q), weighted, max_abs)


def _total(terms):
    if isinstance(terms[0], float):
        return math.fsum(terms)
    acc = terms[0] * 0
    for t in terms:
        acc += t
    return acc


def hyper_series(
    upper: Sequence[Real],
    lower: Sequence[Real],
    z: Real,
    rel_tol: float = DEFAULT_REL_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
    precision: str | None = None,
    exhaust: bool = False,
) -> SeriesEvaluation:
    """Sum a pFq series at argument ``z`` with error control.

    ``exhaust`` sums a terminating series to its last nonzero term without
    applying the early-stopping rule.
    """
    m = len(upper) + len(lower) + 2
    try:
        return _hyper_series(upper, lower, z, rel_tol, max_terms, precision, exhaust, m)
    except ZeroDivisionError:
        raise PoleError("a lower Pochhammer symbol vanishes before the series terminates") from None


def _hyper_series(upper, lower, z, rel_tol, max_terms, precision, exhaust, m):
    raw = _sum_terms(
        [float(u) for u in upper], [float(l) for l in lower], float(z),
        1.0, rel_tol, max_terms, UNIT_ROUNDOFF, exhaust,
    )
    value = float(raw.value) if not raw.overflow else 0.0
    rounding = m * UNIT_ROUNDOFF * raw.weighted_abs + UNIT_ROUNDOFF * abs(value)
    cancelled = raw.overflow or raw.max_abs > CANCELLATION_LIMIT * abs(value)
    if precision_mode(precision) == "double" or not (cancelled or rounding > rel_tol * abs(value)):
        if raw.overflow:
            raise ConvergenceError("terms overflow double precision; use extended precision")
        return SeriesEvaluation(value, raw.terms_used, raw.tail, Method.DIRECT_SERIES, rounding, 16)

    ctx = mp_context()
    if raw.overflow or value == 0.0 or math.isinf(raw.weighted_abs):
        # the largest term is about exp(2 sqrt|z|)
        digits = 40 + math.ceil(2 * math.sqrt(abs(float(z))) / math.log(10))
    else:
        digits = 20 + max(0, math.ceil(math.log10(m * raw.weighted_abs / abs(value))))
    while True:
        digits = min(digits, MAX_DIGITS)
        ctx.dps = digits
        unit = 10.0**-digits
        mp_raw = _sum_terms(
            [to_mp(ctx, u) for u in upper], [to_mp(ctx, l) for l in lower], to_mp(ctx, z),
            ctx.mpf(1), rel_tol, max_terms, unit, exhaust,
        )
        value = float(mp_raw.value)
        rounding = m * unit * mp_raw.weighted_abs + UNIT_ROUNDOFF * abs(value)
        target = 0.1 * rel_tol * abs(value)
        excess = m * unit * mp_raw.weighted_abs
        if excess <= target or digits >= MAX_DIGITS:
            break
        if abs(value) <= excess and digits >= ZERO_DETECT_DIGITS:
            # the sum is indistinguishable from zero at this precision
            return SeriesEvaluation(0.0, mp_raw.terms_used, mp_raw.tail, Method.DIRECT_SERIES,
                                    excess, digits)
        if target == 0.0:
            digits *= 2
        else:
            digits += max(5, math.ceil(math.log10(excess / target)) + 5)
    return SeriesEvaluation(value, mp_raw.terms_used, mp_raw.tail, Method.DIRECT_SERIES, rounding, digits)


def _argument(x: Real):
    """The exact argument -x^2/4 as a rational number."""
    if not x >= 0:
        raise DomainError(f"x must be nonnegative, got {x}")
    q = Fraction(x)
    return -q * q / 4


def eval_pFq(
    spec: HypergeometricSpec,
    x: Real,
    rel_tol: float = DEFAULT_REL_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
    precision: str | None = None,
) -> SeriesEvaluation:
    """Direct series for pFq(upper; lower; -x^2/4)."""
    if not 0 < rel_tol < 1:
        raise DomainError(f"rel_tol must lie in (0, 1), got {rel_tol}")
    z = _argument(x)
    if z == 0:
        return SeriesEvaluation(1.0, 1, 0.0, Method.DIRECT_SERIES)
    return hyper_series(spec.upper, spec.lower, z, rel_tol, max_terms, precision)


def eval_1F2(a: Real, b: Real, c: Real, x: Real, **kwargs) -> SeriesEvaluation:
    return eval_pFq(HypergeometricSpec((a,), (b, c)), x, **kwargs)


def hyp1f2(a: Real, b: Real, c: Real, x: Real, **kwargs) -> float:
    """Value of 1F2(a; b, c; -x^2/4)."""
    return eval_1F2(a, b, c, x, **kwargs).value


def terminating_sum(upper: Sequence[Real], lower: Sequence[Real], z: Real = 1) -> float:
    """Exact-to-rounding value of a terminating series (some upper is -n)."""
    if not any(is_nonpositive_integer(u) for u in upper):
        raise DomainError("terminating_sum needs a nonpositive integer upper parameter")
    return hyper_series(upper, lower, z, exhaust=True, precision="extended").value


# --------------------------------------------------------------------------
# large-x asymptotics

def asymptotic_gate(t: ParameterTriple) -> float:
    """Smallest x at which the two-term asymptotic formula is trusted."""
    a, b, c = t.as_floats()
    return 10.0 * (1.0 + a + b + c)


def asymptotic_1F2(t: ParameterTriple, x: Real) -> SeriesEvaluation:
    """Two-term large-x formula: algebraic decay plus a damped cosine.

    The algebraic coefficient carries 1/Gamma(b-a) 1/Gamma(c-a) and is
    exactly zero at their poles.  ``tail_bound`` is the size of the first
    neglected correction of each part: the next algebraic term
    |a (1+a-b)(1+a-c)| (2/x)^2 relative to the first, and an O(1/x) relative
    correction to the oscillation with a parameter-size constant.
    """
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    a, b, c = t.as_floats()
    x = float(x)
    sigma = float(t.sigma)
    half = x / 2.0
    log_gbc = ln_gamma(b) + ln_gamma(c)
    reciprocal = rgamma(t.b - t.a) * rgamma(t.c - t.a)
    if reciprocal == 0.0:
        alg_coeff = 0.0
    else:
        alg_coeff = math.copysign(math.exp(log_gbc + math.log(abs(reciprocal))), reciprocal)
    algebraic = alg_coeff * half ** (-2.0 * a)
    amplitude = math.exp(log_gbc - ln_gamma(a) - 0.5 * math.log(math.pi)) * half ** (-sigma)
    # expanded so the range reduction of x stays exact for large x
    theta = math.pi * sigma / 2.0
    oscillatory = amplitude * (math.cos(x) * math.cos(theta) + math.sin(x) * math.sin(theta))
    alg_corr = abs(algebraic * a * (1 + a - b) * (1 + a - c)) * (2.0 / x) ** 2
    osc_corr = amplitude * (1.0 + sigma * sigma + a * a + b * b + c * c) / (2.0 * x)
    return SeriesEvaluation(
        algebraic + oscillatory,
        2,
        alg_corr + osc_corr,
        Method.ASYMPTOTIC,
        in_validity_gate=x >= asymptotic_gate(t),
        extras={"algebraic": algebraic, "oscillatory": oscillatory, "amplitude": amplitude},
    )
