"""Where 1F2(a; b, c; -x^2/4) is positive, and where it must change sign.

For fixed a the (b, c) quadrant splits into three pieces:

* the Newton diagram of the two points (a + 1/2, 2a) and (2a, a + 1/2),
  i.e. b >= m, c >= m, b + c >= 3a + 1/2 with m = min(a + 1/2, 2a), where the
  function is positive except at the two corner points (exact squares);
* three strips between that diagram and the line b + c = 3a + 1/2 on which
  the sign behaviour is undecided;
* the rest, where the function takes negative values somewhere.

Region edges are decided with exact comparisons on the values given; pass
``Fraction`` values to sit exactly on a boundary.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real

from scipy.optimize import minimize_scalar

from .bessel import BracketKind, ZeroBracket, first_zero
from .errors import DomainError
from .special_core import HypergeometricSpec, ParameterTriple, eval_1F2, eval_pFq

HALF = Fraction(1, 2)
SCAN_SPACING = math.pi / 8
MIN_SCAN_LIMIT = 40.0
SCAN_BRACKET_SLACK = 1e-9


class Region(enum.Enum):
    P_INTERIOR = "P_interior"
    LAMBDA_CORNER = "LambdaCorner"
    O_UNKNOWN = "O_unknown"
    N_ALTERNATING = "N_alternating"


class Sufficiency(enum.Enum):
    POSITIVE = "positive"
    BOUNDARY_NONNEGATIVE = "boundary_nonnegative"
    UNKNOWN = "unknown"


class BesselIntegralRegion(enum.Enum):
    A_POSITIVE = "A_positive"
    B_UNDETERMINED = "B_undetermined"
    OUTSIDE_C = "OutsideC_alternating"


@dataclass(frozen=True)
class RegionLabel:
    region: Region
    clause: str
    zero_bracket: ZeroBracket | None = None

    def __post_init__(self):
        if self.zero_bracket is not None and self.region is not Region.N_ALTERNATING:
            raise DomainError("only an alternating label carries a zero bracket")


@dataclass(frozen=True)
class BesselIntegralLabel:
    region: BesselIntegralRegion
    detail: str


@dataclass(frozen=True)
class Necessity:
    passed: bool
    clause: str = ""

    def __bool__(self):
        return self.passed


@dataclass(frozen=True)
class SufficiencyVerdict:
    status: Sufficiency
    clause: str = ""


@dataclass(frozen=True)
class ScanResult:
    """Outcome of a sign scan on (0, x_max].

    ``sign_change`` is a certified bracket when the function was seen to be
    negative; ``touches`` lists local minima where the value could not be
    told apart from zero.
    """

    x_max: float
    samples: int
    sign_change: ZeroBracket | None = None
    touches: tuple = ()

    @property
    def no_sign_change(self) -> bool:
        return self.sign_change is None


def _corner(a):
    return min(a + HALF, 2 * a)


def _plane(a):
    return 3 * a + HALF


# --------------------------------------------------------------------------
# necessity and sufficiency

def necessity_check(t: ParameterTriple) -> Necessity:
    """b > a, c > a and b + c >= 3a + 1/2 are all needed for positivity."""
    a, b, c = t.a, t.b, t.c
    if b <= a:
        return Necessity(False, "b <= a")
    if c <= a:
        return Necessity(False, "c <= a")
    if b + c < _plane(a):
        return Necessity(False, "b+c < 3a+1/2")
    return Necessity(True)


def _in_newton_diagram(a, b, c) -> bool:
    m = _corner(a)
    return b >= m and c >= m and b + c >= _plane(a)


def _is_lambda_corner(a, b, c) -> bool:
    return (b, c) in ((a + HALF, 2 * a), (2 * a, a + HALF))


def _between(x, p, q) -> bool:
    return min(p, q) < x < max(p, q)


def sufficiency_check(t: ParameterTriple) -> SufficiencyVerdict:
    """Which positivity result, if any, covers ``t``."""
    a, b, c = t.a, t.b, t.c
    if _is_lambda_corner(a, b, c):
        return SufficiencyVerdict(Sufficiency.BOUNDARY_NONNEGATIVE, "exact square of order a-1/2")
    for p, q in ((b, c), (c, b)):
        if (p >= a + HALF and q >= 2 * a) and p + q > _plane(a):
            return SufficiencyVerdict(Sufficiency.POSITIVE, "corner quadrant lift")
    if b + c == _plane(a) and a != HALF and _between(b, a + HALF, 2 * a):
        return SufficiencyVerdict(Sufficiency.POSITIVE, "boundary plane between corners")
    for p, q in ((b, c), (c, b)):
        if q == a + p - HALF and p > a + HALF:
            return SufficiencyVerdict(Sufficiency.POSITIVE, "c = a+b-1/2 with b > a+1/2")
        if q == 2 * a and p > a + HALF:
            return SufficiencyVerdict(Sufficiency.POSITIVE, "c = 2a with b > a+1/2")
        if p == a + 1 and q == Fraction(3, 2) and a < 1:
            return SufficiencyVerdict(Sufficiency.POSITIVE, "sine case (a, a+1, 3/2)")
    if _in_newton_diagram(a, b, c):
        return SufficiencyVerdict(Sufficiency.POSITIVE, "newton diagram")
    return SufficiencyVerdict(Sufficiency.UNKNOWN)


# --------------------------------------------------------------------------
# first-zero brackets

def _theorem_bracket(hi: float, clause: str, closed: bool = False) -> ZeroBracket:
    return ZeroBracket(0.0, hi, BracketKind.THEOREM_GUARANTEE, closed_hi=closed, clause=clause)


def _plane_bracket(a, b, c) -> ZeroBracket | None:
    """Bracket for a point on b + c = 3a + 1/2 lying below the square JJ_{a-1/2}^2."""
    if b + c != _plane(a) or b <= a or c <= a:
        return None
    if a == HALF:
        if b == 1:
            return None
        return _theorem_bracket(2 * first_zero(0.0), "boundary plane a = 1/2, b != 1")
    for p in (b, c):
        if (a < HALF and a < p < 2 * a) or (a > HALF and a < p < a + HALF):
            return _theorem_bracket(2 * first_zero(a - HALF), "boundary plane below square")
    return None


def _shifted_bracket(a, b, c) -> ZeroBracket | None:
    """Bracket for c = a+b-1/2 or c = 2a with a < b < a+1/2 (below JJ_{b-1}^2)."""
    for p, q in ((b, c), (c, b)):
        if a < p < a + HALF and (q == a + p - HALF or q == 2 * a):
            return _theorem_bracket(2 * first_zero(p - 1), "below square of order b-1")
    return None


def _direct_brackets(a, b, c) -> list[ZeroBracket]:
    found = []
    if b <= a:
        found.append(_theorem_bracket(first_zero(c - 1), "b <= a", closed=True))
    if c <= a:
        found.append(_theorem_bracket(first_zero(b - 1), "c <= a", closed=True))
    if b + c < _plane(a) and (
        (b <= a + HALF and c <= 2 * a) or (b <= 2 * a and c <= a + HALF)
    ):
        found.append(_theorem_bracket(2 * first_zero(a - HALF), "below plane corner box"))
    for make in (_plane_bracket, _shifted_bracket):
        bracket = make(a, b, c)
        if bracket is not None:
            found.append(bracket)
    return found


def _lifted(bracket: ZeroBracket, how: str) -> ZeroBracket:
    # a zero of the lifted function at z1 < hi forces one of ours in (0, z1]
    return _theorem_bracket(bracket.hi, f"lifted to {how}: {bracket.clause}", bracket.closed_hi)


def zero_brackets(t: ParameterTriple) -> list[ZeroBracket]:
    """Every theorem bracket for the first zero that applies to ``t``.

    Besides the direct clauses, an alternating point (a', b', c') with
    a' <= a, b' >= b, c' >= c passes its bracket down to ``t``; the lifts
    tried are onto the boundary plane (raising b or c, or lowering a) and
    onto c = a+b-1/2 and c = 2a.
    """
    a, b, c = t.a, t.b, t.c
    found = _direct_brackets(a, b, c)
    if b <= a or c <= a or b + c >= _plane(a):
        return found
    for p, q in ((b, c), (c, b)):
        for target, how in ((_plane(a) - p, "boundary plane"), (a + p - HALF, "c = a+b-1/2"),
                            (2 * a, "c = 2a")):
            if target > q:
                for make in (_plane_bracket, _shifted_bracket):
                    lifted = make(a, p, target)
                    if lifted is not None:
                        found.append(_lifted(lifted, how))
    lower_a = (b + c - HALF) / 3
    if 0 < lower_a < a:
        lifted = _plane_bracket(lower_a, b, c)
        if lifted is not None:
            found.append(_lifted(lifted, "boundary plane with smaller a"))
    return found


def first_zero_bound(t: ParameterTriple) -> ZeroBracket | None:
    """The tightest theorem bracket (0, z] for the first positive zero, if any."""
    found = zero_brackets(t)
    if not found:
        return None
    return min(found, key=lambda br: (br.hi, br.closed_hi))


# --------------------------------------------------------------------------
# the classifier

def _strip(a, b, c) -> int:
    """Index 1..3 of the undecided strip containing (b, c), or 0."""
    line = _plane(a) - b
    if a >= HALF:
        if a < b < a + HALF and c >= line:
            return 1
        if 2 * a < b < 2 * a + HALF and line <= c < a + HALF:
            return 2
        if b >= 2 * a + HALF and a < c < a + HALF:
            return 3
    else:
        if a < b < 2 * a and c >= line:
            return 1
        if a + HALF < b < 2 * a + HALF and line <= c < 2 * a:
            return 2
        if b >= 2 * a + HALF and a < c < 2 * a:
            return 3
    return 0


def classify(a: Real, b: Real, c: Real) -> RegionLabel:
    """Label (b, c) for fixed a as Newton diagram, corner, strip or alternating."""
    t = ParameterTriple(a, b, c)
    if _in_newton_diagram(a, b, c):
        if _is_lambda_corner(a, b, c):
            return RegionLabel(Region.LAMBDA_CORNER, "newton diagram corner")
        return RegionLabel(Region.P_INTERIOR, "newton diagram")
    strip = _strip(a, b, c)
    if strip:
        return RegionLabel(Region.O_UNKNOWN, f"strip {strip}")
    failed = necessity_check(t)
    return RegionLabel(Region.N_ALTERNATING, failed.clause or "complement", first_zero_bound(t))


def classify_on_boundary_plane(a: Real, b: Real) -> RegionLabel:
    """Sharp classification of (a, b, 3a + 1/2 - b)."""
    c = _plane(a) - b
    if not (a > 0 and b > 0):
        raise DomainError(f"a and b must be positive, got ({a}, {b})")
    if not c > 0:
        raise DomainError(f"3a+1/2-b must be positive, got {c}")
    if _is_lambda_corner(a, b, c):
        clause = "exact square of order 0" if a == HALF else "newton diagram corner"
        return RegionLabel(Region.LAMBDA_CORNER, clause)
    if a != HALF and _between(b, a + HALF, 2 * a):
        return RegionLabel(Region.P_INTERIOR, "boundary plane between corners")
    if b <= a or c <= a:
        t = ParameterTriple(a, b, c)
        return RegionLabel(Region.N_ALTERNATING, necessity_check(t).clause, first_zero_bound(t))
    bracket = _plane_bracket(a, b, c)
    if bracket is not None:
        return RegionLabel(Region.N_ALTERNATING, bracket.clause, bracket)
    return RegionLabel(Region.O_UNKNOWN, "boundary plane")


# --------------------------------------------------------------------------
# the Bessel integral of J_alpha(t) t^(-beta)

def bessel_integral_region(alpha: Real, beta: Real) -> BesselIntegralLabel:
    if not alpha > -1:
        raise DomainError(f"alpha must exceed -1, got {alpha}")
    in_c = beta >= -HALF and -alpha - 1 < beta < alpha + 1
    if not in_c:
        if not alpha - beta + 1 > 0:
            return BesselIntegralLabel(BesselIntegralRegion.OUTSIDE_C, "integral diverges at 0")
        return BesselIntegralLabel(BesselIntegralRegion.OUTSIDE_C, "fails a necessary condition")
    if -1 < alpha + beta < 0 and -HALF <= beta < 0:
        return BesselIntegralLabel(BesselIntegralRegion.B_UNDETERMINED, "parallelogram")
    return BesselIntegralLabel(BesselIntegralRegion.A_POSITIVE, "positive")


def bessel_integral_triple(alpha: Real, beta: Real) -> ParameterTriple:
    """(a, b, c) with integral_0^x J_alpha t^-beta dt proportional to 1F2(a; b, c)."""
    a = (alpha - beta + 1) / 2
    if not a > 0:
        raise DomainError(f"needs alpha - beta + 1 > 0, got {alpha}, {beta}")
    return ParameterTriple(a, alpha + 1, a + 1)


# --------------------------------------------------------------------------
# pFp+1 extension

@dataclass(frozen=True)
class ExtensionVerdict:
    status: Sufficiency
    base: ParameterTriple | None = None
    pairs: tuple = ()


def _is_nonnegative(t: ParameterTriple) -> bool:
    return sufficiency_check(t).status is not Sufficiency.UNKNOWN


def _pairs_dominated(upper, lower) -> tuple | None:
    """Match every upper entry with a strictly larger lower entry, if possible."""
    # sorted matching is optimal: pair the k-th smallest with the k-th smallest
    up, lo = sorted(upper), sorted(lower)
    if all(0 < u < l for u, l in zip(up, lo)):
        return tuple(zip(up, lo))
    return None


def extension_check(spec: HypergeometricSpec) -> ExtensionVerdict:
    """Positivity of a pFp+1 obtained from a nonnegative 1F2 by beta integrals."""
    upper, lower = list(spec.upper), list(spec.lower)
    if len(lower) != len(upper) + 1:
        raise DomainError("extension needs len(lower) = len(upper) + 1")
    if len(upper) < 1 or any(not v > 0 for v in upper + lower):
        return ExtensionVerdict(Sufficiency.UNKNOWN)
    for i in range(len(upper)):
        rest_up = upper[:i] + upper[i + 1:]
        for j, k in itertools.combinations(range(len(lower)), 2):
            rest_lo = [v for m, v in enumerate(lower) if m not in (j, k)]
            base = ParameterTriple(upper[i], lower[j], lower[k])
            if not _is_nonnegative(base):
                continue
            pairs = _pairs_dominated(rest_up, rest_lo)
            if pairs is not None:
                return ExtensionVerdict(Sufficiency.POSITIVE, base, pairs)
    return ExtensionVerdict(Sufficiency.UNKNOWN)


# --------------------------------------------------------------------------
# empirical sign scan

def default_scan_limit(t: ParameterTriple | HypergeometricSpec) -> float:
    """max(40, 4 j_{a-1/2} + 5), enough to cover every theorem bracket."""
    if not isinstance(t, ParameterTriple):
        return MIN_SCAN_LIMIT
    a = t.a
    if a - HALF > -1:
        return max(MIN_SCAN_LIMIT, 2 * (2 * first_zero(a - HALF)) + 5)
    return MIN_SCAN_LIMIT


def _evaluate(t, x: float):
    if isinstance(t, ParameterTriple):
        return eval_1F2(t.a, t.b, t.c, x)
    return eval_pFq(t, x)


def _refine_bracket(t, lo, hi, sign_lo, abs_tol=1e-10):
    while hi - lo > abs_tol:
        mid = 0.5 * (lo + hi)
        s = _evaluate(t, mid).certified_sign
        if s == 0:
            break
        if s == sign_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def sign_scan_verify(
    t: ParameterTriple | HypergeometricSpec,
    x_max: float | None = None,
    spacing: float = SCAN_SPACING,
) -> ScanResult:
    """Look for a certified negative value of 1F2(a; b, c; -x^2/4) on (0, x_max].

    A :class:`HypergeometricSpec` may be passed instead of a triple to scan
    any pFq at -x^2/4.

    Samples are at most ``spacing`` apart (pi/8 resolves the cos(x - pi sigma/2)
    oscillation).  Every interior local minimum of the samples is refined by a
    bounded minimisation, so a shallow dip between two samples is still seen.
    """
    if x_max is None:
        x_max = default_scan_limit(t)
    if not x_max > 0:
        raise DomainError(f"x_max must be positive, got {x_max}")
    if not 0 < spacing <= SCAN_SPACING:
        raise DomainError(f"spacing must lie in (0, pi/8], got {spacing}")
    n = max(2, math.ceil(x_max / spacing))
    xs = [x_max * k / n for k in range(1, n + 1)]
    values = []
    touches = []
    prev_x = 0.0
    for i, x in enumerate(xs):
        ev = _evaluate(t, x)
        values.append(ev.value)
        s = ev.certified_sign
        if s < 0:
            lo, hi = _refine_bracket(t, prev_x if prev_x > 0 else x * 1e-3, x, 1)
            return ScanResult(x_max, i + 1, _certified(lo, hi), tuple(touches))
        if s == 0:
            touches.append(x)
            continue
        prev_x = x
        if i >= 2 and values[i - 1] < values[i - 2] and values[i - 1] < values[i]:
            dip = _probe_minimum(t, xs[i - 2], x)
            if dip is not None:
                x_min, ev_min = dip
                if ev_min.certified_sign < 0:
                    lo, hi = _refine_bracket(t, xs[i - 2], x_min, 1)
                    return ScanResult(x_max, i + 1, _certified(lo, hi), tuple(touches))
                if ev_min.certified_sign == 0:
                    touches.append(x_min)
    return ScanResult(x_max, len(xs), None, tuple(sorted(set(touches))))


def scan_confirms(scan: ScanResult, bracket: ZeroBracket) -> bool:
    """True when the scan found a sign change inside a theorem bracket.

    Theorem endpoints come from computed zeros, so the right end is allowed
    a slack of SCAN_BRACKET_SLACK relative to its size.
    """
    if scan.sign_change is None:
        return False
    return scan.sign_change.within(bracket, SCAN_BRACKET_SLACK * max(1.0, bracket.hi))


def _certified(lo: float, hi: float) -> ZeroBracket:
    return ZeroBracket(lo, hi, BracketKind.SIGN_CHANGE_CERTIFIED, clause="sign scan")


def _probe_minimum(t, lo, hi):
    res = minimize_scalar(lambda x: _evaluate(t, x).value, bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-10})
    if not res.success:
        return None
    return float(res.x), _evaluate(t, float(res.x))
