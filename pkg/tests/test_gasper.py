import random
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from hyperpos import gasper
from hyperpos.bessel import first_zero, squared_bessel
from hyperpos.errors import DomainError
from hyperpos.gasper import Conclusion, Reduction, SignPattern
from hyperpos.special_core import ParameterTriple, hyp1f2

HALF = F(1, 2)


def exact_terminating(upper, lower):
    """Sum a terminating series at argument 1 in exact rational arithmetic."""
    total, term, k = F(1), F(1), 0
    while True:
        for u in upper:
            term *= F(u) + k
        for v in lower:
            term /= F(v) + k
        k += 1
        term /= k
        if term == 0:
            return float(total)
        total += term


def mp_1f2(t, x):
    with mpmath.workdps(40):
        a, b, c = (mpmath.mpf(v.numerator) / v.denominator for v in map(F, (t.a, t.b, t.c)))
        return float(mpmath.hyp1f2(a, b, c, -mpmath.mpf(x) ** 2 / 4))


@pytest.mark.parametrize("n", [1, 2, 5, 9])
def test_s_coefficient_matches_mpmath(n):
    t = ParameterTriple(F(7, 5), F(9, 4), F(13, 6))
    nu = F(3, 10)
    ref = exact_terminating([-n, n + 2 * nu, nu + 1, t.a], [nu + HALF, t.b, t.c])
    assert gasper.s_coefficient(n, nu, t) == pytest.approx(ref, rel=1e-12, abs=1e-15)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 12), st.fractions(F(1, 5), 4), st.fractions(F(1, 5), 4),
       st.fractions(F(1, 5), 4))
def test_saalschutz_closed_form(n, alpha, beta, gamma):
    delta = 1 + alpha + beta - gamma
    if delta <= 0 or delta.denominator == 1:
        return
    ref = exact_terminating([-n, n + alpha, beta], [gamma, delta])
    assert gasper.saalschutz_3f2(n, alpha, beta, gamma) == pytest.approx(ref, rel=1e-10, abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 12), st.fractions(F(1, 5), 4), st.fractions(F(1, 5), 4))
def test_watson_closed_form(n, alpha, beta):
    ref = exact_terminating([-n, n + 2 * alpha, beta], [alpha + HALF, 2 * beta]) if n else 1.0
    assert gasper.watson_3f2(n, alpha, beta) == pytest.approx(ref, rel=1e-10, abs=1e-12)


def test_watson_vanishes_for_odd_n():
    for n in (1, 3, 7, 11):
        assert gasper.watson_3f2(n, F(2, 3), F(5, 7)) == 0.0


def _family(kind, rng):
    a = F(rng.randint(3, 30), 10)
    b = F(rng.randint(3, 30), 10)
    if kind is Reduction.BOUNDARY_PLANE:
        c = 3 * a + HALF - b
        return (ParameterTriple(a, b, c) if c > 0 else None), a - HALF
    if kind is Reduction.SHIFTED_C:
        return ParameterTriple(a, b, a + b - HALF), b - 1
    return ParameterTriple(a, b, 2 * a), b - 1


@pytest.mark.parametrize("kind", [Reduction.BOUNDARY_PLANE, Reduction.SHIFTED_C, Reduction.WATSON])
def test_closed_forms_agree_with_general_sum(kind):
    rng = random.Random(11)
    checked = 0
    while checked < 6:
        t, nu = _family(kind, rng)
        if t is None or (2 * nu).denominator == 1 and nu < 0:
            continue
        fast = gasper.expand(t, nu, 20)
        slow = gasper.expand(t, nu, 20, reduction=Reduction.GENERAL)
        assert fast.reduction is kind
        for (n, u), (_, v) in zip(fast.coefficients, slow.coefficients):
            assert u == pytest.approx(v, rel=1e-12, abs=1e-14 * max(1.0, abs(v))), (t, nu, n)
        checked += 1


def test_sine_case_agrees_with_general_sum():
    t = ParameterTriple(F(3, 4), F(7, 4), F(3, 2))
    fast = gasper.expand(t, HALF, 15)
    slow = gasper.expand(t, HALF, 15, reduction=Reduction.GENERAL)
    assert fast.reduction is Reduction.SINE_CASE
    assert fast.values() == pytest.approx(slow.values(), rel=1e-12)


def test_plane_corner_expansion_is_exact_square():
    t = ParameterTriple(F(3, 4), F(5, 4), F(3, 2))
    e = gasper.expand(t, F(1, 4))
    assert e.sign_pattern is SignPattern.ALL_ZERO
    assert gasper.bound_conclusion(e) is Conclusion.EXACT_SQUARE
    assert gasper.eval_via_gasper(t, F(1, 4), 7.0).value == pytest.approx(squared_bessel(F(1, 4), 7.0))


def test_small_a_illustrations():
    above = gasper.expand(ParameterTriple(F(1, 8), F(3, 8), F(1, 2)), F(-3, 8))
    below = gasper.expand(ParameterTriple(F(1, 8), F(3, 16), F(11, 16)), F(-3, 8))
    assert above.sign_pattern is SignPattern.ALL_POSITIVE and above.exact
    assert below.sign_pattern is SignPattern.ALL_NEGATIVE and below.exact
    assert gasper.bound_conclusion(above) is Conclusion.STRICT_LOWER
    assert gasper.bound_conclusion(below) is Conclusion.STRICT_UPPER
    br = gasper.square_zero_bracket(below)
    assert br.hi == pytest.approx(2 * first_zero(F(-3, 8)))


def test_half_plane_off_corner_lies_below_square():
    for b in (F(3, 4), F(6, 5)):
        e = gasper.expand(ParameterTriple(HALF, b, 2 - b), 0)
        assert gasper.bound_conclusion(e) is Conclusion.STRICT_UPPER


def test_plane_interior_beats_the_square():
    t = ParameterTriple(1, F(8, 5), F(19, 10))
    v = gasper.eval_via_gasper(t, HALF, 5).value
    assert v > squared_bessel(HALF, 5)
    assert v == pytest.approx(hyp1f2(1, F(8, 5), F(19, 10), 5), rel=1e-12)


@pytest.mark.parametrize("x", [1, 5, 10, 20])
def test_expansion_sum_matches_mpmath(x):
    rng = random.Random(5)
    for _ in range(4):
        t = ParameterTriple(*(F(rng.randint(2, 40), 10) for _ in range(3)))
        nu = F(rng.randint(-4, 20), 10)
        ref = mp_1f2(t, x)
        got = gasper.eval_via_gasper(t, nu, x).value
        assert abs(got - ref) <= 1e-9 * max(1.0, abs(ref)), (t, nu)


def test_natural_order_detection():
    nu, red = gasper.natural_nu(ParameterTriple(1, F(3, 2), 2))
    assert red is not Reduction.GENERAL
    assert gasper.natural_nu(ParameterTriple(F(13, 10), F(17, 10), F(23, 10))) is None


def test_invalid_order_rejected():
    with pytest.raises(DomainError):
        gasper.check_nu(-1)
    with pytest.raises(DomainError):
        gasper.expand(ParameterTriple(1, 2, 3), F(-3, 2))
    gasper.check_nu(0)


def test_forcing_a_closed_form_that_does_not_apply():
    with pytest.raises(DomainError):
        gasper.expand(ParameterTriple(1, 2, 3), HALF, reduction=Reduction.WATSON)
