"""Self-checks run by ``hyperpos verify``.

Each check names the result it exercises and records pass/fail with a short
detail string; a check that raises counts as a failure.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from scipy import special

from . import bessel, gasper, regions, transforms
from .special_core import ParameterTriple, hyp1f2

F = Fraction
SUITES = ("identities", "sharpness", "gasper", "transforms")


@dataclass(frozen=True)
class Check:
    name: str
    anchor: str
    passed: bool
    detail: str = ""


def _run(name: str, anchor: str, body: Callable[[], tuple[bool, str]]) -> Check:
    try:
        ok, detail = body()
    except Exception as exc:  # a crash is a failed check, never a pass
        return Check(name, anchor, False, f"{type(exc).__name__}: {exc}")
    return Check(name, anchor, bool(ok), detail)


def _worst(pairs) -> float:
    return max(abs(u - v) / max(1.0, abs(v)) for u, v in pairs)


# --------------------------------------------------------------------------
# identities

def _closed_forms():
    xs = [50 * k / 100 for k in range(1, 101)]
    err = max(
        max(abs(bessel.eval_normalized_bessel(F(1, 2), x) - math.sin(x) / x),
            abs(bessel.eval_normalized_bessel(F(-1, 2), x) - math.cos(x)))
        for x in xs
    )
    return err <= 1e-11, f"max error {err:.2e}"


def _square_identity():
    pairs = [(bessel.squared_bessel(al, x), bessel.squared_bessel_1f2(al, x))
             for al in (F(-1, 4), F(1, 3), 2) for x in (0.5, 3, 11, 27)]
    err = _worst(pairs)
    return err <= 1e-11, f"max error {err:.2e}"


def _lift_residuals(rng):
    worst = 0.0
    for _ in range(6):
        t = ParameterTriple(rng.uniform(0.2, 3), rng.uniform(0.2, 3), rng.uniform(0.2, 3))
        gamma = rng.uniform(0, t.a * 0.9)
        worst = max(worst, transforms.verify_lemma_a(
            t, gamma, rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(0.5, 12)))
    return worst <= 1e-8, f"max residual {worst:.2e}"


def _gasper_sum(rng):
    worst = 0.0
    for _ in range(3):
        t = ParameterTriple(rng.uniform(0.2, 3), rng.uniform(0.2, 3), rng.uniform(0.2, 3))
        nu = t.a - F(1, 2)
        for x in (1, 7):
            v = gasper.eval_via_gasper(t, nu, x).value
            worst = max(worst, abs(v - hyp1f2(t.a, t.b, t.c, x)) / max(1, abs(v)))
    return worst <= 1e-9, f"max error {worst:.2e}"


def identities(rng) -> list[Check]:
    return [
        _run("half-integer closed forms", "JJ_{1/2} = sin x/x, JJ_{-1/2} = cos x", _closed_forms),
        _run("squared Bessel identity", "JJ_alpha(x/2)^2 as 1F2", _square_identity),
        _run("monotone lifting integrals", "beta-integral lifts in b, c and a",
             lambda: _lift_residuals(rng)),
        _run("squared-Bessel expansion", "1F2 = sum of squares with 4F3 coefficients",
             lambda: _gasper_sum(rng)),
    ]


# --------------------------------------------------------------------------
# sharpness

def _plane_interior(a):
    lo, hi = sorted((a + F(1, 2), 2 * a))
    b = (lo + hi) / 2
    label = regions.classify_on_boundary_plane(a, b)
    scan = regions.sign_scan_verify(ParameterTriple(a, b, 3 * a + F(1, 2) - b), 40)
    ok = label.region is regions.Region.P_INTERIOR and scan.no_sign_change
    return ok, f"b={b} label={label.region.value} scan clean={scan.no_sign_change}"


def _plane_exterior(a):
    b = a + (a if a < F(1, 2) else F(1, 2)) / 2
    label = regions.classify_on_boundary_plane(a, b)
    scan = regions.sign_scan_verify(ParameterTriple(a, b, 3 * a + F(1, 2) - b), 40)
    br = label.zero_bracket
    ok = (label.region is regions.Region.N_ALTERNATING and br is not None
          and regions.scan_confirms(scan, br))
    return ok, f"b={b} bracket={br and br.hi:.6g} scan={scan.sign_change}"


def _half_plane():
    xs = [0.3 * k for k in range(1, 101)]
    err = max(abs(hyp1f2(F(1, 2), 1, 1, x) - bessel.squared_bessel(0, x)) for x in xs)
    label = regions.classify_on_boundary_plane(F(1, 2), 1)
    return err <= 1e-10 and label.region is regions.Region.LAMBDA_CORNER, f"max error {err:.2e}"


def _shifted_family(which, b):
    a = 1
    c = a + b - F(1, 2) if which == "c=a+b-1/2" else 2 * a
    t = ParameterTriple(a, b, c)
    scan = regions.sign_scan_verify(t, 40)
    if b > a + F(1, 2):
        xs = [0.25 * k for k in range(1, 161)]
        gap = min(hyp1f2(a, b, c, x) - bessel.squared_bessel(b - 1, x) for x in xs)
        return scan.no_sign_change and gap > 0, f"min(Phi - square) {gap:.2e}"
    br = regions.first_zero_bound(t)
    ok = scan.sign_change is not None and br is not None and scan.sign_change.hi < 2 * bessel.first_zero(b - 1)
    return ok, f"scan={scan.sign_change}"


def sharpness(rng) -> list[Check]:
    out = []
    for a in (F(1, 4), F(1), F(2)):
        out.append(_run(f"plane interior a={a}", "boundary plane positive between corners",
                        lambda a=a: _plane_interior(a)))
        out.append(_run(f"plane exterior a={a}", "boundary plane below the square",
                        lambda a=a: _plane_exterior(a)))
    out.append(_run("plane a=1/2, b=1", "exact square JJ_0(x/2)^2", _half_plane))
    for which in ("c=a+b-1/2", "c=2a"):
        for b in (F(7, 5), F(8, 5)):
            out.append(_run(f"{which} b={b}", "iff b > a+1/2 with square comparison",
                            lambda w=which, b=b: _shifted_family(w, b)))
    return out


# --------------------------------------------------------------------------
# gasper

def _reductions_match(rng):
    worst = 0.0
    families = []
    for _ in range(4):
        a = F(rng.randint(3, 40), 16)
        shift = F(rng.randint(1, 15), 16)
        families.append((ParameterTriple(a, a + shift, 2 * a + F(1, 2) - shift), a - F(1, 2)))
        b = F(rng.randint(20, 60), 16)
        families.append((ParameterTriple(a, b, a + b - F(1, 2)), b - 1))
        families.append((ParameterTriple(a, b, 2 * a), b - 1))
    for t, nu in families:
        fast = gasper.expand(t, nu, 20)
        if fast.reduction is gasper.Reduction.GENERAL:
            return False, f"no closed form matched {t}"
        slow = gasper.expand(t, nu, 20, reduction=gasper.Reduction.GENERAL)
        scale = max(abs(v) for v in slow.values()) or 1.0
        for u, v in zip(fast.values(), slow.values()):
            worst = max(worst, abs(u - v) / max(abs(v), 1e-12 * scale))
    return worst <= 1e-10, f"max relative gap {worst:.2e}"


def _plane_patterns():
    bad = []
    for a in (F(1, 8), F(1, 4), F(3, 8), F(3, 4), F(1), F(3, 2), F(2)):
        for k in range(1, 32):
            b = a + F(k, 32) * (a + F(1, 2))
            c = 3 * a + F(1, 2) - b
            if not (b > a and c > a):
                continue
            e = gasper.expand(ParameterTriple(a, b, c), a - F(1, 2), 30)
            label = regions.classify_on_boundary_plane(a, b)
            expected = {
                regions.Region.P_INTERIOR: gasper.SignPattern.ALL_POSITIVE,
                regions.Region.N_ALTERNATING: gasper.SignPattern.ALL_NEGATIVE,
                regions.Region.LAMBDA_CORNER: gasper.SignPattern.ALL_ZERO,
            }.get(label.region)
            if expected is not None and e.sign_pattern is not expected:
                bad.append((a, b))
    return not bad, f"mismatches {bad[:3]}"


def _watson_odd():
    e = gasper.expand(ParameterTriple(1, F(8, 5), 2), F(3, 5), 20)
    odd = [v for n, v in e.coefficients if n % 2]
    return all(v == 0 for v in odd), f"odd coefficients {odd[:3]}"


def _plane_values():
    worst = 0.0
    for a, b in ((F(1, 8), F(3, 8)), (F(1, 8), F(3, 16)), (F(1), F(8, 5)), (F(2), F(11, 5))):
        t = ParameterTriple(a, b, 3 * a + F(1, 2) - b)
        for x in (2, 9, 17):
            v = gasper.eval_via_gasper(t, a - F(1, 2), x).value
            worst = max(worst, abs(v - hyp1f2(t.a, t.b, t.c, x)))
    return worst <= 1e-10, f"max error {worst:.2e}"


def gasper_suite(rng) -> list[Check]:
    return [
        _run("closed forms vs direct 4F3", "Saalschutz and Watson reductions", lambda: _reductions_match(rng)),
        _run("boundary plane sign patterns", "coefficient signs on b+c = 3a+1/2", _plane_patterns),
        _run("Watson odd coefficients", "c = 2a expansion has even terms only", _watson_odd),
        _run("boundary plane expansion values", "expansion sums to 1F2", _plane_values),
    ]


# --------------------------------------------------------------------------
# transforms

def _jacobi_sums():
    worst = 0.0
    for mu, p in ((0, 0), (1, 1), (-0.5, 0), (-0.9, 2.5), (3, -0.5)):
        rule = transforms.jacobi_rule(mu, p, 16)
        exact = special.beta((p + 1) / 2, mu + 1) / 2
        worst = max(worst, abs(rule.weights.sum() - exact) / exact)
    return worst <= 1e-12, f"max relative error {worst:.2e}"


def _struve():
    pairs = [(transforms.struve(d, x), special.struve(d, x)) for d in (0.6, 1, 2) for x in (0.5, 7, 25)]
    pairs += [(transforms.struve_integral_form(d, x), special.struve(d, x)) for d in (0.75, 1.5) for x in (3, 19)]
    err = _worst(pairs)
    positive = all(transforms.struve(1, 0.5 * k) > 0 for k in range(1, 81))
    return err <= 1e-9 and positive, f"max error {err:.2e}"


def _sine_integral():
    ok = all(transforms.generalized_sine_integral(d, x) > transforms.sine_integral_lower_bound(d, x)
             for d in (0.5, 1, 1.5) for x in (0.5, math.pi, 2 * math.pi, 11, 4 * math.pi, 30))
    err = max(abs(transforms.generalized_sine_integral(1, x) - special.sici(x)[0]) for x in (1, 10, 30))
    return ok and err <= 1e-10, f"Si error {err:.2e}"


def _bessel_integral():
    pairs = [(transforms.bessel_integral(al, be, x), transforms.bessel_integral_quadrature(al, be, x))
             for al, be in ((0, 0), (2, -0.5), (1.5, 0.5)) for x in (4, 21)]
    err = _worst(pairs)
    return err <= 1e-8, f"max error {err:.2e}"


def _a_plus_one():
    pairs = [(transforms.a_plus_one_integral(a, x), hyp1f2(a, a + F(1, 2), a + 1, x))
             for a in (F(1, 4), F(3, 5), F(9, 10)) for x in (2, 9)]
    err = _worst(pairs)
    return err <= 1e-8, f"max error {err:.2e}"


def transforms_suite(rng) -> list[Check]:
    return [
        _run("Jacobi weight sums", "beta-function moments", _jacobi_sums),
        _run("Struve function", "positive for delta > 1/2", _struve),
        _run("generalized sine integral", "exceeds the squared sinc bound", _sine_integral),
        _run("Bessel integral closed form", "integral of J_alpha t^-beta as 1F2", _bessel_integral),
        _run("(a; a+1/2, a+1) integral", "c-lift of JJ_{a-1/2}^2", _a_plus_one),
    ]


_SUITE_FUNCS = {
    "identities": identities,
    "sharpness": sharpness,
    "gasper": gasper_suite,
    "transforms": transforms_suite,
}


def run_suite(name: str, seed: int = 0) -> list[Check]:
    names = SUITES if name == "all" else (name,)
    checks = []
    for suite in names:
        if suite not in _SUITE_FUNCS:
            raise ValueError(f"unknown suite {suite}")
        checks.extend(_SUITE_FUNCS[suite](random.Random(seed)))
    return checks
