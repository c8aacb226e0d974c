"""Beta-integral representations of 1F2 and the functions built from them.

The basic move raises a denominator parameter (or lowers the numerator):

    F(a; b + d, c) (x) = 2/B(b, d) int_0^1 F(a; b, c)(x t) (1 - t^2)^(d-1) t^(2b-1) dt.

Every integrand here is an even entire function of t, so Gauss-Jacobi rules
in s = t^2 with the endpoint powers in the weight converge quickly even when
(1 - t^2)^(d-1) is singular.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Callable

import numpy as np
from scipy import integrate, special

from .bessel import bessel_zeros
from .errors import ConvergenceError, DomainError, PoleError
from .special_core import (
    SQRT_PI,
    HypergeometricSpec,
    ParameterTriple,
    beta,
    eval_pFq,
    hyp1f2,
    is_nonpositive_integer,
    rgamma,
)

HALF = Fraction(1, 2)
# successive Gauss-Jacobi rules agree to about 1e-13; rule noise grows with
# the order, so the self-check asks for a little less
QUAD_REL_TOL = 1e-11
MAX_ORDER = 1024
# accepted agreement once rule noise dominates the truncation error
NOISE_REL_TOL = 1e-9


@dataclass(frozen=True)
class JacobiQuadrature:
    """Nodes t_i in (0, 1) and weights w_i with

    sum_i w_i f(t_i) ~ int_0^1 f(t) (1 - t^2)^mu t^p dt,

    exact when f is a polynomial in t^2 of degree below 2 * order.
    """

    exponent_mu: float
    exponent_p: float
    nodes: np.ndarray
    weights: np.ndarray
    order: int

    @property
    def nodes_weights(self) -> list[tuple[float, float]]:
        return list(zip(self.nodes.tolist(), self.weights.tolist()))

    def integrate(self, f: Callable[[float], float]) -> float:
        return math.fsum(w * f(t) for t, w in zip(self.nodes, self.weights))


@functools.lru_cache(maxsize=256)
def _jacobi_cached(mu: float, p: float, order: int) -> JacobiQuadrature:
    q = (p - 1) / 2
    with np.errstate(invalid="ignore", divide="ignore"):
        # scipy evaluates a discarded 0/0 branch when mu + q = -1
        y, w = special.roots_jacobi(order, mu, q)
    s = (1 + y) / 2
    # int_0^1 (1-t^2)^mu t^p f dt = 1/2 int_0^1 (1-s)^mu s^q f ds, s = (1+y)/2
    weights = w * 2.0 ** (-mu - q - 1) / 2
    nodes = np.sqrt(s)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return JacobiQuadrature(mu, p, nodes, weights, order)


def jacobi_rule(mu: Real, p: Real, order: int) -> JacobiQuadrature:
    """Gauss rule on (0, 1) for the weight (1 - t^2)^mu t^p."""
    if not (mu > -1 and p > -1):
        raise DomainError(f"weight exponents must exceed -1, got mu={mu}, p={p}")
    if order < 1:
        raise DomainError(f"order must be positive, got {order}")
    return _jacobi_cached(float(mu), float(p), int(order))


def _settle(run: Callable[[int], float], n: int, rel_tol: float, floor: float) -> float:
    """Raise the order of ``run`` until two successive values agree to ``rel_tol``.

    Node and weight errors of high-order rules grow with the order, so when
    the differences start growing again before reaching ``rel_tol`` the best
    settled pair is accepted if it agrees to NOISE_REL_TOL.
    """
    previous = run(n)
    best_gap, best_value, rises = math.inf, previous, 0
    while True:
        n_next = n + max(8, n // 2)
        if n_next > MAX_ORDER:
            break
        current = run(n_next)
        gap = abs(current - previous) / max(floor, abs(current))
        if gap <= rel_tol:
            return current
        if gap < best_gap:
            best_gap, best_value, rises = gap, current, 0
        else:
            rises += 1
            if rises >= 2:
                break
        n, previous = n_next, current
    if best_gap <= NOISE_REL_TOL:
        return best_value
    raise ConvergenceError(f"Gauss-Jacobi rule did not settle by order {n_next}")


def beta_lift(f: Callable[[float], float], x: float, low: Real, shift: Real,
              rel_tol: float = QUAD_REL_TOL, order: int | None = None) -> float:
    """2/B(low, shift) int_0^1 f(x t) (1 - t^2)^(shift-1) t^(2 low - 1) dt.

    The order grows until two successive rules agree to ``rel_tol``.
    """
    if not (low > 0 and shift > 0):
        raise DomainError(f"lift needs low > 0 and shift > 0, got {low}, {shift}")
    scale = 2.0 / beta(low, shift)
    mu, p = float(shift) - 1, 2 * float(low) - 1
    xf = float(x)

    def run(n):
        rule = jacobi_rule(mu, p, n)
        return scale * rule.integrate(lambda t: f(xf * t))

    n = order or 24 + 2 * math.ceil(abs(xf))
    return _settle(run, n, rel_tol, floor=1.0)


# --------------------------------------------------------------------------
# the chained identities behind monotone parameter lifting

def _phi(a, b, c):
    return lambda x: hyp1f2(a, b, c, x)


def lift_steps(t: ParameterTriple, gamma: Real, delta: Real, epsilon: Real, x: Real):
    """(description, direct value, integral value) for each lift actually used."""
    if not 0 <= gamma < t.a:
        raise DomainError(f"need 0 <= gamma < a, got gamma={gamma}")
    if delta < 0 or epsilon < 0:
        raise DomainError("delta and epsilon must be nonnegative")
    if gamma == 0 and delta == 0 and epsilon == 0:
        raise DomainError("gamma, delta and epsilon must not all vanish")
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    a, b, c = t.a, t.b, t.c
    steps = []
    if delta > 0:
        lhs = hyp1f2(a, b + delta, c, x)
        rhs = beta_lift(_phi(a, b, c), x, b, delta)
        steps.append(("raise b", lhs, rhs))
    if epsilon > 0:
        lhs = hyp1f2(a, b + delta, c + epsilon, x)
        rhs = beta_lift(_phi(a, b + delta, c), x, c, epsilon)
        steps.append(("raise c", lhs, rhs))
    if gamma > 0:
        lhs = hyp1f2(a - gamma, b + delta, c + epsilon, x)
        rhs = beta_lift(_phi(a, b + delta, c + epsilon), x, a - gamma, gamma)
        steps.append(("lower a", lhs, rhs))
    return steps


def verify_lemma_a(t: ParameterTriple, gamma: Real, delta: Real, epsilon: Real, x: Real) -> float:
    """Largest |direct - integral| / max(1, |direct|) over the chained lifts."""
    return max(abs(lhs - rhs) / max(1.0, abs(lhs))
               for _, lhs, rhs in lift_steps(t, gamma, delta, epsilon, x))


# --------------------------------------------------------------------------
# squares of Bessel functions pushed through the lift

def _jj_sq(order: Real):
    spec = HypergeometricSpec((), (order + 1,))

    def f(x):
        v = eval_pFq(spec, abs(x) / 2).value
        return v * v

    return f


def raised_b_square_integral(a: Real, delta: Real, x: Real) -> float:
    """F(a; a + 1/2 + delta, 2a) as a lift of JJ_{a-1/2}(x/2)^2 in b."""
    return beta_lift(_jj_sq(a - HALF), x, a + HALF, delta)


def raised_c_square_integral(a: Real, epsilon: Real, x: Real) -> float:
    """F(a; a + 1/2, 2a + epsilon) as a lift of JJ_{a-1/2}(x/2)^2 in c."""
    return beta_lift(_jj_sq(a - HALF), x, 2 * a, epsilon)


def a_plus_one_integral(a: Real, x: Real) -> float:
    """F(a; a + 1/2, a + 1) for 0 < a < 1, the c-lift with epsilon = 1 - a."""
    if not 0 < a < 1:
        raise DomainError(f"needs 0 < a < 1, got {a}")
    return raised_c_square_integral(a, 1 - a, x)


def sine_square_integral(epsilon: Real, x: Real) -> float:
    """F(1; 3/2, 2 + epsilon) = 8 e (e + 1)/x^2 int_0^1 sin^2(xt/2) (1-t^2)^(e-1) t dt."""
    if not epsilon > 0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    xf, e = float(x), float(epsilon)
    integral = _weighted_sin_sq(xf, e - 1)
    return 8 * e * (e + 1) / (xf * xf) * integral


def _weighted_sin_sq(x: float, mu: float) -> float:
    """int_0^1 sin^2(x t/2) (1 - t^2)^mu t dt with a self-checking rule."""
    def run(n):
        return jacobi_rule(mu, 1, n).integrate(lambda t: math.sin(x * t / 2) ** 2)

    return _settle(run, 24 + math.ceil(x), QUAD_REL_TOL, floor=1e-300)


# --------------------------------------------------------------------------
# integral of J_alpha(t) t^(-beta)

def _bessel_integral_args(alpha: Real, beta_: Real):
    if not alpha > -1:
        raise DomainError(f"alpha must exceed -1, got {alpha}")
    if not alpha - beta_ + 1 > 0:
        raise DomainError(f"needs alpha - beta + 1 > 0, got alpha={alpha}, beta={beta_}")
    a = (alpha - beta_ + 1) / 2
    return a, alpha + 1, a + 1


def bessel_integral(alpha: Real, beta_: Real, x: Real) -> float:
    """int_0^x J_alpha(t) t^(-beta) dt through its 1F2 closed form."""
    a, b, c = _bessel_integral_args(alpha, beta_)
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    xf, af, bf = float(x), float(alpha), float(beta_)
    power = af - bf + 1
    prefactor = math.exp(power * math.log(xf) - af * math.log(2.0)) / power * rgamma(af + 1)
    return prefactor * hyp1f2(a, b, c, x)


def bessel_integral_quadrature(alpha: Real, beta_: Real, x: Real) -> float:
    """The same integral by adaptive quadrature between consecutive zeros of J_alpha."""
    _bessel_integral_args(alpha, beta_)
    af, bf, xf = float(alpha), float(beta_), float(x)
    cuts = [0.0] + [z for z in bessel_zeros(alpha, xf) if z < xf] + [xf]
    head = 1.0 / (2.0**af * math.gamma(af + 1))

    def smooth(t):
        # J_alpha(t) t^-alpha, regular at t = 0
        return head if t == 0 else special.jv(af, t) * t ** (-af)

    pieces = []
    first, _ = integrate.quad(smooth, cuts[0], cuts[1], weight="alg", wvar=(af - bf, 0.0),
                              epsabs=1e-15, epsrel=1e-13, limit=200)
    pieces.append(first)
    for lo, hi in zip(cuts[1:-1], cuts[2:]):
        piece, _ = integrate.quad(lambda t: special.jv(af, t) * t ** (-bf), lo, hi,
                                  epsabs=1e-15, epsrel=1e-13, limit=200)
        pieces.append(piece)
    return math.fsum(pieces)


# --------------------------------------------------------------------------
# Struve and the generalized sine integral

def _struve_prefactor(delta: Real, power: float) -> float:
    if delta == -1.5:
        raise PoleError("Gamma(delta + 3/2) has a pole at delta = -3/2")
    if not delta > -1.5:
        raise DomainError(f"delta must exceed -3/2, got {delta}")
    return rgamma(float(delta) + 1.5) / SQRT_PI * power


def struve(delta: Real, x: Real) -> float:
    """H_delta(x) = 2 (x/2)^(delta+1) / (sqrt(pi) Gamma(delta + 3/2)) 1F2(1; 3/2, 3/2 + delta)."""
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    pre = _struve_prefactor(delta, 2 * (float(x) / 2) ** (float(delta) + 1))
    if is_nonpositive_integer(delta + Fraction(3, 2)):
        raise PoleError("lower parameter 3/2 + delta is a pole")
    return pre * hyp1f2(1, Fraction(3, 2), Fraction(3, 2) + delta, x)


def struve_integral_form(delta: Real, x: Real) -> float:
    """H_delta(x) from the sin^2 integral; valid only for delta > 1/2."""
    if not delta > 0.5:
        raise DomainError(f"the integral form needs delta > 1/2, got {delta}")
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    d, xf = float(delta), float(x)
    pre = _struve_prefactor(delta, (2 * d - 1) * (2 * d + 1) * (xf / 2) ** (d - 1))
    return pre * _weighted_sin_sq(xf, d - 1.5)


def _check_sine_delta(delta):
    if not 0 < delta < 2:
        raise DomainError(f"delta must lie in (0, 2), got {delta}")


def generalized_sine_integral(delta: Real, x: Real) -> float:
    """int_0^x t^(-delta) sin t dt for 0 < delta < 2."""
    _check_sine_delta(delta)
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    d = Fraction(delta) if not isinstance(delta, float) else delta
    xf = float(x)
    pre = xf ** (2 - float(d)) / (2 - float(d))
    return pre * hyp1f2((2 - d) / 2, (4 - d) / 2, Fraction(3, 2), x)


def sine_integral_lower_bound(delta: Real, x: Real) -> float:
    """x^(2-delta)/(2-delta) (sin(x/2)/(x/2))^2, which the integral exceeds."""
    _check_sine_delta(delta)
    xf, d = float(x), float(delta)
    h = xf / 2
    return xf ** (2 - d) / (2 - d) * (math.sin(h) / h) ** 2


# --------------------------------------------------------------------------
# pFp+1 built from a 1F2 by beta integrals

def extension_integral(base: ParameterTriple, pairs, x: Real) -> float:
    """pFp+1(alpha, a_1..; beta, gamma, b_1..) as nested lifts of the base 1F2.

    Each pair (a_j, b_j) with 0 < a_j < b_j contributes one integral
    2/B(a_j, b_j - a_j) int_0^1 (.)(x t) (1 - t^2)^(b_j - a_j - 1) t^(2 a_j - 1) dt.
    """
    pairs = list(pairs)
    for lo, hi in pairs:
        if not 0 < lo < hi:
            raise DomainError(f"each pair needs 0 < a_j < b_j, got ({lo}, {hi})")

    def build(k):
        if k == len(pairs):
            return _phi(base.a, base.b, base.c)
        inner = build(k + 1)
        lo, hi = pairs[k]
        return lambda y: 1.0 if y == 0 else beta_lift(inner, y, lo, hi - lo, rel_tol=1e-10)

    return build(0)(float(x))
