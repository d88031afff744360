"""Special functions used throughout the package.

Conventions: Hermite polynomials are the physicists' ones (weight e^{-x^2}).
Airy and half-integer Bessel functions are real-argument only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
from scipy import integrate, special


class OutOfRangeError(ValueError):
    """Argument outside the validated range of an evaluator."""


@dataclass(frozen=True)
class AccuracySpec:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be strictly positive")


DEFAULT_ACCURACY = AccuracySpec()


# ---------------------------------------------------------------- Hermite


def hermite_h(n: int, x):
    """H_n(x) by H_n = 2x H_{n-1} - 2(n-1) H_{n-2}.

    Works for floats, numpy arrays, Fractions and sympy symbols alike.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    h_prev, h = 0 * x + 1, 2 * x
    if n == 0:
        return h_prev
    for m in range(2, n + 1):
        h_prev, h = h, 2 * x * h - 2 * (m - 1) * h_prev
    return h


def hermite_phi(n: int, x):
    """Normalized oscillator function (2^n n! sqrt(pi))^{-1/2} e^{-x^2/2} H_n(x).

    The normalized polynomial h_n = H_n / sqrt(2^n n! sqrt(pi)) obeys a stable
    recursion; its magnitude is tracked as a separate log scale so that the
    Gaussian factor is applied only at the end.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    x = np.asarray(x, dtype=float)
    h_prev = np.zeros_like(x)
    h = np.full_like(x, math.pi ** -0.25)
    log_scale = np.zeros_like(x)
    for m in range(n):
        h_prev, h = h, math.sqrt(2.0 / (m + 1)) * x * h - math.sqrt(m / (m + 1)) * h_prev
        big = np.abs(h) > 1e100
        if np.any(big):
            h = np.where(big, h * 1e-100, h)
            h_prev = np.where(big, h_prev * 1e-100, h_prev)
            log_scale = log_scale + np.where(big, 100 * math.log(10), 0.0)
    with np.errstate(divide="ignore"):
        out = np.sign(h) * np.exp(np.log(np.abs(h)) + log_scale - 0.5 * x * x)
    return out if out.ndim else float(out)


def incomplete_gaussian_b(x):
    """B(x) = e^{-x^2/2} * int_0^x e^{-y^2/2} dy."""
    x = np.asarray(x, dtype=float)
    out = np.exp(-0.5 * x * x) * math.sqrt(math.pi / 2) * special.erf(x / math.sqrt(2))
    return out if out.ndim else float(out)


# ------------------------------------------------------------ sine tail


def _si_series(x: float) -> float:
    total, term, k = 0.0, x, 0
    while True:
        contrib = term / (2 * k + 1)
        total += contrib
        if abs(contrib) < 1e-17 * max(abs(total), 1e-300):
            return total
        k += 1
        term *= -x * x / ((2 * k) * (2 * k + 1))


def sine_tail(x: float) -> float:
    """int_x^infty sin(z)/z dz for x > 0.

    Small x: pi/2 - Si(x) with Si from its power series. Larger x: the
    auxiliary functions f, g written as Laplace integrals, which are smooth.
    """
    if not x > 0:
        raise ValueError("sine_tail requires x > 0")
    if x <= 4.0:
        return math.pi / 2 - _si_series(x)
    opts = dict(epsabs=1e-15, epsrel=1e-13, limit=200)
    f = integrate.quad(lambda t: math.exp(-x * t) / (1 + t * t), 0, np.inf, **opts)[0]
    g = integrate.quad(lambda t: t * math.exp(-x * t) / (1 + t * t), 0, np.inf, **opts)[0]
    return f * math.cos(x) + g * math.sin(x)


# ------------------------------------------------------------------ Airy

AIRY_RANGE = 20.0
AIRY_CROSSOVER = 8.0


def _airy_maclaurin(x: float) -> tuple[float, float]:
    with mpmath.workdps(60):
        xm = mpmath.mpf(x)
        a0 = 1 / (mpmath.power(3, mpmath.mpf(2) / 3) * mpmath.gamma(mpmath.mpf(2) / 3))
        a1 = -1 / (mpmath.power(3, mpmath.mpf(1) / 3) * mpmath.gamma(mpmath.mpf(1) / 3))
        coef = [a0, a1, mpmath.mpf(0)]
        ai, dai = a0 + a1 * xm, a1
        tiny = mpmath.mpf(10) ** -45
        small_run, n = 0, 0
        while small_run < 3:
            c = coef[n] / ((n + 3) * (n + 2))
            coef.append(c)
            t = c * xm ** (n + 3)
            dt = (n + 3) * c * xm ** (n + 2)
            ai += t
            dai += dt
            # every third coefficient vanishes, so require a full cycle of small terms
            small_run = small_run + 1 if (n > 20 and abs(t) < tiny and abs(dt) < tiny) else 0
            n += 1
        return float(ai), float(dai)


@lru_cache(maxsize=None)
def _airy_u(k: int) -> float:
    # u_k = Gamma(3k+1/2) / (54^k k! Gamma(k+1/2))
    return math.exp(math.lgamma(3 * k + 0.5) - k * math.log(54) - math.lgamma(k + 1) - math.lgamma(k + 0.5))


def _airy_v(k: int) -> float:
    return -(6 * k + 1) / (6 * k - 1) * _airy_u(k)


def _truncated(coefs, zeta: float, sign_alternate: bool, start: int, step: int) -> float:
    # Sum coef(k) (-1)^j / zeta^k over k = start, start+step, ... stopping at the
    # smallest term (optimal truncation).
    total, prev, j, k = 0.0, math.inf, 0, start
    while True:
        term = coefs(k) / zeta ** k
        if abs(term) > prev or abs(term) < 1e-18 * abs(total):
            return total
        total += (-1) ** j * term if sign_alternate else term
        prev = abs(term)
        j += 1
        k += step


def _airy_asymptotic(x: float) -> tuple[float, float]:
    z = abs(x)
    zeta = 2.0 / 3.0 * z ** 1.5
    if x > 0:
        pref = math.exp(-zeta) / (2 * math.sqrt(math.pi))
        su = _truncated(_airy_u, zeta, True, 0, 1)
        sv = _truncated(_airy_v, zeta, True, 0, 1)
        return pref * su / z ** 0.25, -pref * z ** 0.25 * sv
    th = zeta - math.pi / 4
    ue = _truncated(_airy_u, zeta, True, 0, 2)
    uo = _truncated(_airy_u, zeta, True, 1, 2)
    ve = _truncated(_airy_v, zeta, True, 0, 2)
    vo = _truncated(_airy_v, zeta, True, 1, 2)
    ai = (math.cos(th) * ue + math.sin(th) * uo) / (math.sqrt(math.pi) * z ** 0.25)
    dai = z ** 0.25 * (math.sin(th) * ve - math.cos(th) * vo) / math.sqrt(math.pi)
    return ai, dai


def airy_ai(x: float) -> tuple[float, float, float]:
    """(Ai, Ai', Ai'') with Ai'' = x Ai imposed by construction.

    Maclaurin series (high working precision) for |x| <= 8, asymptotic
    expansions with optimal truncation beyond. Validated for |x| <= 20.
    """
    x = float(x)
    if abs(x) > AIRY_RANGE:
        raise OutOfRangeError(f"airy_ai validated only for |x| <= {AIRY_RANGE}, got {x}")
    if abs(x) <= AIRY_CROSSOVER:
        ai, dai = _airy_maclaurin(x)
    else:
        ai, dai = _airy_asymptotic(x)
    return ai, dai, x * ai


# --------------------------------------------------------------- Bessel


@lru_cache(maxsize=None)
def _half_bessel_terms(n: int) -> tuple[tuple[int, int, int], ...]:
    """(-1/x d/dx)^n (sin x / x) as a list of (power j, a_j, b_j).

    Meaning sum_j (a_j sin x + b_j cos x) x^{-j}; coefficients are integers.
    """
    terms = {1: (1, 0)}
    for _ in range(n):
        new: dict[int, tuple[int, int]] = {}

        def add(j, a, b):
            a0, b0 = new.get(j, (0, 0))
            new[j] = (a0 + a, b0 + b)

        for j, (a, b) in terms.items():
            # -(1/x) d/dx [a x^-j sin + b x^-j cos]
            add(j + 2, j * a, j * b)
            add(j + 1, b, -a)
        terms = {j: ab for j, ab in new.items() if ab != (0, 0)}
    return tuple(sorted((j, a, b) for j, (a, b) in terms.items()))


def bessel_j_half(n: int, x: float) -> float:
    """J_{n+1/2}(x) = sqrt(2/pi) x^{n+1/2} (-1/x d/dx)^n (sin x / x), 0 <= n <= 8.

    The sin/cos expansion cancels heavily for x < n, so it is summed in
    extended precision before rounding.
    """
    if not 0 <= n <= 8:
        raise ValueError("bessel_j_half supports 0 <= n <= 8")
    if x <= 0:
        raise ValueError("bessel_j_half requires x > 0")
    with mpmath.workdps(30 + 4 * n):
        xm = mpmath.mpf(x)
        s, c = mpmath.sin(xm), mpmath.cos(xm)
        acc = mpmath.mpf(0)
        for j, a, b in _half_bessel_terms(n):
            acc += (a * s + b * c) / xm ** j
        return float(mpmath.sqrt(2 / mpmath.pi) * xm ** (n + mpmath.mpf(1) / 2) * acc)


I0_ASYMPTOTIC_COEFFS = (Fraction(1), Fraction(1, 8), Fraction(9, 128), Fraction(225, 3072))


def bessel_i0_partial(x: float, terms: int) -> float:
    """Truncated large-x expansion e^x / sqrt(2 pi x) * sum_j a_j x^{-j}, j < terms."""
    if x <= 0:
        raise ValueError("x must be positive")
    if not 1 <= terms <= len(I0_ASYMPTOTIC_COEFFS):
        raise ValueError(f"terms must be in 1..{len(I0_ASYMPTOTIC_COEFFS)}")
    s = sum(float(a) / x ** j for j, a in enumerate(I0_ASYMPTOTIC_COEFFS[:terms]))
    return math.exp(x) / math.sqrt(2 * math.pi * x) * s
