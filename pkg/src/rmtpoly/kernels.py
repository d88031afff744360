"""Scaling-limit correlation functions in the bulk and at the soft edge.

Bulk functions take x = pi N rho (l1 - l2), so the mean level spacing is pi.
Near x = 0 each removable singularity is replaced by its Taylor series.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special

from .specfun import _si_series, airy_ai, bessel_j_half, sine_tail

SMALL_X = 1e-2
# below this separation the Airy forms switch to their coincident-point series
AIRY_COINCIDENT = 2e-2


def _vectorize(fn):
    def wrapper(x, *args):
        if np.ndim(x) == 0:
            return fn(float(x), *args)
        return np.array([fn(float(t), *args) for t in np.ravel(x)]).reshape(np.shape(x))

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _sinc(x: float) -> float:
    if abs(x) < SMALL_X:
        y = x * x
        return 1 - y / 6 + y * y / 120 - y ** 3 / 5040
    return math.sin(x) / x


def _dsinc(x: float) -> float:
    if abs(x) < SMALL_X:
        y = x * x
        return x * (-1 / 3 + y / 30 - y * y / 840)
    return (x * math.cos(x) - math.sin(x)) / (x * x)


@_vectorize
def sine_kernel(x: float) -> float:
    """sin(x)/x, equal to 1 at x = 0."""
    return _sinc(x)


@_vectorize
def rho2_gue(x: float) -> float:
    """1 - (sin x / x)^2."""
    if abs(x) < SMALL_X:
        y = x * x
        return y / 3 - 2 * y * y / 45 + y ** 3 / 315
    return 1 - _sinc(x) ** 2


@_vectorize
def rho2_goe(x: float) -> float:
    """1 - sinc(x)^2 - sinc'(x) int_x^inf sin(z)/z dz; even in x, 0 at x = 0."""
    x = abs(x)
    if x == 0:
        return 0.0
    return rho2_gue(x) - _dsinc(x) * sine_tail(x)


@_vectorize
def rho2_gse(x: float) -> float:
    """1 - sinc(2x)^2 + sinc'(2x) Si(2x), which vanishes like (2x)^4/135."""
    y = 2 * abs(x)
    if y < SMALL_X:
        return y ** 4 / 135 - 2 * y ** 6 / 4725
    si = _si_series(y) if y <= 4 else math.pi / 2 - sine_tail(y)
    return 1 - _sinc(y) ** 2 + _dsinc(y) * si


def f2_general_beta(x: float, beta: float) -> float:
    """sqrt(pi/2) x^{-nu} J_nu(x) with nu = 2/beta - 1/2.

    For half-integer nu = n + 1/2 the factor (-1)^n is applied, so that beta = 1
    gives (1/x) d/dx (sin x / x) and beta = 2 gives sin x / x. Other orders
    (e.g. beta = 4, nu = 0) carry no sign and use scipy's J_nu.
    """
    if not x > 0:
        raise ValueError("f2_general_beta requires x > 0")
    if not beta > 0:
        raise ValueError("beta must be positive")
    nu = 2.0 / beta - 0.5
    n = round(nu - 0.5)
    if abs(nu - 0.5 - n) < 1e-12 and n >= 0:
        j = bessel_j_half(n, x) if n <= 8 else float(special.jv(nu, x))
        return (-1) ** n * math.sqrt(math.pi / 2) * x ** -nu * j
    return math.sqrt(math.pi / 2) * x ** -nu * float(special.jv(nu, x))


# ------------------------------------------------------------------ Airy edge


def _airy_coincident(m: float) -> tuple[float, float, float, float]:
    """Diagonal value and e^2, e^4, e^6 coefficients of K(m + e, m - e)."""
    f, g, _ = airy_ai(m)
    ff, fg, gg = f * f, f * g, g * g
    k0 = gg - m * ff
    c2 = -(2 * ff * m ** 2 - fg - 2 * gg * m) / 3
    c4 = -(8 * ff * m ** 3 - 3 * ff - 4 * fg * m - 8 * gg * m ** 2) / 60
    c6 = -(16 * ff * m ** 4 - 21 * ff * m - 8 * fg * m ** 2 - 16 * gg * m ** 3 + 15 * gg) / 1260
    return k0, c2, c4, c6


def airy_kernel(x1: float, x2: float) -> float:
    """[Ai(x1) Ai'(x2) - Ai'(x1) Ai(x2)] / (x1 - x2), diagonal Ai'(x)^2 - x Ai(x)^2."""
    d = x1 - x2
    if abs(d) < AIRY_COINCIDENT:
        k0, c2, c4, c6 = _airy_coincident(0.5 * (x1 + x2))
        e2 = (d / 2) ** 2
        return k0 + e2 * (c2 + e2 * (c4 + e2 * c6))
    a1, d1, _ = airy_ai(x1)
    a2, d2, _ = airy_ai(x2)
    return (a1 * d2 - d1 * a2) / d


def _edge_pieces(x1: float, x2: float):
    a1, d1, s1 = airy_ai(x1)
    a2, d2, s2 = airy_ai(x2)
    bracket = s1 * a2 - 2 * d1 * d2 + a1 * s2
    kernel = (a1 * d2 - d1 * a2) / (x1 - x2)
    return bracket, kernel


def airy_edge_f(x1: float, x2: float) -> float:
    """(1/(x1 - x2)) (d/dx1 - d/dx2) K_Ai(x1, x2), symmetric in its arguments.

    Differentiating the kernel gives
        -[Ai''(x1)Ai(x2) - 2 Ai'(x1)Ai'(x2) + Ai(x1)Ai''(x2) + 2 K_Ai] / (x1 - x2)^2,
    with Ai'' = x Ai. The diagonal value is int_x^inf (u Ai^2 - Ai'^2) du.
    """
    d = x1 - x2
    if abs(d) < AIRY_COINCIDENT:
        _, c2, c4, c6 = _airy_coincident(0.5 * (x1 + x2))
        e2 = (d / 2) ** 2
        return c2 + e2 * (2 * c4 + 3 * e2 * c6)
    bracket, kernel = _edge_pieces(x1, x2)
    return -(bracket + 2 * kernel) / (d * d)


def airy_edge_f_bracket(x1: float, x2: float) -> tuple[float, float]:
    """The two pieces of the edge function: the Airy second-derivative bracket
    over (x1 - x2)^2 and the kernel term 2 K_Ai / (x1 - x2)^2. airy_edge_f is
    minus their sum; the bracket alone does not reproduce it."""
    d = x1 - x2
    if d == 0:
        raise ValueError("the separate pieces are singular at x1 = x2")
    bracket, kernel = _edge_pieces(x1, x2)
    return bracket / (d * d), 2 * kernel / (d * d)


def airy_edge_f_numeric(x1: float, x2: float, h: float = 2e-3) -> float:
    """The edge function from finite differences of airy_kernel.

    (d/dx1 - d/dx2) K is taken along the anti-diagonal with a Richardson-
    extrapolated central difference. At x1 = x2 the limit is half the second
    anti-diagonal derivative.
    """
    m, e = 0.5 * (x1 + x2), 0.5 * (x1 - x2)

    def k(t):
        return airy_kernel(m + t, m - t)

    if e == 0:
        k0 = k(0.0)
        s1 = (k(h) - 2 * k0 + k(-h)) / (h * h)
        s2 = (k(2 * h) - 2 * k0 + k(-2 * h)) / (4 * h * h)
        return 0.5 * (4 * s1 - s2) / 3
    g1 = (k(e + h) - k(e - h)) / (2 * h)
    g2 = (k(e + 2 * h) - k(e - 2 * h)) / (4 * h)
    return (4 * g1 - g2) / 3 / (2 * e)
