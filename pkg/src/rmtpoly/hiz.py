"""Heat-kernel asymptotic series for HIZ integrals with general beta and k.

After the Vandermonde half-power is removed, the degenerate heat-kernel
function g(x) in the scaling variable x obeys

    g'' + (1 - (k-1)/x) g' + gamma/x^2 g = 0,   gamma = k^2 beta (2-beta)/4.

Inserting g = sum_p c_p x^{-p} gives

    c_{p+1} = [p(p+k) + gamma] c_p / (p+1),   c_0 = 1,

equivalently c_p = prod_{j<p} (beta k + 2j)((2-beta) k + 2j) / (4^p p!).
All coefficient arithmetic below is exact (fractions.Fraction).
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import mpmath
import numpy as np

from .specfun import sine_tail


@dataclass(frozen=True)
class HizParams:
    beta: Fraction
    k: int
    gamma: Fraction = field(init=False)

    def __post_init__(self):
        beta = Fraction(self.beta)
        if beta <= 0:
            raise ValueError("beta must be positive")
        if int(self.k) != self.k or self.k < 1:
            raise ValueError("k must be a positive integer")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "gamma", Fraction(self.k * self.k) * beta * (2 - beta) / 4)


@dataclass(frozen=True)
class HizSeries:
    params: HizParams
    coefficients: tuple[Fraction, ...]
    terminated: bool

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def evaluate(self, x: float) -> float:
        return float(sum(float(c) * x ** -p for p, c in enumerate(self.coefficients)))

    def to_json(self) -> str:
        return json.dumps(
            {
                "beta": [self.params.beta.numerator, self.params.beta.denominator],
                "k": self.params.k,
                "coefficients": [[c.numerator, c.denominator] for c in self.coefficients],
                "terminated": self.terminated,
            }
        )


def _make_series(params: HizParams, coeffs: list[Fraction]) -> HizSeries:
    terminated = any(c == 0 for c in coeffs[1:])
    if terminated:
        first = next(p for p in range(1, len(coeffs)) if coeffs[p] == 0)
        assert all(c == 0 for c in coeffs[first:])
    return HizSeries(params, tuple(coeffs), terminated)


def series_by_recursion(params: HizParams, order: int) -> HizSeries:
    if order < 0:
        raise ValueError("order must be nonnegative")
    coeffs = [Fraction(1)]
    for p in range(order):
        coeffs.append((p * (p + params.k) + params.gamma) * coeffs[p] / (p + 1))
    return _make_series(params, coeffs)


def series_closed_form(params: HizParams, order: int) -> HizSeries:
    if order < 0:
        raise ValueError("order must be nonnegative")
    b, k = params.beta, params.k
    coeffs = []
    for p in range(order + 1):
        num = Fraction(1)
        for j in range(p):
            num *= (b * k + 2 * j) * ((2 - b) * k + 2 * j)
        coeffs.append(num / (4 ** p * math.factorial(p)))
    return _make_series(params, coeffs)


def ode_residual(series: HizSeries, x: Fraction) -> Fraction:
    """Apply g'' + (1 - (k-1)/x) g' + gamma g / x^2 to the partial sum, exactly.

    Telescoping leaves the single term (P+1) c_{P+1} x^{-P-2}.
    """
    x = Fraction(x)
    if x <= 0:
        raise ValueError("x must be positive")
    k, gam = series.params.k, series.params.gamma
    g = sum(c * x ** -p for p, c in enumerate(series.coefficients))
    dg = sum(-p * c * x ** (-p - 1) for p, c in enumerate(series.coefficients))
    d2g = sum(p * (p + 1) * c * x ** (-p - 2) for p, c in enumerate(series.coefficients))
    return d2g + (1 - Fraction(k - 1) / x) * dg + gam / (x * x) * g


def next_coefficient(series: HizSeries) -> Fraction:
    P = series.order
    return (P * (P + series.params.k) + series.params.gamma) * series.coefficients[P] / (P + 1)


# ------------------------------------------------------- zero-replica limit


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def closed_form_polynomial_in_k(beta: Fraction, p: int) -> list[Fraction]:
    """c_p as a polynomial in k (ascending coefficients), from the product formula."""
    beta = Fraction(beta)
    poly = [Fraction(1)]
    for j in range(p):
        poly = _poly_mul(poly, [Fraction(2 * j), beta])
        poly = _poly_mul(poly, [Fraction(2 * j), 2 - beta])
    scale = Fraction(1, 4 ** p * math.factorial(p))
    return [c * scale for c in poly]


def replica_limit_coefficient(p: int, beta: Fraction = Fraction(1)) -> Fraction:
    """lim_{k->0} c_p(k) / k^2, i.e. the k^2 coefficient of c_p (beta = 1: (p-1)!/(4p))."""
    if p < 1:
        raise ValueError("p must be >= 1")
    poly = closed_form_polynomial_in_k(beta, p)
    if any(c != 0 for c in poly[:2]):
        raise ValueError("c_p does not vanish to second order in k for this beta")
    return poly[2]


# ------------------------------------------------------ sine-tail check


def asymptotic_vs_sine_tail(x: float, order: int) -> tuple[float, float, float]:
    """Compare Re[(e^{ix}/x) g(ix)] built from the beta=1, k=2 series with int_x^inf sin z/z dz.

    Uses c_0 .. c_{order-1}, i.e. `order` terms of the series.
    """
    if x < 5:
        raise ValueError("asymptotic regime requires x >= 5")
    if order > x:
        warnings.warn(f"order {order} exceeds the optimal truncation index ~{x:.0f}", RuntimeWarning)
    coeffs = series_by_recursion(HizParams(Fraction(1), 2), max(order - 1, 0)).coefficients[:order]
    z = complex(0, x)
    g = sum(float(c) * z ** -p for p, c in enumerate(coeffs))
    series_value = (np.exp(1j * x) / x * g).real
    integral = sine_tail(x)
    return series_value, integral, abs(series_value - integral)


# ------------------------------------------------------------ gamma_k^(p)


@dataclass(frozen=True)
class GammaKp:
    """Exact value of gamma_k^(p), or a flagged pole.

    For even p the phase (-i)^p = (-1)^{p/2} is real, so `value` is a Fraction.
    `regularized` is set when cancelling Gamma poles were resolved by
    continuation in p.
    """

    k: int
    p: int
    value: Fraction | None
    pole: bool = False
    regularized: bool = False


def _gamma_ratio(num: Sequence[tuple[Fraction, Fraction]], den: Sequence[tuple[Fraction, Fraction]]):
    """Exact prod Gamma(num) / prod Gamma(den) at integer arguments.

    Each argument is (value, slope) along the continuation direction. A
    Gamma at -n contributes (-1)^n / (n! * slope * t) as t -> 0. Returns
    (value, net pole order, regularized flag); value is None for a pole.
    """
    val, order, reg = Fraction(1), 0, False
    for args, sgn in ((num, 1), (den, -1)):
        for a, slope in args:
            if a.denominator != 1:
                raise ValueError("half-integer Gamma arguments do not occur for even p")
            a = int(a)
            if a > 0:
                g = Fraction(math.factorial(a - 1))
            else:
                if slope == 0:
                    raise ValueError("Gamma pole with no continuation direction")
                n = -a
                g = Fraction((-1) ** n, math.factorial(n)) / slope
                order += sgn
                reg = True
            val = val * g if sgn > 0 else val / g
    if order > 0:
        return None, order, reg
    if order < 0:
        return Fraction(0), order, reg
    return val, 0, reg


def _kp_gamma_args(k, p, dk, dp):
    half = Fraction(1, 2)
    num = [(2 - p * half, -dp * half), (k + p * half, dk + dp * half), (2 * k - p, 2 * dk - dp)]
    den = [
        (2 * k + p, 2 * dk + dp),
        (1 + p * half, dp * half),
        (k - p * half, dk - dp * half),
        (3 - p, -dp),
    ]
    return [(Fraction(a), Fraction(s)) for a, s in num], [(Fraction(a), Fraction(s)) for a, s in den]


def barnes_product(k: int) -> Fraction:
    """prod_{l<k} l!/(k+l)!."""
    out = Fraction(1)
    for l in range(k):
        out *= Fraction(math.factorial(l), math.factorial(k + l))
    return out


def gamma_kp(k: int, p: int) -> GammaKp:
    """Gamma-function form of gamma_k^(p), exact.

    Poles that cancel between numerator and denominator Gammas are resolved
    by continuing in p; a surviving pole is flagged instead of evaluated.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    if p < 0 or p % 2:
        raise ValueError("p must be a nonnegative even integer")
    num, den = _kp_gamma_args(k, p, 0, 1)
    ratio, order, reg = _gamma_ratio(num, den)
    if ratio is None:
        return GammaKp(k, p, None, pole=True, regularized=reg)
    phase = (-1) ** (p // 2)
    return GammaKp(k, p, phase * barnes_product(k) * 2 * ratio, regularized=reg)


def gamma_kp_product_form(k: int, p: int) -> Fraction:
    """The finite-product expression
    (-i)^p prod l!/(k+l)! (2+p)(4+p)...(2k-2+p) (p-3)(p-5)...(p-(2k-1)) / (2k-1+p)!.
    """
    if p < 0 or p % 2:
        raise ValueError("p must be a nonnegative even integer")
    num = 1
    for j in range(1, k):
        num *= (2 * j + p) * (p - (2 * j + 1))
    return (-1) ** (p // 2) * barnes_product(k) * Fraction(num, math.factorial(2 * k - 1 + p))


def compare_gamma_forms(k_max: int = 4, p_max: int = 8) -> list[tuple[int, int, Fraction | None, Fraction]]:
    """(k, p, gamma form, product form) for every case where the two differ."""
    out = []
    for k in range(1, k_max + 1):
        for p in range(0, p_max + 1, 2):
            g = gamma_kp(k, p).value
            m = gamma_kp_product_form(k, p)
            if g != m:
                out.append((k, p, g, m))
    return out


def gamma_kp_zero_replica_limit(p: int) -> Fraction:
    """k -> 0 limit of the Gamma form, continued jointly in (k, p).

    The Barnes product tends to 1; the remaining Gamma ratio is finite.
    Equals (-i)^p / ((1-p) p!) for even p.
    """
    if p < 0 or p % 2:
        raise ValueError("p must be a nonnegative even integer")
    num, den = _kp_gamma_args(0, p, 1, Fraction(1, 7))
    ratio, order, _ = _gamma_ratio(num, den)
    if ratio is None:
        raise ArithmeticError("unexpected pole in the zero-replica limit")
    return (-1) ** (p // 2) * 2 * ratio


def barnes_product_continued(k: float) -> float:
    """G(k+1)^2 / G(2k+1): the analytic continuation of prod_{l<k} l!/(k+l)!."""
    return float(mpmath.barnesg(k + 1) ** 2 / mpmath.barnesg(2 * k + 1))


def barnes_k2_coefficient(k_small: float = 1e-5) -> float:
    """Estimate of the k^2 coefficient of G(k+1)^2/G(2k+1) near k = 0.

    Richardson-combines the quotients (f(k) - 1)/k^2 at k and k/2 to remove
    the O(k) correction. Tends to 1 + Euler's constant.
    """
    with mpmath.workdps(40):
        def q(k):
            k = mpmath.mpf(k)
            return (mpmath.barnesg(k + 1) ** 2 / mpmath.barnesg(2 * k + 1) - 1) / k ** 2

        return float(2 * q(k_small / 2) - q(k_small))


# ------------------------------------------------- multivariate residual


# A monomial c * prod_(a<b) (u_a - u_b)^(-e_ab) over the four u's (0-based).
_Mono = tuple[Fraction, tuple[tuple[int, int, int], ...]]

_CROSS = [(0, 2), (0, 3), (1, 2), (1, 3)]


def _g_terms(order: int) -> list[list[_Mono]]:
    """Coefficient functions g_n (without the (mu-mu')^{-n} factor) for n <= order."""
    g0 = [(Fraction(1), ())]
    g1 = [(Fraction(1, 4), ((a, b, 1),)) for a, b in _CROSS]
    g2 = [(Fraction(9, 32), ((a, b, 2),)) for a, b in _CROSS]
    g2 += [(Fraction(1, 16), ((0, 2, 1), (1, 3, 1))), (Fraction(1, 16), ((0, 3, 1), (1, 2, 1)))]
    g2 += [
        (Fraction(3, 16), ((0, 2, 1), (0, 3, 1))),
        (Fraction(3, 16), ((0, 2, 1), (1, 2, 1))),
        (Fraction(3, 16), ((0, 3, 1), (1, 3, 1))),
        (Fraction(3, 16), ((1, 2, 1), (1, 3, 1))),
    ]
    return [g0, g1, g2][: order + 1]


def _mono_value(m: _Mono, u: np.ndarray) -> float:
    c, factors = m
    v = float(c)
    for a, b, e in factors:
        v /= (u[a] - u[b]) ** e
    return v


def _mono_diff(m: _Mono, i: int) -> list[_Mono]:
    c, factors = m
    out = []
    for idx, (a, b, e) in enumerate(factors):
        sgn = (a == i) - (b == i)
        if sgn:
            rest = list(factors)
            rest[idx] = (a, b, e + 1)
            out.append((c * (-e) * sgn, tuple(rest)))
    return out


def _eval(monos: list[_Mono], u: np.ndarray) -> float:
    return sum(_mono_value(m, u) for m in monos)


def _diff(monos: list[_Mono], i: int) -> list[_Mono]:
    return [d for m in monos for d in _mono_diff(m, i)]


@dataclass(frozen=True)
class ResidualReport:
    residual: float
    largest_term: float
    ratio: float
    terms: tuple[float, ...]


def degenerate_operator(g: list[list[_Mono]], n_value: float, u, mu: float, mu_p: float) -> float:
    """The k=2 degenerate heat-kernel operator applied to sum_n g_n / (N (mu-mu'))^n."""
    u = np.asarray(u, dtype=float)
    d = mu - mu_p
    total = 0.0
    for n, gn in enumerate(g):
        w = 1.0 / (n_value * d) ** n
        first = [_eval(_diff(gn, i), u) for i in range(4)]
        second = [_eval(_diff(_diff(gn, i), i), u) for i in range(4)]
        val = _eval(gn, u)
        r = 2 * n_value * mu * (first[0] + first[1]) + 2 * n_value * mu_p * (first[2] + first[3])
        r += sum(second)
        r += (first[0] - first[1]) / (u[0] - u[1]) + (first[2] - first[3]) / (u[2] - u[3])
        r += 0.5 * sum(1.0 / (u[a] - u[b]) ** 2 for a, b in _CROSS) * val
        total += w * r
    return total


def multivariate_residual_check(order: int, n_value: float, point: Sequence[float]) -> ResidualReport:
    """|operator(g truncated)| / |largest retained term| at (u1..u4, mu, mu').

    order 0 applies the operator to g = 1, leaving the potential term alone.
    """
    if order not in (0, 1, 2):
        raise ValueError("order must be 0, 1 or 2")
    *u, mu, mu_p = (float(v) for v in point)
    if len(u) != 4:
        raise ValueError("point is (u1, u2, u3, u4, mu, mu')")
    if any(u[a] == u[b] for a, b in combinations(range(4), 2)):
        raise ValueError("coincident u values")
    if mu == mu_p:
        raise ValueError("mu and mu' must differ")
    g = _g_terms(order)
    ua = np.asarray(u)
    terms = tuple(_eval(gn, ua) / (n_value * (mu - mu_p)) ** n for n, gn in enumerate(g))
    res = degenerate_operator(g, n_value, ua, mu, mu_p)
    largest = max(abs(t) for t in terms)
    return ResidualReport(res, largest, abs(res) / largest, terms)
