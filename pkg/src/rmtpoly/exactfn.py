"""Exact finite-N averages of characteristic polynomials.

Scalings: GUE uses lam_bar = lam * sqrt(N/2), GOE uses lam_bar = lam * sqrt(N),
both for the measure exp(-(N/2) Tr X^2).

The one-dimensional b-integrals have a pole at b = mu_bar. Rather than
evaluating just above the real axis and extrapolating in eps, the b contour
is moved to Im b = -delta. This is exact for any Im mu > -delta, so the
eps -> 0+ boundary values (the `*_limit` functions) come out directly.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy import integrate, special

from .specfun import hermite_h, hermite_phi, incomplete_gaussian_b

CONTOUR_SHIFT = 0.7


def _cquad(f, a: float, b: float, epsabs: float = 1e-13, epsrel: float = 1e-12, limit: int = 400) -> complex:
    # a vanishing real or imaginary part makes quad report roundoff; harmless here
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        re = integrate.quad(lambda t: f(t).real, a, b, epsabs=epsabs, epsrel=epsrel, limit=limit)[0]
        im = integrate.quad(lambda t: f(t).imag, a, b, epsabs=epsabs, epsrel=epsrel, limit=limit)[0]
    return complex(re, im)


def _line_integral(f, n: int, scale: float = 1.0, delta: float = CONTOUR_SHIFT) -> complex:
    """int f(b) db along Im b = -delta; f carries a Gaussian exp(-scale b^2)."""
    half = (8.0 + 2.0 * math.sqrt(n)) / math.sqrt(scale)
    return _cquad(lambda t: f(complex(t, -delta)), -half, half)


def _require_upper(mu: complex):
    if not complex(mu).imag > 0:
        raise ValueError("mu must have a strictly positive imaginary part")


# ------------------------------------------------------------------ GUE


def _gue(lam: float, mu: complex, n: int) -> complex:
    s = math.sqrt(n / 2)
    lb, mb = lam * s, complex(mu) * s
    hn, hn1 = hermite_h(n, lb), hermite_h(n - 1, lb)

    def f(b):
        return np.exp(-b * b) / (mb - b) * (hn * hermite_h(n - 1, b) - hn1 * hermite_h(n, b))

    norm = 2.0 ** n * math.sqrt(math.pi) * math.factorial(n - 1)
    return _line_integral(f, n) / norm


def gue_ratio(lam: float, mu: complex, n: int) -> complex:
    """<det(lam - X)/det(mu - X)> over the N x N GUE, Im mu > 0."""
    _require_upper(mu)
    return _gue(lam, mu, n)


def gue_ratio_limit(lam: float, mu: float, n: int) -> complex:
    """Boundary value of gue_ratio at mu + i0."""
    return _gue(lam, complex(mu, 0.0), n)


def gue_ratio_im(lam: float, mu: float, n: int) -> float:
    """Im F_N(lam, mu + i0) in closed form."""
    s = math.sqrt(n / 2)
    lb, mb = lam * s, mu * s
    bracket = hermite_h(n, lb) * hermite_h(n - 1, mb) - hermite_h(n - 1, lb) * hermite_h(n, mb)
    return -math.sqrt(math.pi) / (2.0 ** n * math.factorial(n - 1)) * math.exp(-mb * mb) * bracket


def gue_density(lam: float, n: int) -> float:
    """Finite-N GUE density (1/N) <sum delta(lam - x_i)> from the Hermite kernel."""
    s = math.sqrt(n / 2)
    x = lam * s
    return s / n * sum(hermite_phi(i, x) ** 2 for i in range(n))


def density_from_im_ratio(im_f, lam: float, n: int, h: float = 1e-4) -> float:
    """rho(lam) = (1/(pi N)) d/dmu Im F(lam, mu + i0) at mu = lam, by central difference."""
    return (im_f(lam, lam + h, n) - im_f(lam, lam - h, n)) / (2 * h) / (math.pi * n)


# ------------------------------------------------------------------ GOE


def _rho_integral(c: complex, m: int) -> complex:
    """int_0^inf e^{-rho} (c - rho)^{-m} d rho for c off [0, inf).

    I_1 = -e^{-c} E1(-c) and I_m = (I_{m-1} - c^{1-m}) / (m - 1).
    """
    val = -np.exp(-c) * special.exp1(-c)
    for j in range(2, m + 1):
        val = (val - c ** (1 - j)) / (j - 1)
    return val


def _rho_integral_quad(c: complex, m: int) -> complex:
    return _cquad(lambda r: np.exp(-r) * (c - r) ** (-m), 0.0, 60.0)


def _goe(lam: float, mu: complex, n: int, rho_method: str = "closed") -> complex:
    if n % 2:
        raise ValueError("only even N is implemented for the GOE ratio")
    s = math.sqrt(n)
    lb, mb = lam * s, complex(mu) * s
    rho_int = _rho_integral if rho_method == "closed" else _rho_integral_quad
    i1 = _line_integral(lambda b: np.exp(-b * b) / (mb - b) ** n, n) / math.sqrt(math.pi)
    i2 = _line_integral(
        lambda b: np.exp(-b * b) * (lb - 2 * b) * rho_int((mb - b) ** 2, n // 2), n
    ) / math.sqrt(math.pi)
    pref = 1.0 / 2.0 ** (n - 1)
    return -(n - 1) * pref * hermite_h(n - 2, lb) * i1 + pref * hermite_h(n - 1, lb) * i2


def goe_ratio_quadrature(lam: float, mu: complex, n: int, rho_method: str = "closed") -> complex:
    """<det(lam - X)/det(mu - X)> over the N x N GOE (N even), Im mu > 0.

    The inner rho-integral is done in closed form by default; rho_method='quad'
    integrates it numerically instead.
    """
    if n % 2:
        raise ValueError("only even N is implemented for the GOE ratio")
    _require_upper(mu)
    return _goe(lam, mu, n, rho_method)


def goe_ratio_limit(lam: float, mu: float, n: int) -> complex:
    """Boundary value of goe_ratio_quadrature at mu + i0."""
    return _goe(lam, complex(mu, 0.0), n)


def goe_im_f2(lam: float, mu: float) -> float:
    """Im F_2(lam, mu + i0) = sqrt(pi) (mu_b - lam_b) [e^{-mu_b^2} + lam_b B(mu_b)], bars = x sqrt(2)."""
    lb, mb = lam * math.sqrt(2), mu * math.sqrt(2)
    return math.sqrt(math.pi) * (mb - lb) * (math.exp(-mb * mb) + lb * incomplete_gaussian_b(mb))


def goe_im_f4(lam: float, mu: float) -> float:
    """Im F_4(lam, mu + i0) written with Hermite polynomials and B, bars = x * 2.

    sqrt(pi) Im F_4 / pi = (1/16) e^{-m^2} [H2(l)H3(m) - H3(l)H2(m)]
                           + (1/8)(m - l) H3(l) [B(m) - 2 m e^{-m^2}]
    """
    lb, mb = 2.0 * lam, 2.0 * mu
    h = hermite_h
    em = math.exp(-mb * mb)
    t = em / 16 * (h(2, lb) * h(3, mb) - h(3, lb) * h(2, mb))
    t += (mb - lb) / 8 * h(3, lb) * (incomplete_gaussian_b(mb) - 2 * mb * em)
    return math.sqrt(math.pi) * t


def goe_s4_diagonal(y: float) -> float:
    """sqrt(pi) S_4(y, y) = (y^3 - 3y/2) B(y) + (3 y^2 + 3/2) e^{-y^2}."""
    return (y ** 3 - 1.5 * y) * incomplete_gaussian_b(y) + (3 * y * y + 1.5) * math.exp(-y * y)


def _phi_integral(n: int, y: float) -> float:
    return integrate.quad(lambda t: hermite_phi(n, t), 0.0, y, epsabs=1e-14, epsrel=1e-12)[0]


def goe_kernel_sn(x: float, y: float, n: int) -> float:
    """S_N(x, y) = sum_{i<N} phi_i(x) phi_i(y) + sqrt(N/2) phi_{N-1}(x) int_0^y phi_N.

    Arguments are already in the scaled variable (x = lam sqrt(N)).
    """
    if n % 2:
        raise ValueError("S_N is implemented for even N")
    head = sum(hermite_phi(i, x) * hermite_phi(i, y) for i in range(n))
    return head + math.sqrt(n / 2) * hermite_phi(n - 1, x) * _phi_integral(n, y)


def goe_density(lam: float, n: int) -> float:
    """Finite-N GOE density (1/N) <sum delta(lam - x_i)> = S_N(x, x) sqrt(N) / N, x = lam sqrt(N)."""
    x = lam * math.sqrt(n)
    return goe_kernel_sn(x, x, n) * math.sqrt(n) / n


def goe_im_from_kernel(lam: float, mu: float, n: int) -> float:
    """pi (mu_b - lam_b) S_N(lam_b, mu_b) e^{(lam_b^2 - mu_b^2)/2}."""
    s = math.sqrt(n)
    lb, mb = lam * s, mu * s
    return math.pi * (mb - lb) * goe_kernel_sn(lb, mb, n) * math.exp((lb * lb - mb * mb) / 2)


# ------------------------------------------------------------------ GSE


def gse_inverse_moment(mu: complex, n: int) -> complex:
    """<1/det(mu - X')> for N x N GSE, X' the 2N x 2N complex form.

    Equal to sqrt(N/pi) int db e^{-N b^2} (mu - b)^{-2N}, Im mu > 0.
    """
    _require_upper(mu)
    return _gse_inv(mu, n)


def _gse_inv(mu: complex, n: int) -> complex:
    mu = complex(mu)
    val = _line_integral(lambda b: np.exp(-n * b * b) * (mu - b) ** (-2 * n), n, scale=n)
    return math.sqrt(n / math.pi) * val


def gse_inverse_moment_limit(mu: float, n: int) -> complex:
    return _gse_inv(complex(mu, 0.0), n)


def gse_inverse_moment_im(mu: float, n: int) -> float:
    """Im <1/det(mu + i0 - X')> = -sqrt(N/pi) pi N^{N-1/2} H_{2N-1}(m) e^{-m^2} / (2N-1)!, m = mu sqrt(N)."""
    m = mu * math.sqrt(n)
    return (
        -math.sqrt(n / math.pi) * math.pi * n ** (n - 0.5)
        * hermite_h(2 * n - 1, m) * math.exp(-m * m) / math.factorial(2 * n - 1)
    )


def gse_det2_moment(lam: float, n: int) -> float:
    """<det(lam - X')> for the N x N GSE (each eigenvalue counted twice).

    Dual form: the average of [(lam - i t1)(lam - i t2)]^N over the
    eigenvalues t1, t2 of a 2 x 2 real symmetric A drawn from
    exp(-(N/2) tr A^2), i.e. weight |t1 - t2| e^{-N(t1^2 + t2^2)/2}.
    With r = t1 + t2, v = N (t1 - t2)^2 / 4 the weight factorizes into
    Gauss-Hermite (r) and Gauss-Laguerre (v) rules, exact at N + 1 nodes each.
    """
    m = n + 1
    y, wy = np.polynomial.hermite.hermgauss(m)
    v, wv = np.polynomial.laguerre.laggauss(m)
    r = 2.0 * y / math.sqrt(n)
    s2 = 4.0 * v / n
    R, S2 = np.meshgrid(r, s2, indexing="ij")
    W = np.outer(wy, wv)
    prod = lam * lam - (R * R - S2) / 4 - 1j * lam * R
    val = np.sum(W * prod ** n) / np.sum(W)
    return float(val.real)
