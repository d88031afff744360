"""The acceptance suite: fourteen numbered checks with fixed tolerances.

Each check returns a CriterionResult; nothing here raises on failure, so a
runner can print a complete table. Monte Carlo checks use fixed seeds.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    tolerance: str
    seconds: float

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.number:2d} {self.name}: {self.detail} (tolerance: {self.tolerance}; {self.seconds:.1f}s)"


def _timed(number: int, name: str, tolerance: str, fn: Callable[[], tuple[bool, str]]) -> CriterionResult:
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failure, reported like one
        ok, detail = False, f"error {type(exc).__name__}: {exc}"
    return CriterionResult(number, name, bool(ok), detail, tolerance, time.perf_counter() - t0)


# --------------------------------------------------------------- exact


def c1_hiz_coefficients() -> CriterionResult:
    from .hiz import HizParams, series_by_recursion

    def run():
        t0 = time.perf_counter()
        checks = []
        s = series_by_recursion(HizParams(Fraction(1), 1), 2).coefficients
        checks.append(s[1] == Fraction(1, 4) and s[2] == Fraction(9, 32))
        s = series_by_recursion(HizParams(Fraction(1), 2), 12).coefficients
        checks.append(all(c == math.factorial(p) for p, c in enumerate(s)))
        for k in range(1, 7):
            s = series_by_recursion(HizParams(Fraction(2), k), 12).coefficients
            checks.append(s[0] == 1 and all(c == 0 for c in s[1:]))
        s = series_by_recursion(HizParams(Fraction(4), 1), 10)
        checks.append(s.coefficients[1] != 0 and all(c == 0 for c in s.coefficients[2:]))
        s = series_by_recursion(HizParams(Fraction(4), 2), 10)
        checks.append(s.coefficients[2] != 0 and all(c == 0 for c in s.coefficients[3:]))
        dt = time.perf_counter() - t0
        return all(checks) and dt < 1, f"{sum(checks)}/{len(checks)} exact checks, {dt:.3f}s"

    return _timed(1, "HIZ coefficient gate", "exact, < 1 s", run)


def c2_closed_form() -> CriterionResult:
    from .hiz import HizParams, series_by_recursion, series_closed_form

    def run():
        t0 = time.perf_counter()
        bad = [
            (b, k)
            for b in (1, 2, 4)
            for k in range(1, 7)
            if series_closed_form(HizParams(Fraction(b), k), 20).coefficients
            != series_by_recursion(HizParams(Fraction(b), k), 20).coefficients
        ]
        dt = time.perf_counter() - t0
        return not bad and dt < 5, f"mismatches {bad}, {dt:.3f}s"

    return _timed(2, "closed form = recursion", "exact, < 5 s", run)


def c3_replica_limit() -> CriterionResult:
    from .hiz import replica_limit_coefficient

    def run():
        bad = [p for p in range(1, 13) if replica_limit_coefficient(p) != Fraction(math.factorial(p - 1), 4 * p)]
        return not bad, f"p = 1..12, mismatches {bad}"

    return _timed(3, "replica limit c_p/k^2", "exact", run)


def c4_bessel_consistency() -> CriterionResult:
    from .hiz import HizParams, series_by_recursion
    from .specfun import I0_ASYMPTOTIC_COEFFS

    def run():
        c = series_by_recursion(HizParams(Fraction(1), 1), 3).coefficients
        mapped = [cp / 2 ** p for p, cp in enumerate(c)]
        return mapped == list(I0_ASYMPTOTIC_COEFFS), f"c_p / 2^p = {[str(m) for m in mapped]}"

    return _timed(4, "Bessel I0 consistency", "exact, p <= 3", run)


# ------------------------------------------------------------ finite N


def c5_oracle_chain(samples: int = 100_000) -> CriterionResult:
    from .ensembles import EnsembleSpec, mc_ratio
    from .exactfn import gue_ratio, gue_ratio_im, gue_ratio_limit, goe_im_f2, goe_ratio_quadrature

    def run():
        t0 = time.perf_counter()
        lam, mu, eps = 0.3, 0.5, 0.1
        parts, ok = [], True
        for n in (2, 4):
            est = mc_ratio(EnsembleSpec(2, n), lam, complex(mu, eps), samples, seed=100 + n)
            exact_eps = gue_ratio(lam, complex(mu, eps), n)
            z = abs(est.mean.imag - exact_eps.imag) / est.std_error_im
            lim_gap = abs(gue_ratio_limit(lam, mu, n).imag - gue_ratio_im(lam, mu, n))
            ok &= est.within(exact_eps, 3.0) and lim_gap < 1e-8
            parts.append(f"N={n}: MC-exact {z:.2f} sigma, |Im limit - closed| {lim_gap:.1e}")
        goe_gap = abs(goe_ratio_quadrature(lam, complex(mu, 1e-6), 2).imag - goe_im_f2(lam, mu))
        ok &= goe_gap < 1e-5
        parts.append(f"GOE N=2 |Im F - f2| {goe_gap:.1e}")
        dt = time.perf_counter() - t0
        return ok and dt < 120, "; ".join(parts) + f", {dt:.1f}s"

    return _timed(5, "finite-N oracle chain", "3 std_error; 1e-5; < 2 min", run)


# ---------------------------------------------------------- Monte Carlo


def c6_semicircle() -> CriterionResult:
    from .ensembles import EnsembleSpec, empirical_density, sample_spectra

    def run():
        eigs = sample_spectra(EnsembleSpec(1, 200), 200, seed=11)
        x, d = empirical_density(eigs, 40, (-1.2, 1.2))
        dev = float(np.max(np.abs(d - np.sqrt(2 - x * x) / math.pi)))
        return dev < 0.02, f"sup deviation {dev:.4f}"

    return _timed(6, "GOE semicircle", "0.02", run)


def c7_gse_density() -> CriterionResult:
    from .ensembles import EnsembleSpec, empirical_density, sample_spectra

    def run():
        eigs = sample_spectra(EnsembleSpec(4, 100), 200, seed=12)
        _, d = empirical_density(eigs, 20, (-0.2, 0.2), beta=4)
        rho0 = float(d.mean())
        return abs(rho0 - 1 / math.pi) < 0.02, f"rho(0) = {rho0:.4f} vs 1/pi = {1 / math.pi:.4f}"

    return _timed(7, "GSE density at 0", "0.02", run)


def c8_two_point(samples: int = 2000) -> CriterionResult:
    from .ensembles import EnsembleSpec, mc_two_point
    from .kernels import rho2_goe, rho2_gue
    from .source import SourceProfile

    def run():
        args = dict(center=0.0, window=0.8, bins=26, n_samples=samples)
        gue = mc_two_point(EnsembleSpec(2, 200), seed=13, **args)
        m = (gue.x >= 0.5) & (gue.x <= 6)
        d2 = float(np.max(np.abs(gue.ratio - rho2_gue(gue.x))[m]))
        # weight_scale 1/2 puts the GOE edge at 2 like the GUE and the source convention
        goe = mc_two_point(EnsembleSpec(1, 200, 0.5), seed=14, **args)
        d1 = float(np.max(np.abs(goe.ratio - rho2_goe(goe.x))[m]))
        src = SourceProfile.two_atom(0.3 * 0.5)  # mean shift +-0.3 at weight_scale 1/2
        shifted = mc_two_point(EnsembleSpec(1, 200, 0.5, src), seed=14, **args)
        ds = float(np.max(np.abs(shifted.ratio - goe.ratio)[m]))
        ok = d2 < 0.05 and d1 < 0.07 and ds < 0.05
        return ok, f"GUE {d2:.4f}, GOE {d1:.4f}, source change {ds:.4f}"

    return _timed(8, "bulk two-point universality", "0.05 / 0.07 / 0.05", run)


# ------------------------------------------------------------- spacing


def c9_spacing() -> CriterionResult:
    from .spacing import e_gse, e_gue_ode, fit_cubic_coefficient, fredholm_e_gue

    def run():
        e01 = fredholm_e_gue(0.1)
        gap = max(abs(e_gue_ode(s) - fredholm_e_gue(s)) for s in np.linspace(0.1, 2.5, 25))
        a_unit = fit_cubic_coefficient("goe", "unit")
        a_piless = fit_cubic_coefficient("goe", "piless")
        g01 = e_gse(0.1)
        ok = (
            abs(e01 - 0.9) < 5e-4
            and gap < 1e-6
            and abs(a_unit / (math.pi ** 2 / 36) - 1) < 0.02
            and abs(a_piless * 36 - 1) < 0.02
            and abs(g01 - 0.9) < 1e-3
        )
        return ok, (
            f"E_GUE(0.1) = {e01:.6f}, ODE-Nystrom {gap:.1e}, GOE a3 = {a_unit:.5f} (pi^2/36 = "
            f"{math.pi ** 2 / 36:.5f}), piless a3 = {a_piless:.5f} (1/36 = {1 / 36:.5f}), E_GSE(0.1) = {g01:.6f}"
        )

    return _timed(9, "level spacing", "5e-4 / 1e-6 / 2% / 2% / 1e-3", run)


def c10_sine_tail() -> CriterionResult:
    from .hiz import asymptotic_vs_sine_tail

    def run():
        series, integral, diff = asymptotic_vs_sine_tail(10.0, 8)
        return diff < 1e-3, f"series {series:.8f}, integral {integral:.8f}, |diff| {diff:.2e}"

    return _timed(10, "asymptotic series vs sine tail", "1e-3", run)


def c11_airy_identity() -> CriterionResult:
    from .kernels import airy_edge_f, airy_edge_f_numeric
    from .specfun import airy_ai

    def run():
        grid = np.linspace(-3, 3, 7)
        gap = max(abs(airy_edge_f(a, b) - airy_edge_f_numeric(a, b)) for a in grid for b in grid)
        ode = max(abs(airy_ai(x)[2] - x * airy_ai(x)[0]) for x in grid)
        return gap < 1e-8 and ode == 0, f"max representation gap {gap:.2e}, ODE residual {ode}"

    return _timed(11, "Airy edge identity", "1e-8", run)


def c12_pastur() -> CriterionResult:
    from .source import SourceProfile, gap_scan, mc_validate, pastur_density, two_atom_critical_a

    def run():
        rho0 = float(pastur_density(SourceProfile.zero(), [0.0], 1e-8)[0])
        devs = {beta: mc_validate(SourceProfile.two_atom(0.5), 300, 200, beta=beta, seed=5) for beta in (1, 2)}
        scan = gap_scan(np.linspace(0, 2, 21))
        oracle = two_atom_critical_a()
        ok = abs(rho0 - 1 / math.pi) < 1e-6 and all(d < 0.04 for d in devs.values())
        ok = ok and scan.critical_a is not None and abs(scan.critical_a - oracle) < 1e-4
        return ok, (
            f"|rho(0) - 1/pi| {abs(rho0 - 1 / math.pi):.1e}, MC sup beta=1 {devs[1]:.4f}, "
            f"beta=2 {devs[2]:.4f}, critical a {scan.critical_a:.6f} vs {oracle:.6f}"
        )

    return _timed(12, "Pastur density and gap", "1e-6 / 0.04 / 1e-4", run)


def c13_general_beta() -> CriterionResult:
    from .kernels import f2_general_beta

    def run():
        xs = np.linspace(0.1, 40, 400)
        e1 = max(abs(f2_general_beta(x, 1) - (x * math.cos(x) - math.sin(x)) / x ** 3) for x in xs)
        e2 = max(abs(f2_general_beta(x, 2) - math.sin(x) / x) for x in xs)
        return max(e1, e2) < 1e-12, f"beta=1 {e1:.1e}, beta=2 {e2:.1e}"

    return _timed(13, "general beta Bessel form", "1e-12", run)


RESIDUAL_POINT = (1.3, 0.9, -0.4, -1.2, 0.5, 0.2)


def c14_multivariate_residual() -> CriterionResult:
    from .hiz import multivariate_residual_check

    def run():
        r100 = multivariate_residual_check(2, 100, RESIDUAL_POINT).ratio
        r200 = multivariate_residual_check(2, 200, RESIDUAL_POINT).ratio
        q = r200 / r100
        return abs(q - 0.5) <= 0.1, f"ratio(200)/ratio(100) = {q:.4f} (residual {r100:.3e} -> {r200:.3e})"

    return _timed(14, "order-2 residual halves with N", "0.5 +- 20%", run)


CRITERIA = {
    1: c1_hiz_coefficients,
    2: c2_closed_form,
    3: c3_replica_limit,
    4: c4_bessel_consistency,
    5: c5_oracle_chain,
    6: c6_semicircle,
    7: c7_gse_density,
    8: c8_two_point,
    9: c9_spacing,
    10: c10_sine_tail,
    11: c11_airy_identity,
    12: c12_pastur,
    13: c13_general_beta,
    14: c14_multivariate_residual,
}


def run_all(only=None, echo=None) -> list[CriterionResult]:
    results = []
    for number, fn in CRITERIA.items():
        if only and number not in only:
            continue
        res = fn()
        if echo is not None:
            echo(res.line())
        results.append(res)
    return results
