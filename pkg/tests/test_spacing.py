import math

import numpy as np
import pytest
import sympy

from rmtpoly.spacing import (
    GridTooCoarseWarning,
    HamiltonianState,
    OrderTooSmallWarning,
    QuadratureRule,
    SpacingCurve,
    SpacingIntegrationError,
    calibrate_argument_map,
    e_goe,
    e_gse,
    e_gue_ode,
    fit_cubic_coefficient,
    fredholm_e,
    fredholm_e_gue,
    fredholm_e_parity,
    series_coefficients,
    series_state,
    spacing_curve,
    spacing_density,
    tw_integrate,
)


def test_quadrature_rule():
    r = QuadratureRule.gauss_legendre(12, -0.5, 2.0)
    assert r.weights.sum() == pytest.approx(2.5)
    assert np.sum(r.weights * r.nodes ** 5) == pytest.approx((2.0 ** 6 - 0.5 ** 6) / 6)
    with pytest.raises(ValueError):
        QuadratureRule(np.array([0.0, 0.5]), np.array([0.5, 0.5]), (0.0, 1.0))
    with pytest.raises(ValueError):
        QuadratureRule(np.array([0.5]), np.array([-1.0]), (0.0, 1.0))


def test_nystrom_small_s():
    assert abs(fredholm_e_gue(0.1) - 0.9) < 5e-4
    assert fredholm_e_gue(1e-4) == pytest.approx(1.0, abs=1e-3)


def test_nystrom_self_convergence():
    for s in np.linspace(0.1, 3.0, 8):
        assert abs(fredholm_e_gue(s, 40) - fredholm_e_gue(s, 80)) < 1e-8
    assert abs(fredholm_e_gue(1.0, 40) - fredholm_e_gue(1.0, 80)) < 1e-9


def test_nystrom_order_flag():
    with pytest.warns(OrderTooSmallWarning):
        fredholm_e_gue(20.0, 10)
    with pytest.raises(ValueError):
        fredholm_e_gue(1.0, 5)


def test_parity_factorization():
    # det(1 - K) on the symmetric interval splits into even and odd parts
    for s in (0.4, 1.3, 2.6):
        assert fredholm_e_parity(s, 1) * fredholm_e_parity(s, -1) == pytest.approx(fredholm_e_gue(s), abs=1e-12)


def test_series_satisfies_odes():
    b, c = sympy.symbols("b c", positive=True)
    p_coef, q_coef = series_coefficients(1.0)
    P = sum(sympy.Rational(x).limit_denominator(1000) * b ** j for j, x in enumerate(p_coef))
    Q = sum(sympy.Rational(x).limit_denominator(1000) * b ** j for j, x in enumerate(q_coef))
    assert P == 1 + 2 * b + sympy.Rational(7, 2) * b ** 2 + sympy.Rational(65, 9) * b ** 3
    s = sympy.Symbol("s")
    assert sympy.expand(P.subs(b, s / 2)) == sympy.expand(1 + s + sympy.Rational(7, 8) * s ** 2 + sympy.Rational(65, 72) * s ** 3)
    assert sympy.expand(Q.subs(b, s / 2)) == sympy.expand(s / 2 - s ** 3 / 48)
    for lhs, rhs in ((sympy.diff(Q, b), P * (1 - 2 * Q ** 2 / b)), (sympy.diff(P, b), Q * (2 * P ** 2 / b - 1))):
        resid = sympy.Poly(sympy.expand((lhs - rhs) * b), b)
        lowest = min(m[0] for m in resid.monoms())
        assert lowest - 1 >= 3


def test_series_general_amplitude_numerically():
    c = 1 / math.sqrt(math.pi)
    h = 1e-4
    for b in (0.002, 0.004):
        st, lo, hi = series_state(b, c), series_state(b - h, c), series_state(b + h, c)
        dq = (hi.Q - lo.Q) / (2 * h)
        dp = (hi.P - lo.P) / (2 * h)
        # the truncated series leaves an O(b^3) residual
        assert dq == pytest.approx(st.P * (1 - 2 * st.Q ** 2 / b), abs=2 * b ** 3)
        assert dp == pytest.approx(st.Q * (2 * st.P ** 2 / b - 1), abs=2 * b ** 3)


def test_hamiltonians_at_small_b():
    st = series_state(0.01)
    assert st.h_diag == pytest.approx(1 + 2 * 0.01, abs=5e-4)
    # in b the off-diagonal Hamiltonian tends to P(0)^2 = 1
    assert st.h_off == pytest.approx(1.0, abs=0.03)
    with pytest.raises(ValueError):
        HamiltonianState(0.0, 1.0, 0.0)


def test_integrator_guards():
    with pytest.raises(ValueError):
        tw_integrate(1.0, step=1e-2)
    with pytest.raises(SpacingIntegrationError):
        tw_integrate(0.6, step=1e-3, amplitude=1.0)
    traj = tw_integrate(0.5, step=1e-3, amplitude=1 / math.sqrt(math.pi))
    assert len(traj.states()) == len(traj.b)
    hd, ho = traj.h_values()
    assert np.all(np.isfinite(hd)) and np.all(np.isfinite(ho))


def test_calibration_picks_half_argument():
    assert calibrate_argument_map("unit") == 2
    assert calibrate_argument_map("piless") == 2


@pytest.mark.parametrize("ensemble", ["gue", "goe", "gse"])
def test_ode_matches_nystrom(ensemble):
    fn = {"gue": e_gue_ode, "goe": e_goe, "gse": e_gse}[ensemble]
    for s in (0.1, 0.5, 1.0, 2.0, 2.5):
        assert abs(fn(s) - fredholm_e(ensemble, s)) < 1e-6


def test_small_s_expansions():
    assert abs(e_gse(0.1) - 0.9) < 1e-3
    assert abs(e_gue_ode(0.1) - 0.9) < 5e-4
    assert e_goe(0.1) > 0.9
    for fn in (e_gue_ode, e_goe, e_gse):
        assert fn(0.0) == 1.0
        assert fn(1e-4) == pytest.approx(1.0, abs=1e-3)


def test_cubic_coefficients_in_both_conventions():
    assert fit_cubic_coefficient("goe", "unit") == pytest.approx(math.pi ** 2 / 36, rel=0.02)
    assert fit_cubic_coefficient("goe", "piless") == pytest.approx(1 / 36, rel=0.02)
    assert abs(fit_cubic_coefficient("gue", "unit")) < 0.01


def test_b0_and_step_insensitivity():
    assert abs(e_goe(2.0, b0=5e-4) - e_goe(2.0)) < 1e-8
    assert abs(e_gue_ode(2.0, b0=5e-4) - e_gue_ode(2.0)) < 1e-8


def test_range_checks():
    with pytest.raises(ValueError):
        e_goe(3.5)
    with pytest.raises(ValueError):
        spacing_curve("goe", [0, 1, 2], route="bogus")


@pytest.mark.parametrize("ensemble", ["gue", "goe", "gse"])
def test_curves_and_spacing_density(ensemble):
    grid = np.linspace(0, 3, 301)
    curve = spacing_curve(ensemble, grid)
    assert curve.e_values[0] == 1.0
    assert np.all(np.diff(curve.e_values) <= 1e-12)
    assert np.all((curve.e_values >= 0) & (curve.e_values <= 1))
    p = spacing_density(curve)
    assert np.trapezoid(p, grid) == pytest.approx(1.0, abs=0.05)
    if ensemble == "goe":
        # p(s) ~ (pi^2/6) s near 0
        assert p[5] / grid[5] == pytest.approx(math.pi ** 2 / 6, rel=0.05)
    else:
        assert abs(p[0]) < 2e-3


def test_nystrom_curve_route():
    grid = np.linspace(0, 1, 6)
    a = spacing_curve("goe", grid, route="nystrom")
    b = spacing_curve("goe", grid, route="hamiltonian")
    assert np.allclose(a.e_values, b.e_values, atol=1e-9)


def test_spacing_density_validation():
    with pytest.raises(ValueError):
        spacing_density(SpacingCurve(np.arange(4.0), np.ones(4), "nystrom", "gue"))
    with pytest.raises(ValueError):
        spacing_density(SpacingCurve(np.array([0, 0.1, 0.3, 0.4, 0.5]), np.ones(5), "nystrom", "gue"))
    with pytest.warns(GridTooCoarseWarning):
        spacing_density(spacing_curve("gue", np.linspace(0, 2, 6)))
    with pytest.raises(ValueError):
        SpacingCurve(np.arange(5.0), np.ones(5), "nystrom", "cue")
