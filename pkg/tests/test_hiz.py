import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from rmtpoly.hiz import (
    HizParams,
    asymptotic_vs_sine_tail,
    barnes_k2_coefficient,
    barnes_product,
    barnes_product_continued,
    closed_form_polynomial_in_k,
    compare_gamma_forms,
    gamma_kp,
    gamma_kp_product_form,
    gamma_kp_zero_replica_limit,
    multivariate_residual_check,
    next_coefficient,
    ode_residual,
    replica_limit_coefficient,
    series_by_recursion,
    series_closed_form,
)

betas = st.fractions(min_value=Fraction(1, 10), max_value=6, max_denominator=12)


def test_known_series():
    assert series_by_recursion(HizParams(Fraction(1), 1), 3).coefficients == (1, Fraction(1, 4), Fraction(9, 32), Fraction(225, 384))
    s = series_by_recursion(HizParams(Fraction(4), 2), 6)
    assert s.coefficients[:3] == (1, -8, 20) and s.terminated
    assert not series_by_recursion(HizParams(Fraction(1), 2), 6).terminated


def test_params_validation():
    with pytest.raises(ValueError):
        HizParams(Fraction(0), 1)
    with pytest.raises(ValueError):
        HizParams(Fraction(1), 0)
    assert HizParams(Fraction(1), 2).gamma == 1


@given(betas, st.integers(1, 6), st.integers(0, 12))
def test_closed_form_equals_recursion(beta, k, order):
    p = HizParams(beta, k)
    assert series_closed_form(p, order).coefficients == series_by_recursion(p, order).coefficients


@given(betas, st.integers(1, 5), st.integers(0, 8), st.fractions(min_value=Fraction(1, 3), max_value=20, max_denominator=9))
def test_ode_residual_telescopes(beta, k, order, x):
    s = series_by_recursion(HizParams(beta, k), order)
    assert ode_residual(s, x) == (order + 1) * next_coefficient(s) * x ** (-order - 2)


def test_replica_limit_against_sympy():
    k = sympy.Symbol("k")
    for p in range(1, 9):
        expr = sympy.prod([(k + 2 * j) ** 2 for j in range(p)]) / (4 ** p * sympy.factorial(p))
        coeff = sympy.Poly(sympy.expand(expr), k).coeff_monomial(k ** 2)
        assert Fraction(int(coeff.p), int(coeff.q)) == replica_limit_coefficient(p)
        assert replica_limit_coefficient(p) == Fraction(math.factorial(p - 1), 4 * p)


def test_polynomial_in_k_matches_series():
    for p in range(5):
        poly = closed_form_polynomial_in_k(Fraction(4), p)
        for k in range(1, 4):
            assert sum(c * k ** i for i, c in enumerate(poly)) == series_closed_form(HizParams(Fraction(4), k), p).coefficients[p]


def test_replica_limit_rejects_p_zero():
    with pytest.raises(ValueError):
        replica_limit_coefficient(0)


def test_sine_tail_asymptotics():
    _, _, d10 = asymptotic_vs_sine_tail(10.0, 8)
    _, _, d20 = asymptotic_vs_sine_tail(20.0, 8)
    assert d10 == pytest.approx(2.96e-5, rel=0.02)
    assert d20 < d10 / 100
    with pytest.raises(ValueError):
        asymptotic_vs_sine_tail(3.0, 4)
    with pytest.warns(RuntimeWarning):
        asymptotic_vs_sine_tail(6.0, 12)


@pytest.mark.parametrize("p", range(0, 13, 2))
def test_gamma_kp_k1_is_sinc_taylor(p):
    # k = 1 reduces to the Taylor coefficients of sin x / x
    assert gamma_kp(1, p).value == Fraction((-1) ** (p // 2), math.factorial(p + 1))


def test_gamma_kp_frozen_values():
    assert [gamma_kp(2, p).value for p in (0, 2, 4)] == [Fraction(1, 12), Fraction(-1, 360), Fraction(-1, 10080)]
    assert gamma_kp(3, 0).value == Fraction(1, 8640)
    with pytest.raises(ValueError):
        gamma_kp(2, 3)


def test_product_form_differs_by_sign_for_even_k():
    diffs = compare_gamma_forms(4, 8)
    assert {k for k, *_ in diffs} == {2, 4}
    assert all(g == -m for _, _, g, m in diffs)
    for k in (1, 3):
        for p in range(0, 9, 2):
            assert gamma_kp(k, p).value == gamma_kp_product_form(k, p)


@pytest.mark.parametrize("p", range(0, 13, 2))
def test_zero_replica_limit(p):
    assert gamma_kp_zero_replica_limit(p) == Fraction((-1) ** (p // 2), (1 - p) * math.factorial(p))


def test_barnes():
    assert barnes_product(2) == Fraction(1, 12)
    assert barnes_product_continued(3) == pytest.approx(float(barnes_product(3)), rel=1e-12)
    assert barnes_k2_coefficient() == pytest.approx(1 + 0.5772156649015329, abs=1e-8)


POINT = (1.3, 0.9, -0.4, -1.2, 0.5, 0.2)


def test_residual_scaling_by_order():
    # order 0 leaves an N-independent ratio, order 1 halves, order 2 quarters
    scale = [multivariate_residual_check(o, 200, POINT).ratio / multivariate_residual_check(o, 100, POINT).ratio for o in range(3)]
    assert scale == pytest.approx([1.0, 0.5, 0.25], rel=1e-9)


def test_residual_validation():
    with pytest.raises(ValueError):
        multivariate_residual_check(3, 100, POINT)
    with pytest.raises(ValueError):
        multivariate_residual_check(1, 100, (1, 1, 0, 2, 0.5, 0.2))
    with pytest.raises(ValueError):
        multivariate_residual_check(1, 100, (1, 2, 0, 3, 0.5, 0.5))


def test_series_json_roundtrip_fields():
    import json

    d = json.loads(series_by_recursion(HizParams(Fraction(1), 1), 2).to_json())
    assert d["coefficients"] == [[1, 1], [1, 4], [9, 32]] and d["k"] == 1
