import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rmtpoly.exactfn import (
    _rho_integral,
    _rho_integral_quad,
    density_from_im_ratio,
    goe_density,
    goe_im_f2,
    goe_im_f4,
    goe_im_from_kernel,
    goe_kernel_sn,
    goe_ratio_limit,
    goe_ratio_quadrature,
    goe_s4_diagonal,
    gse_det2_moment,
    gse_inverse_moment,
    gse_inverse_moment_im,
    gse_inverse_moment_limit,
    gue_density,
    gue_ratio,
    gue_ratio_im,
    gue_ratio_limit,
)

# values frozen from runs cross-checked against 1e5-sample Monte Carlo
FROZEN = [
    (lambda: gue_ratio(0.3, 0.5 + 0.1j, 2), 0.7554949410792569 + 0.2802520661565568j),
    (lambda: gue_ratio(0.3, 0.5 + 0.1j, 4), 0.436647469374567 + 0.40175526656507443j),
    (lambda: goe_ratio_quadrature(0.3, 0.5 + 0.1j, 4), 0.30068112700908 + 0.34910230025289407j),
    (lambda: gse_inverse_moment(0.5 + 0.1j, 2), -0.5821348293014614 + 2.9099336464639474j),
    (lambda: gue_ratio_im(0.3, 0.5, 4), 0.6470596410938091),
    (lambda: goe_im_f2(0.3, 0.5), 0.412128924661268),
    (lambda: goe_im_f4(0.3, 0.5), 0.6424226542088918),
]


@pytest.mark.parametrize("fn,expected", FROZEN)
def test_frozen_values(fn, expected):
    assert abs(fn() - expected) < 1e-9 * max(1, abs(expected))


@pytest.mark.parametrize("n", [2, 4, 6])
def test_ratio_is_one_on_the_diagonal(n):
    assert abs(gue_ratio_limit(0.37, 0.37, n) - 1) < 1e-9
    assert abs(goe_ratio_limit(0.37, 0.37, n) - 1) < 1e-9


@settings(max_examples=15)
@given(st.floats(-1.2, 1.2), st.floats(-1.2, 1.2), st.sampled_from([1, 2, 3, 5]))
def test_gue_boundary_value_matches_closed_form(lam, mu, n):
    assert abs(gue_ratio_limit(lam, mu, n).imag - gue_ratio_im(lam, mu, n)) < 1e-9


@given(st.floats(-2, 2), st.integers(1, 8))
def test_gue_im_vanishes_at_coincidence(lam, n):
    assert abs(gue_ratio_im(lam, lam, n)) < 1e-12


@pytest.mark.parametrize("n", [2, 4])
def test_small_eps_approaches_limit(n):
    near = gue_ratio(0.1, complex(0.6, 1e-7), n)
    assert abs(near - gue_ratio_limit(0.1, 0.6, n)) < 1e-5


@pytest.mark.parametrize("lam", [-0.8, 0.0, 0.45])
def test_density_from_im_ratio(lam):
    assert density_from_im_ratio(gue_ratio_im, lam, 4) == pytest.approx(gue_density(lam, 4), rel=1e-6)
    assert density_from_im_ratio(goe_im_from_kernel, lam, 4) == pytest.approx(goe_density(lam, 4), rel=1e-6)


def test_densities_normalized():
    xs = np.linspace(-4, 4, 2001)
    for dens in (gue_density, goe_density):
        total = np.trapezoid([dens(x, 4) for x in xs], xs)
        assert total == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("lam,mu", [(0.3, 0.5), (-0.7, 0.2), (1.1, -0.4)])
def test_goe_small_n_closed_forms(lam, mu):
    assert goe_im_f2(lam, mu) == pytest.approx(goe_im_from_kernel(lam, mu, 2), abs=1e-10)
    assert goe_im_f4(lam, mu) == pytest.approx(goe_im_from_kernel(lam, mu, 4), abs=1e-10)
    assert goe_im_f2(lam, mu) == pytest.approx(goe_ratio_limit(lam, mu, 2).imag, abs=1e-8)
    assert goe_im_f4(lam, mu) == pytest.approx(goe_ratio_limit(lam, mu, 4).imag, abs=1e-8)


@pytest.mark.parametrize("y", [-1.5, 0.0, 0.8, 2.2])
def test_s4_diagonal(y):
    assert goe_s4_diagonal(y) == pytest.approx(math.sqrt(math.pi) * goe_kernel_sn(y, y, 4), abs=1e-10)


def test_rho_integral_closed_vs_quad():
    for c in (complex(0.3, 1.0), complex(-2.0, 0.5), complex(4.0, -0.3)):
        for m in (1, 2, 3):
            assert abs(_rho_integral(c, m) - _rho_integral_quad(c, m)) < 1e-9


def test_goe_rho_methods_agree():
    a = goe_ratio_quadrature(0.2, 0.4 + 0.2j, 6, rho_method="closed")
    b = goe_ratio_quadrature(0.2, 0.4 + 0.2j, 6, rho_method="quad")
    assert abs(a - b) < 1e-8


def test_gse_inverse_moment_boundary():
    for mu in (-0.6, 0.1, 0.9):
        for n in (1, 2, 3):
            assert gse_inverse_moment_limit(mu, n).imag == pytest.approx(gse_inverse_moment_im(mu, n), abs=1e-8)


def test_gse_inverse_moment_large_mu():
    mu = complex(30.0, 1.0)
    assert abs(gse_inverse_moment(mu, 2) * mu ** 4 - 1) < 1e-2


def test_gse_det2_moment():
    # N = 1: X' = a I with a ~ N(0, 1/2), so <(lam - a)^2> = lam^2 + 1/2
    for lam in (0.0, 0.5, -1.3):
        assert gse_det2_moment(lam, 1) == pytest.approx(lam * lam + 0.5, abs=1e-13)
    assert gse_det2_moment(0.5, 2) == pytest.approx(0.375, abs=1e-13)


def test_domain_errors():
    with pytest.raises(ValueError):
        gue_ratio(0.1, 0.5 - 0.1j, 2)
    with pytest.raises(ValueError):
        goe_ratio_quadrature(0.1, 0.5 + 0.1j, 3)
    with pytest.raises(ValueError):
        gse_inverse_moment(0.5, 2)
