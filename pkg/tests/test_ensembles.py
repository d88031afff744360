import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rmtpoly.ensembles import (
    CHUNK,
    EnsembleSpec,
    InsufficientStatisticsWarning,
    MCEstimate,
    distinct_eigenvalues,
    empirical_density,
    mc_det_product,
    mc_inverse_det,
    mc_ratio,
    mc_two_point,
    sample_matrices,
    sample_spectra,
    sample_spectrum,
    source_diagonal,
)
from rmtpoly.exactfn import gse_det2_moment, gse_inverse_moment, gue_ratio, goe_ratio_quadrature
from rmtpoly.source import SourceProfile


def test_spec_validation():
    for bad in (dict(beta=3, dim_n=4), dict(beta=2, dim_n=0), dict(beta=2, dim_n=4, weight_scale=0)):
        with pytest.raises(ValueError):
            EnsembleSpec(**bad)
    with pytest.raises(ValueError):
        EnsembleSpec(2, 5, source=SourceProfile.two_atom(1.0))


@given(st.sampled_from([1, 2, 4]), st.integers(1, 50), st.floats(0.1, 5))
def test_digest_is_stable_and_distinguishes(beta, n, c):
    a, b = EnsembleSpec(beta, n, c), EnsembleSpec(beta, n, c)
    assert a.digest() == b.digest()
    assert a.digest() != EnsembleSpec(beta, n + 1, c).digest()


def test_single_spectrum_deterministic():
    spec = EnsembleSpec(2, 10)
    a, b = sample_spectrum(spec, 42), sample_spectrum(spec, 42)
    assert np.array_equal(a.eigenvalues, b.eigenvalues) and a.spec_digest == spec.digest()
    assert not np.array_equal(a.eigenvalues, sample_spectrum(spec, 43).eigenvalues)


def test_worker_count_independence():
    spec = EnsembleSpec(1, 6)
    a = sample_spectra(spec, 2 * CHUNK + 7, seed=3, workers=1)
    b = sample_spectra(spec, 2 * CHUNK + 7, seed=3, workers=4)
    assert a.tobytes() == b.tobytes()
    # a prefix of whole chunks is reproduced by a shorter run
    assert np.array_equal(sample_spectra(spec, CHUNK, seed=3), a[:CHUNK])


@pytest.mark.parametrize("beta", [1, 2, 4])
def test_matrix_structure(beta):
    rng = np.random.default_rng(0)
    x = sample_matrices(EnsembleSpec(beta, 5), rng, 3)
    assert np.allclose(x, np.conj(np.swapaxes(x, 1, 2)))
    if beta == 1:
        assert np.isrealobj(x)


def test_kramers_degeneracy():
    eig = sample_spectrum(EnsembleSpec(4, 8), 1).eigenvalues
    assert np.allclose(eig[0::2], eig[1::2], atol=1e-12)
    assert len(distinct_eigenvalues(eig, 4)) == 8


@pytest.mark.parametrize("beta", [1, 2, 4])
def test_second_moment(beta):
    # E[Tr X^2] / N -> the semicircle second moment R^2 / 4
    spec = EnsembleSpec(beta, 40)
    eigs = distinct_eigenvalues(sample_spectra(spec, 400, seed=9), beta)
    assert np.mean(eigs ** 2) == pytest.approx(spec.semicircle_radius() ** 2 / 4, rel=0.03)


def test_source_shifts_the_mean():
    src = SourceProfile(((0.5, 0.25), (-1.0, 0.75)))
    spec = EnsembleSpec(2, 8, weight_scale=2.0, source=src)
    assert sorted(source_diagonal(spec)) == sorted([0.5] * 2 + [-1.0] * 6)
    x = sample_matrices(spec, np.random.default_rng(1), 2000)
    diag = np.mean(np.real(np.diagonal(x, axis1=1, axis2=2)), axis=0)
    assert np.allclose(sorted(diag), sorted(source_diagonal(spec) / 2.0), atol=0.03)


def test_empirical_density_normalization():
    eigs = sample_spectra(EnsembleSpec(4, 10), 50, seed=2)
    x, d = empirical_density(eigs, 50, (-4, 4), beta=4)
    assert np.sum(d) * (x[1] - x[0]) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        empirical_density(eigs, 1, (-4, 4))
    with pytest.raises(ValueError):
        empirical_density(eigs, 10, (1, 1))


def test_mc_estimate():
    est = MCEstimate.from_values(np.array([1.0, 2.0, 3.0, 4.0]))
    assert est.mean == 2.5 and est.n_samples == 4
    assert est.within(2.5 + 3 * est.std_error_re * 0.99)
    assert not est.within(2.5 + 3 * est.std_error_re * 1.01)
    with pytest.raises(ValueError):
        MCEstimate.from_values(np.array([1.0]))


def test_mc_ratio_gue_and_goe():
    mu = complex(0.5, 0.2)
    est = mc_ratio(EnsembleSpec(2, 2), 0.3, mu, 20000, seed=5)
    assert est.within(gue_ratio(0.3, mu, 2), 4)
    est = mc_ratio(EnsembleSpec(1, 2), 0.3, mu, 20000, seed=6)
    assert est.within(goe_ratio_quadrature(0.3, mu, 2), 4)
    with pytest.raises(ValueError):
        mc_ratio(EnsembleSpec(2, 2), 0.3, 0.5, 10, seed=0)


def test_mc_det_product_monic_hermite():
    # <det(lam - X)> over exp(-(N/2) Tr X^2) is He_N(lam sqrt(N)) / N^{N/2}
    n, lam = 3, 0.4
    t = lam * math.sqrt(n)
    expected = (t ** 3 - 3 * t) / n ** 1.5
    est = mc_det_product(EnsembleSpec(2, n), [lam], 40000, seed=8)
    assert est.within(expected, 4)


def test_mc_gse_moments():
    est = mc_det_product(EnsembleSpec(4, 2), [0.5], 40000, seed=10)
    assert est.within(gse_det2_moment(0.5, 2), 4)
    mu = complex(0.4, 0.5)
    est = mc_inverse_det(EnsembleSpec(4, 2), mu, 40000, seed=11)
    assert est.within(gse_inverse_moment(mu, 2), 4)


def test_two_point_small_run_warns():
    with pytest.warns(InsufficientStatisticsWarning):
        tp = mc_two_point(EnsembleSpec(2, 50), 0.0, 0.8, 20, 5, seed=1)
    assert tp.insufficient and len(tp.x) == 20 and tp.number_density > 0
