"""Gaussian ensembles, optional deterministic source, and Monte Carlo estimators.

Measure: exp(-c N/2 Tr X^2 + N Tr A X) with c = weight_scale. For beta = 4
the trace is taken in the 2N x 2N complex representation X', so the GSE
semicircle has radius 2/sqrt(c), like the GUE. The GOE radius is sqrt(2/c).

Seeding: a single spectrum is a pure function of (spec, seed). Estimators
draw matrices in fixed-size chunks; chunk j uses SeedSequence([seed, j]),
so results do not depend on how many workers process the chunks.
"""

from __future__ import annotations

import hashlib
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .source import SourceProfile

CHUNK = 500


@dataclass(frozen=True)
class EnsembleSpec:
    beta: int
    dim_n: int
    weight_scale: float = 1.0
    source: SourceProfile | None = None

    def __post_init__(self):
        if self.beta not in (1, 2, 4):
            raise ValueError("beta must be 1, 2 or 4")
        if int(self.dim_n) != self.dim_n or self.dim_n < 1:
            raise ValueError("dim_n must be a positive integer")
        if not self.weight_scale > 0:
            raise ValueError("weight_scale must be positive")
        if self.source is not None:
            source_diagonal(self)

    @property
    def n_eigs(self) -> int:
        return 2 * self.dim_n if self.beta == 4 else self.dim_n

    def digest(self) -> str:
        atoms = None if self.source is None else self.source.atoms
        text = repr((self.beta, self.dim_n, float(self.weight_scale), atoms))
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    def semicircle_radius(self) -> float:
        return math.sqrt(2 / self.weight_scale) if self.beta == 1 else 2 / math.sqrt(self.weight_scale)


@dataclass(frozen=True)
class SpectrumSample:
    eigenvalues: np.ndarray
    seed: int
    spec_digest: str


@dataclass(frozen=True)
class MCEstimate:
    mean: complex
    std_error: float
    n_samples: int
    std_error_re: float = 0.0
    std_error_im: float = 0.0

    @classmethod
    def from_values(cls, values: np.ndarray) -> "MCEstimate":
        values = np.asarray(values, dtype=complex)
        n = len(values)
        if n < 2:
            raise ValueError("need at least two samples")
        se_re = float(np.std(values.real, ddof=1) / math.sqrt(n))
        se_im = float(np.std(values.imag, ddof=1) / math.sqrt(n))
        return cls(complex(values.mean()), math.hypot(se_re, se_im), n, se_re, se_im)

    def within(self, target: complex, n_sigma: float = 3.0) -> bool:
        d = complex(target) - self.mean
        ok_re = abs(d.real) <= n_sigma * self.std_error_re + 1e-14
        ok_im = abs(d.imag) <= n_sigma * self.std_error_im + 1e-14
        return ok_re and ok_im


def source_diagonal(spec: EnsembleSpec) -> np.ndarray:
    """Diagonal of A (length N) with each atom repeated weight * N times."""
    src = spec.source
    if src is None:
        return np.zeros(spec.dim_n)
    diag = []
    for a, w in src.atoms:
        m = w * spec.dim_n
        if abs(m - round(m)) > 1e-9:
            raise ValueError(f"weight {w} gives non-integer multiplicity at N={spec.dim_n}")
        diag += [a] * int(round(m))
    return np.array(diag)


def _gaussian_batch(spec: EnsembleSpec, rng: np.random.Generator, count: int) -> np.ndarray:
    n, c = spec.dim_n, spec.weight_scale
    scale = 1.0 / math.sqrt(c * n)
    if spec.beta == 1:
        g = rng.standard_normal((count, n, n))
        return (g + g.transpose(0, 2, 1)) / 2 * scale
    if spec.beta == 2:
        g = rng.standard_normal((count, n, n)) + 1j * rng.standard_normal((count, n, n))
        return (g + g.conj().transpose(0, 2, 1)) / 2 * scale
    # Quaternion self-dual Q = A + B i + C j + D k; A symmetric, B, C, D antisymmetric.
    # Diagonal variance 1/(2cN), off-diagonal components 1/(4cN).
    s = scale / math.sqrt(2)
    parts = rng.standard_normal((4, count, n, n))
    a = (parts[0] + parts[0].transpose(0, 2, 1)) / 2 * s
    b, cc, d = ((p - p.transpose(0, 2, 1)) / 2 * s for p in parts[1:])
    x = np.empty((count, 2 * n, 2 * n), dtype=complex)
    x[:, 0::2, 0::2] = a + 1j * b
    x[:, 0::2, 1::2] = cc + 1j * d
    x[:, 1::2, 0::2] = -cc + 1j * d
    x[:, 1::2, 1::2] = a - 1j * b
    return x


def sample_matrices(spec: EnsembleSpec, rng: np.random.Generator, count: int) -> np.ndarray:
    x = _gaussian_batch(spec, rng, count)
    if spec.source is not None:
        mean = source_diagonal(spec) / spec.weight_scale
        if spec.beta == 4:
            mean = np.repeat(mean, 2)
        idx = np.arange(len(mean))
        x[:, idx, idx] += mean
    return x


def sample_spectrum(spec: EnsembleSpec, seed: int) -> SpectrumSample:
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    eig = np.linalg.eigvalsh(sample_matrices(spec, rng, 1)[0])
    return SpectrumSample(np.sort(eig), int(seed), spec.digest())


def _chunk(spec: EnsembleSpec, seed: int, j: int, count: int) -> np.ndarray:
    rng = np.random.default_rng(np.random.SeedSequence([seed, j]))
    return np.sort(np.linalg.eigvalsh(sample_matrices(spec, rng, count)), axis=1)


def sample_spectra(spec: EnsembleSpec, n_samples: int, seed: int, workers: int = 1) -> np.ndarray:
    """(n_samples, n_eigs) array of sorted spectra, independent of `workers`."""
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    sizes = [min(CHUNK, n_samples - i) for i in range(0, n_samples, CHUNK)]
    if workers <= 1:
        chunks = [_chunk(spec, seed, j, m) for j, m in enumerate(sizes)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(lambda jm: _chunk(spec, seed, *jm), enumerate(sizes)))
    return np.concatenate(chunks, axis=0)


def distinct_eigenvalues(eigs: np.ndarray, beta: int) -> np.ndarray:
    """Drop the Kramers partner for beta = 4 (spectra are sorted)."""
    return eigs[..., 0::2] if beta == 4 else eigs


def empirical_density(samples, bins: int, range_: tuple[float, float], beta: int | None = None):
    """Histogram normalized so sum(density * width) = 1 per matrix.

    `samples` is a list of SpectrumSample or a 2-D array of spectra. For
    beta = 4 each Kramers pair is counted once.
    """
    if bins < 2:
        raise ValueError("bins must be >= 2")
    lo, hi = range_
    if not hi > lo:
        raise ValueError("empty histogram range")
    if isinstance(samples, np.ndarray):
        eigs = samples if samples.ndim == 2 else samples[None, :]
    else:
        if len(samples) == 0:
            raise ValueError("need at least one sample")
        eigs = np.stack([s.eigenvalues for s in samples])
    if beta == 4:
        eigs = distinct_eigenvalues(eigs, 4)
    counts, edges = np.histogram(eigs.ravel(), bins=bins, range=(lo, hi))
    width = edges[1] - edges[0]
    centers = 0.5 * (edges[1:] + edges[:-1])
    return centers, counts / (eigs.shape[0] * eigs.shape[1] * width)


def mc_ratio(spec: EnsembleSpec, lam: float, mu: complex, n_samples: int, seed: int, workers: int = 1) -> MCEstimate:
    """Estimate <det(lam - X) / det(mu - X)>, Im mu > 0, products taken in log form."""
    mu = complex(mu)
    if not mu.imag > 0:
        raise ValueError("mu must have a positive imaginary part")
    eigs = sample_spectra(spec, n_samples, seed, workers).astype(complex)
    with np.errstate(divide="ignore"):
        logs = np.log(lam - eigs).sum(axis=1) - np.log(mu - eigs).sum(axis=1)
    return MCEstimate.from_values(np.exp(logs))


def mc_det_product(spec: EnsembleSpec, lambdas: Sequence[float], n_samples: int, seed: int, workers: int = 1) -> MCEstimate:
    """Estimate <prod_a det(lambda_a - X)>; for beta = 4 the 2N x 2N determinant."""
    if len(lambdas) == 0:
        raise ValueError("lambdas must be nonempty")
    eigs = sample_spectra(spec, n_samples, seed, workers)
    vals = np.ones(n_samples)
    for lam in lambdas:
        vals = vals * np.prod(lam - eigs, axis=1)
    return MCEstimate.from_values(vals)


def mc_inverse_det(spec: EnsembleSpec, mu: complex, n_samples: int, seed: int, workers: int = 1) -> MCEstimate:
    """Estimate <1/det(mu - X)>."""
    mu = complex(mu)
    if not mu.imag > 0:
        raise ValueError("mu must have a positive imaginary part")
    eigs = sample_spectra(spec, n_samples, seed, workers).astype(complex)
    return MCEstimate.from_values(np.exp(-np.log(mu - eigs).sum(axis=1)))


class InsufficientStatisticsWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class TwoPoint:
    x: np.ndarray
    ratio: np.ndarray
    std_error: np.ndarray
    counts: np.ndarray
    number_density: float
    insufficient: bool


def mc_two_point(
    spec: EnsembleSpec,
    center: float,
    window: float,
    bins: int,
    n_samples: int,
    seed: int,
    x_max: float = 6.5,
    workers: int = 1,
) -> TwoPoint:
    """Pair-correlation ratio rho(l1, l2) / rho^2 against x = pi N rho (l1 - l2).

    Eigenvalues in [center - window/2, center + window/2] are used. The
    number density N rho is measured as the mean count in the window divided
    by its width. Pairs at separation d can only be seen in a window of width
    w with weight (w - d), which the normalization divides out.
    """
    eigs = distinct_eigenvalues(sample_spectra(spec, n_samples, seed, workers), spec.beta)
    lo, hi = center - window / 2, center + window / 2
    in_win = [row[(row >= lo) & (row <= hi)] for row in eigs]
    n_rho = float(np.mean([len(r) for r in in_win])) / window
    if n_rho <= 0:
        raise ValueError("no eigenvalues in the window")
    edges = np.linspace(0.0, x_max, bins + 1)
    counts = np.zeros(bins)
    for r in in_win:
        d = np.abs(r[:, None] - r[None, :])[np.triu_indices(len(r), 1)]
        counts += np.histogram(math.pi * n_rho * d, bins=edges)[0]
    xc = 0.5 * (edges[1:] + edges[:-1])
    dd = (edges[1] - edges[0]) / (math.pi * n_rho)
    overlap = window - xc / (math.pi * n_rho)
    expected = n_samples * n_rho ** 2 * dd * overlap
    ratio = counts / expected
    err = np.sqrt(counts) / expected
    insufficient = bool(np.any(counts < 10))
    if insufficient:
        warnings.warn("some separation bins hold fewer than 10 pairs", InsufficientStatisticsWarning)
    return TwoPoint(xc, ratio, err, counts, n_rho, insufficient)
