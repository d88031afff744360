"""Density of states for a Gaussian ensemble shifted by a deterministic source.

Convention: G0(z) = sum_i w_i / (z - a_i), and the resolvent solves
G(z) = G0(z - G(z)). With no source this is the semicircle on [-2, 2]. The
ensembles module samples the same law with weight_scale c = 1 at beta = 2, 4
(radius 2/sqrt(c)); at beta = 1 the radius is sqrt(2/c), so c = 1/2 matches.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import optimize


class PasturConvergenceError(RuntimeError):
    pass


class BranchAmbiguityWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class SourceProfile:
    atoms: tuple[tuple[float, float], ...]

    def __post_init__(self):
        atoms = tuple((float(a), float(w)) for a, w in self.atoms)
        if not atoms:
            raise ValueError("profile needs at least one atom")
        if any(w <= 0 for _, w in atoms):
            raise ValueError("weights must be positive")
        if abs(sum(w for _, w in atoms) - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")
        if not all(math.isfinite(a) for a, _ in atoms):
            raise ValueError("locations must be finite")
        object.__setattr__(self, "atoms", atoms)

    @property
    def locations(self) -> np.ndarray:
        return np.array([a for a, _ in self.atoms])

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for _, w in self.atoms])

    @classmethod
    def zero(cls) -> "SourceProfile":
        return cls(((0.0, 1.0),))

    @classmethod
    def two_atom(cls, a: float) -> "SourceProfile":
        if a == 0:
            return cls.zero()
        return cls(((-a, 0.5), (a, 0.5)))

    @classmethod
    def from_json(cls, text: str) -> "SourceProfile":
        data = json.loads(text)
        return cls(tuple((atom["a"], atom["w"]) for atom in data["atoms"]))

    def to_json(self) -> str:
        return json.dumps({"atoms": [{"a": a, "w": w} for a, w in self.atoms]})


def g0_resolvent(profile: SourceProfile, z: complex) -> complex:
    z = complex(z)
    if z.imag == 0 and np.any(profile.locations == z.real):
        raise ZeroDivisionError("z sits on an atom of the source")
    return complex(np.sum(profile.weights / (z - profile.locations)))


def _g0_and_derivative(profile: SourceProfile, w: complex) -> tuple[complex, complex]:
    d = w - profile.locations
    return complex(np.sum(profile.weights / d)), complex(-np.sum(profile.weights / d ** 2))


def _newton(profile: SourceProfile, z: complex, g: complex, tol: float, max_iter: int = 100) -> complex | None:
    for _ in range(max_iter):
        g0, dg0 = _g0_and_derivative(profile, z - g)
        f = g - g0
        if abs(f) < tol:
            return g
        g = g - f / (1 + dg0)
    g0, _ = _g0_and_derivative(profile, z - g)
    return g if abs(g - g0) < tol else None


def _polynomial_roots(profile: SourceProfile, z: complex) -> np.ndarray:
    # Multiply G = sum w_i/(z - G - a_i) through by prod (z - G - a_i).
    a, w = profile.locations, profile.weights
    full = np.poly1d([1.0])
    for ai in a:
        full *= np.poly1d([-1.0, z - ai])
    rhs = np.poly1d([0.0])
    for i, wi in enumerate(w):
        part = np.poly1d([wi])
        for j, aj in enumerate(a):
            if j != i:
                part *= np.poly1d([-1.0, z - aj])
        rhs += part
    return np.roots((np.poly1d([1.0, 0.0]) * full - rhs).coeffs)


def pastur_solve(profile: SourceProfile, z: complex, tol: float = 1e-13, max_iter: int = 5000) -> complex:
    """Solve G = G0(z - G) on the physical sheet (Im G < 0 for Im z > 0).

    Damped fixed-point iteration from the large-z guess 1/z, then Newton. If
    that fails, every root of the equivalent polynomial is polished and the
    Herglotz one kept.
    """
    z = complex(z)
    if not z.imag > 0:
        raise ValueError("pastur_solve needs Im z > 0")
    g = 1.0 / z
    for _ in range(max_iter):
        g_new = g0_resolvent(profile, z - g)
        if abs(g_new - g) < 1e-6:
            break
        g = 0.5 * g + 0.5 * g_new
    g = _newton(profile, z, g, tol)
    if g is not None and g.imag < 0:
        return g
    candidates = []
    for root in _polynomial_roots(profile, z):
        polished = _newton(profile, z, complex(root), tol)
        if polished is not None and polished.imag < 0:
            if all(abs(polished - c) > 1e-8 for c in candidates):
                candidates.append(polished)
    if not candidates:
        raise PasturConvergenceError(f"no Herglotz solution found at z={z}")
    if len(candidates) > 1:
        warnings.warn(f"{len(candidates)} Herglotz solutions at z={z}", BranchAmbiguityWarning)
    return candidates[0]


def pastur_density(profile: SourceProfile, lam_grid: Sequence[float], epsilon: float = 1e-6) -> np.ndarray:
    """rho(lam) = -(1/pi) Im G(lam + i0), from eps and eps/2 by Richardson."""
    if not 1e-8 <= epsilon <= 1e-3:
        raise ValueError("epsilon must lie in [1e-8, 1e-3]")
    out = []
    for lam in np.atleast_1d(lam_grid):
        r1 = -pastur_solve(profile, complex(lam, epsilon)).imag / math.pi
        r2 = -pastur_solve(profile, complex(lam, epsilon / 2)).imag / math.pi
        out.append(2 * r2 - r1)
    return np.array(out)


# --------------------------------------------------------------- gap scan


def two_atom_cubic(a: float, z: complex) -> np.ndarray:
    """Coefficients (descending) of the cubic in w = z - G for atoms +-a, weights 1/2.

    G = (z - G) / ((z - G)^2 - a^2) becomes w^3 - z w^2 + (1 - a^2) w + z a^2 = 0.
    """
    return np.array([1.0, -z, 1.0 - a * a, z * a * a])


def cubic_discriminant_at_zero(a: float) -> float:
    """Discriminant of the z = 0 cubic, -4 (1 - a^2)^3.

    Negative (a complex pair, hence a band through 0) for a < 1 and positive
    (three real roots, a gap at 0) for a > 1.
    """
    _, b, c, d = two_atom_cubic(a, 0.0)
    # w^3 + b w^2 + c w + d
    return float(b * b * c * c - 4 * c ** 3 - 4 * b ** 3 * d - 27 * d * d + 18 * b * c * d)


def two_atom_critical_a() -> float:
    """Root of the z = 0 discriminant: the source strength at which the gap opens.

    The root is triple, so the sign change is located by bisection.
    """
    return optimize.bisect(cubic_discriminant_at_zero, 0.5, 2.0, xtol=1e-14, maxiter=200)


@dataclass(frozen=True)
class GapScan:
    a_grid: np.ndarray
    rho0: np.ndarray
    critical_a: float | None


def _rho0(a: float, epsilon: float) -> float:
    return float(pastur_density(SourceProfile.two_atom(a), [0.0], epsilon)[0])


def gap_scan(a_grid: Sequence[float], threshold: float = 1e-3, epsilon: float = 1e-8, xtol: float = 1e-7) -> GapScan:
    """rho(0) along the +-a family and the a at which it drops to zero.

    The onset is bracketed on the grid and refined by bisection on
    rho(0) > threshold. Near the critical point rho(0) ~ sqrt(1 - a^2)/pi,
    so the threshold biases the estimate by about (pi * threshold)^2 / 2.
    """
    a_grid = np.asarray(a_grid, dtype=float)
    if np.any(np.diff(a_grid) <= 0):
        raise ValueError("a_grid must be increasing")
    rho0 = np.array([_rho0(a, epsilon) for a in a_grid])
    open_ = rho0 > threshold
    critical = None
    for i in range(len(a_grid) - 1):
        if open_[i] and not open_[i + 1]:
            lo, hi = a_grid[i], a_grid[i + 1]
            while hi - lo > xtol:
                mid = 0.5 * (lo + hi)
                if _rho0(mid, epsilon) > threshold:
                    lo = mid
                else:
                    hi = mid
            critical = 0.5 * (lo + hi)
            break
    return GapScan(a_grid, rho0, critical)


# ------------------------------------------------------------ MC check


def pastur_weight_scale(beta: int) -> float:
    """weight_scale c giving the radius-2 semicircle used by the Pastur convention."""
    return 0.5 if beta == 1 else 1.0


def mc_validate(
    profile: SourceProfile,
    n: int,
    n_samples: int,
    beta: int = 2,
    seed: int = 0,
    bins: int = 60,
    workers: int = 1,
) -> float:
    """Sup-norm gap between an MC histogram and pastur_density.

    Bins within 5% of either end of the histogram range are ignored. The
    analytic density is averaged over each bin before comparing.
    """
    from .ensembles import EnsembleSpec, empirical_density, sample_spectra

    c = pastur_weight_scale(beta)
    shifted = SourceProfile(tuple((a * c, w) for a, w in profile.atoms))
    spec = EnsembleSpec(beta=beta, dim_n=n, weight_scale=c, source=shifted)
    eigs = sample_spectra(spec, n_samples, seed, workers=workers)
    half = float(np.max(np.abs(profile.locations))) + 2.6
    centers, dens = empirical_density(eigs, bins, (-half, half), beta=beta)
    width = centers[1] - centers[0]
    sub = np.linspace(-0.5, 0.5, 7)[1:-1] * width
    fine = pastur_density(profile, (centers[:, None] + sub[None, :]).ravel(), 1e-6)
    expected = fine.reshape(len(centers), len(sub)).mean(axis=1)
    margin = 0.05 * 2 * half
    interior = (centers > -half + margin) & (centers < half - margin)
    return float(np.max(np.abs(dens - expected)[interior]))
