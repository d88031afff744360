"""Bulk gap probabilities E(s) by Fredholm determinants and by a Hamiltonian ODE.

Two kernel conventions are supported:

* ``unit``: K(x, y) = sin(pi(x - y)) / (pi(x - y)), mean spacing 1.
* ``piless``: K(x, y) = sin(x - y) / (x - y), as in many older references.

Route 1 discretizes det(1 - K) on an interval with Gauss-Legendre nodes.
Route 2 integrates the system

    Q' = P (1 - 2 Q^2 / b),    P' = Q (2 P^2 / b - 1)

from b0 with the series P = c + 2c^3 b + ..., Q = c b + ..., and forms

    H(b, b) = P^2 + Q^2 - 2 P^2 Q^2 / b,    H(b, -b) = P Q / b.

With c = 1 this reproduces the piless kernel; the unit kernel is c = 1/sqrt(pi)
with lengths multiplied by pi. For the unit kernel and an interval of length s,

    D_pm(s) = exp(-(kappa/2) int_0^{pi s / kappa} [H(b, b) pm H(b, -b)] db)

are the even/odd parity determinants, and
E_GUE = D_+ D_-, E_GOE = D_+, E_GSE(s) = (D_+(2s) + D_-(2s)) / 2.
kappa is the argument map z -> z / kappa, fixed by `calibrate_argument_map`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

CONVENTIONS = ("unit", "piless")
ENSEMBLES = ("gue", "goe", "gse")
ROUTES = ("nystrom", "hamiltonian")
S_MAX = 3.0
DEFAULT_STEP = 1e-4
DEFAULT_B0 = 1e-3
BLOWUP = 1e6
PILESS_B_MAX = 0.5


class OrderTooSmallWarning(RuntimeWarning):
    pass


class GridTooCoarseWarning(RuntimeWarning):
    pass


class SpacingIntegrationError(ArithmeticError):
    pass


def _omega(convention: str) -> float:
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    return math.pi if convention == "unit" else 1.0


# ------------------------------------------------------------- Nystrom


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    interval: tuple[float, float]

    def __post_init__(self):
        a, b = self.interval
        if not b > a:
            raise ValueError("empty interval")
        if np.any(self.weights <= 0):
            raise ValueError("weights must be positive")
        if np.any(self.nodes <= a) or np.any(self.nodes >= b):
            raise ValueError("nodes must lie strictly inside the interval")
        if abs(self.weights.sum() - (b - a)) > 1e-12 * max(1.0, b - a):
            raise ValueError("weights must sum to the interval length")

    @classmethod
    def gauss_legendre(cls, order: int, a: float, b: float) -> "QuadratureRule":
        x, w = np.polynomial.legendre.leggauss(order)
        half = 0.5 * (b - a)
        return cls(a + half * (x + 1), half * w, (a, b))


def _sine(u: np.ndarray, convention: str) -> np.ndarray:
    om = _omega(convention)
    return np.sinc(om * u / math.pi)  # np.sinc(t) = sin(pi t)/(pi t)


def _fredholm(kernel, rule: QuadratureRule) -> float:
    sw = np.sqrt(rule.weights)
    k = kernel(rule.nodes[:, None], rule.nodes[None, :])
    return float(np.linalg.det(np.eye(len(sw)) - sw[:, None] * k * sw[None, :]))


def _checked(compute, order: int, what: str) -> float:
    if order < 10:
        raise ValueError("order must be at least 10")
    val = compute(order)
    if abs(compute(2 * order) - val) > 1e-8:
        warnings.warn(f"{what}: order {order} is too small", OrderTooSmallWarning)
    return val


def fredholm_e_gue(s: float, order: int = 40, convention: str = "unit") -> float:
    """det(1 - K) on [-s/2, s/2] by Nystrom discretization."""
    if not s > 0:
        raise ValueError("s must be positive")

    def compute(m):
        rule = QuadratureRule.gauss_legendre(m, -s / 2, s / 2)
        return _fredholm(lambda x, y: _sine(x - y, convention), rule)

    return _checked(compute, order, "fredholm_e_gue")


def fredholm_e_parity(s: float, parity: int, order: int = 40, convention: str = "unit") -> float:
    """det(1 - K(x - y) - parity K(x + y)) on (0, s/2); parity is +1 or -1."""
    if not s > 0:
        raise ValueError("s must be positive")
    if parity not in (1, -1):
        raise ValueError("parity must be +1 or -1")

    def compute(m):
        rule = QuadratureRule.gauss_legendre(m, 0.0, s / 2)
        return _fredholm(lambda x, y: _sine(x - y, convention) + parity * _sine(x + y, convention), rule)

    return _checked(compute, order, "fredholm_e_parity")


def fredholm_e(ensemble: str, s: float, order: int = 40, convention: str = "unit") -> float:
    if ensemble == "gue":
        return fredholm_e_gue(s, order, convention)
    if ensemble == "goe":
        return fredholm_e_parity(s, 1, order, convention)
    if ensemble == "gse":
        return 0.5 * (fredholm_e_parity(2 * s, 1, order, convention) + fredholm_e_parity(2 * s, -1, order, convention))
    raise ValueError(f"ensemble must be one of {ENSEMBLES}")


# ----------------------------------------------------------- Hamiltonian


@dataclass(frozen=True)
class HamiltonianState:
    b: float
    P: float
    Q: float

    def __post_init__(self):
        if not self.b > 0:
            raise ValueError("b must be positive")
        if not (math.isfinite(self.P) and math.isfinite(self.Q)):
            raise ValueError("non-finite state")

    @property
    def h_diag(self) -> float:
        return self.P ** 2 + self.Q ** 2 - 2 * self.P ** 2 * self.Q ** 2 / self.b

    @property
    def h_off(self) -> float:
        return self.P * self.Q / self.b


def series_coefficients(c: float = 1.0) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Taylor coefficients (P0..P3), (Q0..Q3) of the regular solution with P(0) = c.

    For c = 1 these are P = 1 + 2b + 7/2 b^2 + 65/9 b^3 and Q = b - b^3/6,
    i.e. 1 + s + 7/8 s^2 + 65/72 s^3 and s/2 - s^3/48 in s = 2b.
    """
    q1, q3 = c, -c / 6
    p1 = 2 * c ** 3
    p2 = (8 * c ** 5 - c) / 2
    p3 = 2 * ((p1 * p1 + 2 * c * p2) * q1 + c * c * q3) / 3
    return (c, p1, p2, p3), (0.0, q1, 0.0, q3)


def series_state(b: float, c: float = 1.0) -> HamiltonianState:
    p, q = series_coefficients(c)
    return HamiltonianState(b, sum(a * b ** j for j, a in enumerate(p)), sum(a * b ** j for j, a in enumerate(q)))


def _rhs(b: float, y: tuple[float, float, float, float]) -> tuple[float, float, float, float]:
    p, q = y[0], y[1]
    pq_b = p * q / b
    return (
        q * (2 * p * p / b - 1),
        p * (1 - 2 * q * q / b),
        p * p + q * q - 2 * pq_b * p * q,
        pq_b,
    )


def _rk4(b: float, y, h: float):
    k1 = _rhs(b, y)
    k2 = _rhs(b + h / 2, tuple(yi + h / 2 * ki for yi, ki in zip(y, k1)))
    k3 = _rhs(b + h / 2, tuple(yi + h / 2 * ki for yi, ki in zip(y, k2)))
    k4 = _rhs(b + h, tuple(yi + h * ki for yi, ki in zip(y, k3)))
    return tuple(yi + h / 6 * (a + 2 * bb + 2 * cc + d) for yi, a, bb, cc, d in zip(y, k1, k2, k3, k4))


@dataclass(frozen=True)
class Trajectory:
    """RK4 solution on a uniform grid; columns of `y` are P, Q, int H(b,b), int H(b,-b)."""

    b: np.ndarray
    y: np.ndarray
    step: float
    amplitude: float

    def state(self, b: float) -> tuple[float, float, float, float]:
        """Exact RK4 value at b: the nearest stored state plus one partial step."""
        if not self.b[0] <= b <= self.b[-1] + 1e-12:
            raise ValueError(f"b={b} outside the integrated range [{self.b[0]}, {self.b[-1]}]")
        i = min(int(np.searchsorted(self.b, b, side="right")) - 1, len(self.b) - 1)
        h = b - self.b[i]
        y = tuple(self.y[i])
        return y if h <= 0 else _rk4(self.b[i], y, h)

    def states(self) -> list[HamiltonianState]:
        return [HamiltonianState(float(b), float(p), float(q)) for b, (p, q, _, _) in zip(self.b, self.y)]

    def h_values(self) -> tuple[np.ndarray, np.ndarray]:
        p, q, b = self.y[:, 0], self.y[:, 1], self.b
        return p * p + q * q - 2 * p * p * q * q / b, p * q / b


def _initial_integrals(b0: float, c: float) -> tuple[float, float]:
    x, w = np.polynomial.legendre.leggauss(8)
    bs = 0.5 * b0 * (x + 1)
    hd = ho = 0.0
    for bi, wi in zip(bs, w):
        st = series_state(bi, c)
        hd += 0.5 * b0 * wi * st.h_diag
        ho += 0.5 * b0 * wi * st.h_off
    return hd, ho


def tw_integrate(b_max: float, step: float = DEFAULT_STEP, amplitude: float = 1.0, b0: float = DEFAULT_B0) -> Trajectory:
    """Integrate the Hamiltonian system from b0 to b_max with fixed-step RK4.

    The running integrals of H(b, b) and H(b, -b) are carried as extra states.
    """
    if not step <= 1e-3:
        raise ValueError("step must be at most 1e-3")
    if not b_max > b0:
        raise ValueError("b_max must exceed b0")
    if b_max > S_MAX * math.pi + 1e-9:
        raise ValueError(f"b_max beyond the validated range {S_MAX * math.pi:.4f}")
    start = series_state(b0, amplitude)
    y = (start.P, start.Q, *_initial_integrals(b0, amplitude))
    n = int(math.ceil((b_max - b0) / step))
    bs = b0 + step * np.arange(n + 1)
    out = np.empty((n + 1, 4))
    out[0] = y
    for i in range(n):
        y = _rk4(bs[i], y, step)
        if abs(y[0]) > BLOWUP or abs(y[1]) > BLOWUP or not all(map(math.isfinite, y)):
            raise SpacingIntegrationError(f"solution blew up near b={bs[i + 1]:.4g}")
        out[i + 1] = y
    return Trajectory(bs, out, step, amplitude)


@lru_cache(maxsize=16)
def _trajectory(convention: str, step: float, b0: float) -> Trajectory:
    if convention == "unit":
        # long enough for the GSE argument 2 s at s = S_MAX
        return tw_integrate(S_MAX * math.pi, step, 1 / math.sqrt(math.pi), b0)
    # the piless kernel has norm above 1 and det(1 - K) reaches 0 near b = 0.515,
    # where the solution is singular; only small intervals are meaningful there
    return tw_integrate(PILESS_B_MAX, step, 1.0, b0)


@lru_cache(maxsize=4)
def calibrate_argument_map(convention: str = "unit", s_ref: float = 1.0) -> int:
    """Choose kappa in {1, 2} for E = exp(-int_0^s H(z/kappa, z/kappa) dz) by
    comparing with the Nystrom determinant at s_ref."""
    target = fredholm_e_gue(s_ref, 40, convention)
    errs = {}
    for kappa in (1, 2):
        try:
            errs[kappa] = abs(_parity_pair(s_ref, convention, kappa)[2] - target)
        except ValueError:
            errs[kappa] = math.inf
    return min(errs, key=errs.get)


def _parity_pair(s: float, convention: str, kappa: int, step: float = DEFAULT_STEP, b0: float = DEFAULT_B0):
    traj = _trajectory(convention, step, b0)
    b = _omega(convention) * s / kappa
    if b <= b0:
        # below the starting point use the series integrals directly
        idiag, ioff = _initial_integrals(b, traj.amplitude)
    else:
        _, _, idiag, ioff = traj.state(b)
    d_plus = math.exp(-kappa / 2 * (idiag + ioff))
    d_minus = math.exp(-kappa / 2 * (idiag - ioff))
    return d_plus, d_minus, d_plus * d_minus


def _check_s(s: float, limit: float = S_MAX):
    if not 0 <= s <= limit:
        raise ValueError(f"s must lie in [0, {limit}]")


def e_gue_ode(s: float, convention: str = "unit", step: float = DEFAULT_STEP, b0: float = DEFAULT_B0) -> float:
    """exp(-int_0^s H(z/kappa, z/kappa) dz) along the trajectory."""
    _check_s(s)
    if s == 0:
        return 1.0
    return _parity_pair(s, convention, calibrate_argument_map(convention), step, b0)[2]


def e_goe(s: float, convention: str = "unit", step: float = DEFAULT_STEP, b0: float = DEFAULT_B0) -> float:
    """exp(-(1/2) int_0^s [H(z, z) + H(z, -z)] dz), arguments mapped by kappa."""
    _check_s(s)
    if s == 0:
        return 1.0
    return _parity_pair(s, convention, calibrate_argument_map(convention), step, b0)[0]


def e_gse(s: float, convention: str = "unit", step: float = DEFAULT_STEP, b0: float = DEFAULT_B0) -> float:
    """E(s/2) = (1/2)[exp(-(1/2) int_0^s (H+ + H-)) + exp(-(1/2) int_0^s (H+ - H-))], solved for E(s)."""
    _check_s(s)
    if s == 0:
        return 1.0
    d_plus, d_minus, _ = _parity_pair(2 * s, convention, calibrate_argument_map(convention), step, b0)
    return 0.5 * (d_plus + d_minus)


_ODE = {"gue": e_gue_ode, "goe": e_goe, "gse": e_gse}


# ------------------------------------------------------------- curves


@dataclass(frozen=True)
class SpacingCurve:
    s_grid: np.ndarray
    e_values: np.ndarray
    route: str
    ensemble: str
    convention: str = "unit"

    def __post_init__(self):
        if self.route not in ROUTES:
            raise ValueError(f"route must be one of {ROUTES}")
        if self.ensemble not in ENSEMBLES:
            raise ValueError(f"ensemble must be one of {ENSEMBLES}")
        if len(self.s_grid) != len(self.e_values):
            raise ValueError("grid and values differ in length")
        if np.any(np.diff(self.s_grid) <= 0):
            raise ValueError("s_grid must be increasing")


def spacing_curve(
    ensemble: str, s_grid: Sequence[float], route: str = "hamiltonian", convention: str = "unit", order: int = 40
) -> SpacingCurve:
    s_grid = np.asarray(s_grid, dtype=float)
    if route == "hamiltonian":
        fn = _ODE[ensemble]
        vals = [fn(s, convention) for s in s_grid]
    elif route == "nystrom":
        vals = [1.0 if s == 0 else fredholm_e(ensemble, s, order, convention) for s in s_grid]
    else:
        raise ValueError(f"route must be one of {ROUTES}")
    return SpacingCurve(s_grid, np.array(vals), route, ensemble, convention)


def spacing_density(curve: SpacingCurve) -> np.ndarray:
    """p(s) = E''(s): central second differences, second-order one-sided at the ends."""
    s, e = curve.s_grid, curve.e_values
    if len(s) < 5:
        raise ValueError("need at least 5 grid points")
    h = s[1] - s[0]
    if np.max(np.abs(np.diff(s) - h)) > 1e-9 * max(1.0, abs(h)):
        raise ValueError("grid must be uniform")
    if h > 0.05:
        warnings.warn(f"grid spacing {h} is coarse for a second derivative", GridTooCoarseWarning)
    p = np.empty_like(e)
    p[1:-1] = (e[2:] - 2 * e[1:-1] + e[:-2]) / (h * h)
    p[0] = (2 * e[0] - 5 * e[1] + 4 * e[2] - e[3]) / (h * h)
    p[-1] = (2 * e[-1] - 5 * e[-2] + 4 * e[-3] - e[-4]) / (h * h)
    return p


def fit_cubic_coefficient(ensemble: str = "goe", convention: str = "unit", s_lo: float = 0.05, s_hi: float = 0.2, points: int = 16) -> float:
    """Least-squares a3 in E(s) - 1 + s = a3 s^3 + a4 s^4 + a5 s^5 on [s_lo, s_hi]."""
    s = np.linspace(s_lo, s_hi, points)
    y = np.array([_ODE[ensemble](t, convention) for t in s]) - 1 + s
    design = np.stack([s ** 3, s ** 4, s ** 5], axis=1)
    return float(np.linalg.lstsq(design, y, rcond=None)[0][0])
