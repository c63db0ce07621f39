"""Classical motion of a particle on the line.

Covers the sombrero flow and its phase portrait, the symmetry class of a
trajectory (whether its allowed region is mirror symmetric), and the local
model of a potential maximum: the leading even Taylor term
``-(gamma**2/(2n)) * (x - x_a)**(2n)`` and its two turning points.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import (
    AtSeparatrix,
    EnergyBelowMinimum,
    NoTurningPoints,
    NotAMaximum,
    SymbreakError,
    ToleranceAmbiguous,
    ValidationError,
)
from .numerics import PhaseState, find_root_bracketed, integrate_hamiltonian
from .qm1d import AsymmetricSinh, Sombrero

__all__ = [
    "PhaseState",
    "SymmetryClass",
    "Trajectory",
    "LocalMaxModel",
    "sombrero_potential",
    "sombrero_force",
    "asymmetric_demo_potential",
    "numerical_force",
    "local_max_model",
    "local_turning_points",
    "allowed_components",
    "classify_trajectory",
    "phase_portrait",
    "hamiltonian",
]


class SymmetryClass(enum.Enum):
    SYMMETRIC = "symmetric"
    ASYMMETRIC = "asymmetric"
    SEPARATRIX = "separatrix"

    def __str__(self):
        return self.value


@dataclass(frozen=True, eq=False)
class Trajectory:
    energy: float
    x: np.ndarray
    p: np.ndarray
    symmetry_class: SymmetryClass | None
    component_interval: tuple[float, float]
    error: str | None = None

    @property
    def points(self) -> list[PhaseState]:
        return [PhaseState(float(a), float(b)) for a, b in zip(self.x, self.p)]

    def __len__(self):
        return self.x.size


@dataclass(frozen=True)
class LocalMaxModel:
    x_a: float
    n: int
    gamma_sq: float
    v_at_max: float

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError("n must be >= 1")
        if not self.gamma_sq > 0:
            raise ValidationError("gamma_sq must be positive")

    def __call__(self, x):
        """The local model potential ``V(x_a) - gamma**2/(2n) (x - x_a)**(2n)``."""
        xp = np.asarray(x, dtype=float) - self.x_a
        return self.v_at_max - self.gamma_sq / (2 * self.n) * xp ** (2 * self.n)


def sombrero_potential(lam: float, mu: float) -> Sombrero:
    return Sombrero(lam, mu)


def sombrero_force(lam: float, mu: float) -> Callable:
    """``x -> 2 mu x - 4 lam x**3``."""
    return Sombrero(lam, mu).force


def asymmetric_demo_potential(nu: float, alpha: float) -> AsymmetricSinh:
    return AsymmetricSinh(nu, alpha)


def numerical_force(V: Callable, h: float = 1e-4) -> Callable:
    """``-V'`` by a fourth-order central difference."""

    def force(x):
        return -(8.0 * (V(x + h) - V(x - h)) - (V(x + 2 * h) - V(x - 2 * h))) / (12.0 * h)

    return force


def _fd_weights(order: int, offsets: np.ndarray) -> np.ndarray:
    # weights w with sum w_j f(x + s_j h) = h**order f^(order)(x) + O(h**len)
    n = offsets.size
    A = np.vander(offsets, n, increasing=True).T
    rhs = np.zeros(n)
    rhs[order] = math.factorial(order)
    return np.linalg.solve(A, rhs)


def _derivative(V, x0: float, order: int, h: float) -> tuple[float, float]:
    """Central FD estimate of ``V^(order)(x0)`` with one Richardson step.

    Returns the refined value and the size of the Richardson correction as
    an error estimate.
    """
    r = (order + 1) // 2
    offsets = np.arange(-r, r + 1, dtype=float)
    w = _fd_weights(order, offsets)

    def est(step):
        vals = np.array([float(V(x0 + s * step)) for s in offsets])
        return float(w @ vals) / step**order

    coarse, fine = est(h), est(h / 2)
    refined = (4.0 * fine - coarse) / 3.0
    return refined, abs(refined - fine)


def local_max_model(V: Callable, x_a: float, n_max: int = 4, h: float = 0.1) -> LocalMaxModel:
    """Leading even-order model of ``V`` around a local maximum ``x_a``.

    Finds the lowest derivative order ``j <= 2*n_max`` that does not vanish
    at ``x_a``. It must be even, ``j = 2n``, and negative; then
    ``gamma**2 = -2n * V^(2n)(x_a) / (2n)!``.

    A derivative counts as vanishing below ``1e-6`` times the largest
    derivative magnitude seen. Derivatives come from central differences
    with step ``h`` refined once by Richardson extrapolation.

    Raises
    ------
    NotAMaximum
        Leading derivative odd or positive, or none found up to ``2*n_max``.
    ToleranceAmbiguous
        The leading derivative is not resolved above its own error estimate.
    """
    if int(n_max) != n_max or n_max < 1:
        raise ValidationError("n_max must be a positive integer")
    derivs = [_derivative(V, x_a, j, h) for j in range(1, 2 * int(n_max) + 1)]
    scale = max(abs(d) for d, _ in derivs)
    if scale == 0.0:
        raise NotAMaximum(f"all derivatives up to order {2 * n_max} vanish at {x_a}")
    threshold = 1e-6 * scale
    for j, (d, err) in enumerate(derivs, start=1):
        if abs(d) <= threshold:
            continue
        if abs(d) <= 10.0 * err:
            raise ToleranceAmbiguous(
                f"derivative of order {j} at {x_a} is {d:.3e} with error {err:.1e}"
            )
        if j % 2 == 1:
            raise NotAMaximum(f"odd derivative of order {j} is nonzero at {x_a}")
        if d > 0:
            raise NotAMaximum(f"leading derivative of order {j} is positive at {x_a}")
        n = j // 2
        gamma_sq = -2 * n * d / math.factorial(2 * n)
        return LocalMaxModel(float(x_a), n, gamma_sq, float(V(x_a)))
    raise NotAMaximum(f"no non-vanishing derivative up to order {2 * n_max} at {x_a}")


def local_turning_points(model: LocalMaxModel, E_prime: float) -> tuple[float, float]:
    """Turning points ``-(x'), +(x')`` of the local model at energy ``E_prime``.

    ``E_prime`` is measured from ``V(x_a)``; the points solve
    ``x'**(2n) = -2n E_prime / gamma**2`` (a ``2n``-th root).
    """
    if E_prime == 0:
        raise AtSeparatrix("E' = 0: both turning points merge at the maximum")
    if E_prime > 0:
        raise NoTurningPoints(f"E' = {E_prime} > 0 passes over the maximum")
    r = (-2 * model.n * E_prime / model.gamma_sq) ** (1.0 / (2 * model.n))
    return (-r, r)


def _scan(V, E, lo, hi, n_scan):
    xs = np.linspace(lo, hi, n_scan)
    return xs, np.asarray(V(xs), dtype=float) - E


def allowed_components(
    V: Callable,
    E: float,
    scan_interval: tuple[float, float],
    n_scan: int = 4001,
    tol: float = 1e-12,
) -> list[tuple[float, float]]:
    """Connected pieces of ``{x : V(x) <= E}`` inside ``scan_interval``.

    Endpoints are refined turning points. A piece that reaches the edge of
    the scan interval is reported as unbounded on that side (``-inf`` or
    ``inf``).
    """
    lo, hi = scan_interval
    if not lo < hi:
        raise ValidationError("scan_interval must be increasing")
    xs, g = _scan(V, E, lo, hi, n_scan)
    allowed = g <= 0

    def root(i):
        # sign change between samples i and i+1
        return find_root_bracketed(lambda t: float(V(t)) - E, xs[i], xs[i + 1], tol)

    comps = []
    i = 0
    n = xs.size
    while i < n:
        if not allowed[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and allowed[j + 1]:
            j += 1
        left = -math.inf if i == 0 else (xs[i] if g[i] == 0 else root(i - 1))
        right = math.inf if j == n - 1 else (xs[j] if g[j] == 0 else root(j))
        comps.append((left, right))
        i = j + 1
    return comps


def _local_maxima(V, lo, hi, n_scan=2001):
    xs = np.linspace(lo, hi, n_scan)
    v = np.asarray(V(xs), dtype=float)
    out = []
    for i in range(1, n_scan - 1):
        if v[i] >= v[i - 1] and v[i] >= v[i + 1] and (v[i] > v[i - 1] or v[i] > v[i + 1]):
            res = minimize_scalar(
                lambda t: -float(V(t)), bounds=(xs[i - 1], xs[i + 1]), method="bounded",
                options={"xatol": 1e-12},
            )
            cand = [(float(V(xs[i])), xs[i]), (-res.fun, float(res.x))]
            out.append(max(cand))
    return out


def _classify_component(V, E, comp, axis, scan_interval, root_tol=1e-8, sep_tol=1e-9):
    lo, hi = comp
    inner_lo = scan_interval[0] if math.isinf(lo) else lo
    inner_hi = scan_interval[1] if math.isinf(hi) else hi
    e_scale = max(abs(E), 1.0)
    for v_max, _ in _local_maxima(V, inner_lo, inner_hi):
        if abs(v_max - E) <= sep_tol * e_scale:
            return SymmetryClass.SEPARATRIX
    if math.isinf(lo) and math.isinf(hi):
        return SymmetryClass.SYMMETRIC
    if math.isinf(lo) or math.isinf(hi):
        return SymmetryClass.ASYMMETRIC
    scale = max(abs(lo), abs(hi), 1.0)
    if abs((2 * axis - hi) - lo) <= root_tol * scale and abs((2 * axis - lo) - hi) <= root_tol * scale:
        return SymmetryClass.SYMMETRIC
    return SymmetryClass.ASYMMETRIC


def classify_trajectory(
    V: Callable,
    E: float,
    x0: float,
    axis: float = 0.0,
    scan_interval: tuple[float, float] = (-10.0, 10.0),
) -> SymmetryClass:
    """Symmetry class of the orbit at energy ``E`` through ``x0``.

    The orbit explores the connected component of ``{V <= E}`` that contains
    ``x0``. It is a separatrix if a local maximum of ``V`` inside that
    component sits at height ``E``; otherwise it is symmetric when the
    component is its own mirror image about ``axis``.
    """
    if not scan_interval[0] <= x0 <= scan_interval[1]:
        raise ValidationError("x0 must lie inside scan_interval")
    if float(V(x0)) > E:
        raise EnergyBelowMinimum(f"V({x0}) = {float(V(x0))} exceeds E = {E}")
    for comp in allowed_components(V, E, scan_interval):
        if comp[0] <= x0 <= comp[1]:
            return _classify_component(V, E, comp, axis, scan_interval)
    raise EnergyBelowMinimum(f"no classically allowed region at {x0} for E = {E}")


def phase_portrait(
    V: Callable,
    m: float,
    energies: Sequence[float],
    scan_interval: tuple[float, float],
    dt: float = 1e-3,
    steps: int = 10_000,
    force: Callable | None = None,
    axis: float = 0.0,
) -> list[Trajectory]:
    """One trajectory per energy and allowed component, in input order.

    Bounded components start at their left turning point with ``p = 0``;
    unbounded ones start at ``x = axis`` (or the midpoint of the scan
    interval if the axis is forbidden) moving right. A trajectory whose
    integration fails carries the message in ``error`` and no points; the
    rest of the portrait is unaffected.
    """
    force = force or getattr(V, "force", None) or numerical_force(V)
    out = []
    for E in energies:
        E = float(E)
        for comp in allowed_components(V, E, scan_interval):
            lo, hi = comp
            try:
                cls = _classify_component(V, E, comp, axis, scan_interval)
                if math.isfinite(lo) and math.isfinite(hi):
                    start = PhaseState(lo, 0.0)
                else:
                    x_start = axis if lo <= axis <= hi else 0.5 * (max(lo, scan_interval[0]) + min(hi, scan_interval[1]))
                    start = PhaseState(x_start, math.sqrt(max(2 * m * (E - float(V(x_start))), 0.0)))
                xs, ps = integrate_hamiltonian(force, m, start, dt, steps)
                out.append(Trajectory(E, xs, ps, cls, comp))
            except SymbreakError as exc:
                out.append(Trajectory(E, np.empty(0), np.empty(0), None, comp, str(exc)))
    return out


def hamiltonian(V: Callable, m: float, x, p):
    return np.asarray(p) ** 2 / (2 * m) + np.asarray(V(x), dtype=float)
