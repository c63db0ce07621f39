"""Exact bound states of the square double well.

The well has hard walls at ``|x| = a`` and a central barrier of height
``alpha`` on ``|x| <= b``. Below the barrier the levels are roots of

    g(E) = k cot(k (a - b)) + kappa t(kappa b),
    k = sqrt(2 m E)/hbar,  kappa = sqrt(2 m (alpha - E))/hbar,

with ``t = tanh`` for even and ``t = coth`` for odd states. ``g`` is kept
unsquared: squaring admits spurious roots where ``cot`` has the wrong sign.
Between consecutive poles of ``cot`` the function ``g`` is strictly
decreasing, so each pole interval holds at most one even and one odd root,
the even one lower.

As ``alpha -> inf`` the pair collapses onto the single-well level
``E_n = (pi hbar n)**2 / (2 m (a - b)**2)``; the limit potential has
degenerate states confined to either well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import BracketFailure, MatchingMismatch, OutOfRange, ValidationError
from .numerics import Grid, TabulatedState, find_root_bracketed
from .qm1d import Parity

INFINITE = math.inf

__all__ = [
    "INFINITE",
    "WellParams",
    "WellLevel",
    "ConcentratedStates",
    "GapEntry",
    "matching_residual",
    "squared_condition",
    "levels_below_barrier",
    "limit_levels",
    "threshold_alpha",
    "matching_jumps",
    "assemble_wavefunction",
    "infinite_barrier_states",
    "parity_gap_sweep",
]


@dataclass(frozen=True)
class WellParams:
    a: float
    b: float
    alpha: float = INFINITE
    hbar: float = 1.0
    m: float = 1.0

    def __post_init__(self):
        for name in ("a", "b", "hbar", "m"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValidationError(f"{name} must be positive and finite, got {v}")
        if not self.b < self.a:
            raise ValidationError(f"need 0 < b < a, got a={self.a}, b={self.b}")
        if not self.alpha > 0:
            raise ValidationError(f"alpha must be positive, got {self.alpha}")

    @property
    def width(self) -> float:
        return self.a - self.b

    @property
    def finite(self) -> bool:
        return math.isfinite(self.alpha)

    def k(self, E):
        return np.sqrt(2.0 * self.m * E) / self.hbar

    def kappa(self, E):
        return np.sqrt(2.0 * self.m * (self.alpha - E)) / self.hbar

    def pole_energy(self, j: int) -> float:
        """Energy where ``k (a - b) = j pi``."""
        return (j * math.pi * self.hbar / self.width) ** 2 / (2.0 * self.m)


@dataclass(frozen=True)
class WellLevel:
    n: int
    parity: Parity
    energy: float
    below_barrier: bool = True


def _parity(parity) -> Parity:
    p = Parity(parity) if not isinstance(parity, Parity) else parity
    if p is Parity.INDEFINITE:
        raise ValidationError("parity must be even or odd")
    return p


def matching_residual(E: float, parity, params: WellParams) -> float:
    """Unsquared matching function ``g(E)``; its zeros in ``(0, alpha)`` are the levels."""
    p = _parity(parity)
    if not params.finite:
        raise ValidationError("matching_residual needs a finite barrier")
    if not 0.0 < E < params.alpha:
        raise OutOfRange(f"E = {E} outside (0, alpha = {params.alpha})")
    k = params.k(E)
    kap = params.kappa(E)
    kb = kap * params.b
    t = math.tanh(kb) if p is Parity.EVEN else 1.0 / math.tanh(kb)
    return float(k / math.tan(k * params.width) + kap * t)


def squared_condition(E: float, parity, params: WellParams) -> float:
    """Relative mismatch of the squared condition
    ``E cot**2(k (a-b)) = (alpha - E) t**2(kappa b)``."""
    p = _parity(parity)
    k = params.k(E)
    kb = params.kappa(E) * params.b
    t = math.tanh(kb) if p is Parity.EVEN else 1.0 / math.tanh(kb)
    lhs = E / math.tan(k * params.width) ** 2
    rhs = (params.alpha - E) * t**2
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs))


def levels_below_barrier(
    params: WellParams, n_max: int | None = None, tol: float = 1e-13
) -> list[WellLevel]:
    """All sub-barrier levels, ascending, up to ``n_max`` even/odd pairs.

    Each interval between consecutive poles of ``cot(k (a - b))`` is searched
    once per parity. Pair ``n`` lives in the ``n``-th interval. The last pair
    may be incomplete when the barrier top cuts through its interval.
    """
    if not params.finite:
        raise ValidationError("use limit_levels for an infinite barrier")
    levels = []
    alpha = params.alpha
    j = 1
    while n_max is None or j <= n_max:
        e_lo = params.pole_energy(j - 1)
        if e_lo >= alpha:
            break
        e_hi = params.pole_energy(j)
        pad = 1e-13 * e_hi
        lo = e_lo + pad if j > 1 else min(pad, 0.5 * alpha)
        hi = min(e_hi, alpha) - pad
        if hi <= lo:
            break
        for parity in (Parity.EVEN, Parity.ODD):
            g = lambda E, p=parity: matching_residual(E, p, params)
            if g(lo) > 0 > g(hi):
                E = find_root_bracketed(g, lo, hi, tol * max(1.0, e_hi))
                levels.append(WellLevel(j, parity, E, True))
        j += 1
    levels.sort(key=lambda lv: lv.energy)
    return levels


def limit_levels(a: float, b: float, hbar: float = 1.0, m: float = 1.0, n: int = 1) -> float:
    """Doubly degenerate level ``n`` of the infinite-barrier double well."""
    if int(n) != n or n < 1:
        raise ValidationError("n must be a positive integer")
    p = WellParams(a, b, INFINITE, hbar, m)
    return (math.pi * hbar * n) ** 2 / (2.0 * m * p.width**2)


def threshold_alpha(
    a: float,
    b: float,
    hbar: float = 1.0,
    m: float = 1.0,
    alpha_range: tuple[float, float] = (1e-8, 1e12),
    rtol: float = 1e-12,
) -> float:
    """Barrier height ``alpha_0`` at which the ground level touches the barrier top.

    Below ``alpha_0`` no level lies under the barrier; above it at least one
    does. Found by bisection in ``log(alpha)`` on that dichotomy.
    """

    def has_level(alpha):
        return bool(levels_below_barrier(WellParams(a, b, alpha, hbar, m), n_max=1))

    lo, hi = alpha_range
    if has_level(lo) or not has_level(hi):
        raise BracketFailure(f"no threshold crossing for alpha in [{lo:g}, {hi:g}]")
    while hi - lo > rtol * hi:
        mid = math.sqrt(lo * hi) if hi / lo > 4 else 0.5 * (lo + hi)
        if has_level(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _inner_factor(parity, kap, x_abs, b):
    # cosh(kap x)/cosh(kap b) or sinh(kap |x|)/sinh(kap b), overflow-safe
    d = kap * (x_abs - b)
    if parity is Parity.EVEN:
        return np.exp(d) * (1.0 + np.exp(-2.0 * kap * x_abs)) / (1.0 + math.exp(-2.0 * kap * b))
    return np.exp(d) * (1.0 - np.exp(-2.0 * kap * x_abs)) / (1.0 - math.exp(-2.0 * kap * b))


def matching_jumps(level: WellLevel, params: WellParams) -> tuple[float, float]:
    """Relative jumps in value and slope of the assembled state at ``x = b``."""
    k = params.k(level.energy)
    kap = params.kappa(level.energy)
    kL = k * params.width
    kb = kap * params.b
    # outer piece sin(k (a - x)); inner piece scaled to match the value at b
    out_val, out_slope = math.sin(kL), -k * math.cos(kL)
    in_val = math.sin(kL)
    t = math.tanh(kb) if level.parity is Parity.EVEN else 1.0 / math.tanh(kb)
    in_slope = math.sin(kL) * kap * t
    scale = max(k, kap) * max(abs(math.sin(kL)), abs(math.cos(kL)))
    return abs(out_val - in_val) / max(abs(out_val), 1e-300), abs(out_slope - in_slope) / scale


def assemble_wavefunction(
    level: WellLevel, params: WellParams, grid: Grid, tol: float = 1e-8
) -> TabulatedState:
    """Piecewise closed-form eigenfunction of a sub-barrier level, normalised on ``grid``.

    Outside the barrier it is ``sin(k (a - |x|))`` (times ``sign(x)`` for odd
    states); inside it is ``cosh(kappa x)`` or ``sinh(kappa x)`` scaled to
    match at ``|x| = b``. Values beyond the walls are zero.
    """
    if not params.finite:
        raise ValidationError("finite barrier required; see infinite_barrier_states")
    if grid.x_min > -params.a + 1e-12 or grid.x_max < params.a - 1e-12:
        raise ValidationError("grid must span [-a, a]")
    jumps = matching_jumps(level, params)
    if max(jumps) > tol:
        raise MatchingMismatch(
            f"level E={level.energy} does not satisfy the matching conditions (jumps {jumps})"
        )
    x = grid.x
    ax = np.abs(x)
    k = params.k(level.energy)
    kap = params.kappa(level.energy)
    sgn = np.sign(x) if level.parity is Parity.ODD else np.ones_like(x)
    psi = np.zeros_like(x)
    outer = (ax > params.b) & (ax < params.a)
    psi[outer] = np.sin(k * (params.a - ax[outer])) * sgn[outer]
    inner = ax <= params.b
    psi[inner] = math.sin(k * params.width) * _inner_factor(level.parity, kap, ax[inner], params.b) * sgn[inner]
    label = f"{level.parity} n={level.n} E={level.energy:.6g}"
    return TabulatedState(grid, psi, label).normalized()


class ConcentratedStates(NamedTuple):
    psi_L: TabulatedState
    psi_R: TabulatedState
    psi_plus: TabulatedState
    psi_minus: TabulatedState


def infinite_barrier_states(
    n: int, a: float, b: float, grid: Grid, as_printed: bool = False
) -> ConcentratedStates:
    """Degenerate pair ``n`` of the infinite-barrier well in two bases.

    ``psi_L`` and ``psi_R`` are confined to the left and right wells.
    ``psi_plus`` and ``psi_minus`` are ``(psi_L +/- psi_R)/sqrt(2)``.

    By default ``psi_R`` is the mirror image of ``psi_L``,
    ``sqrt(2/(a-b)) sin(pi n (a - x)/(a - b))``, so that ``psi_plus`` is even
    and ``psi_minus`` odd. ``as_printed=True`` uses
    ``sin(pi n (x - a)/(a - b))`` instead, which differs by a global sign and
    swaps the parities of the two superpositions.
    """
    if int(n) != n or n < 1:
        raise ValidationError("n must be a positive integer")
    params = WellParams(a, b)
    L = params.width
    amp = math.sqrt(2.0 / L)
    x = grid.x
    left = (x > -a) & (x < -b)
    right = (x > b) & (x < a)
    psi_l = np.where(left, amp * np.sin(math.pi * n * (x + a) / L), 0.0)
    r_arg = (x - a) if as_printed else (a - x)
    psi_r = np.where(right, amp * np.sin(math.pi * n * r_arg / L), 0.0)
    s = 1.0 / math.sqrt(2.0)
    return ConcentratedStates(
        TabulatedState(grid, psi_l, f"L{n}"),
        TabulatedState(grid, psi_r, f"R{n}"),
        TabulatedState(grid, s * (psi_l + psi_r), f"+{n}"),
        TabulatedState(grid, s * (psi_l - psi_r), f"-{n}"),
    )


def _residual_slope(E: float, parity: Parity, params: WellParams) -> float:
    """``dg/dE`` at ``E``."""
    k, kap = params.k(E), params.kappa(E)
    kL, kb = k * params.width, kap * params.b
    dk = params.m / (params.hbar**2 * k)
    dkap = -params.m / (params.hbar**2 * kap)
    outer = dk * (1.0 / math.tan(kL) - kL / math.sin(kL) ** 2)
    if parity is Parity.EVEN:
        inner = dkap * (math.tanh(kb) + kb / math.cosh(kb) ** 2)
    else:
        inner = dkap * (1.0 / math.tanh(kb) - kb / math.sinh(kb) ** 2)
    return outer + inner


def _small_gap(E_even: float, params: WellParams) -> float:
    # g_odd - g_even = kappa (coth - tanh) = 4 kappa e^{-2 kappa b} / (1 - e^{-4 kappa b})
    kap = params.kappa(E_even)
    q = math.exp(-2.0 * kap * params.b)
    delta_g = 4.0 * kap * q / (1.0 - q * q)
    return -delta_g / _residual_slope(E_even, Parity.EVEN, params)


class GapEntry(NamedTuple):
    alpha: float
    gap: float | None
    even: float | None
    odd: float | None
    missing: bool


def parity_gap_sweep(
    alpha_values: Sequence[float],
    n: int,
    a: float,
    b: float,
    hbar: float = 1.0,
    m: float = 1.0,
) -> list[GapEntry]:
    """Odd-minus-even splitting of pair ``n`` for each barrier height, in input order.

    Entries where the pair is not complete below the barrier have
    ``missing=True`` and ``gap=None``. When the splitting is below about
    ``1e-9`` of the level it is no longer resolved by the difference of two
    double-precision roots; it is then taken to first order from the even
    root as ``(g_odd - g_even)/(-dg/dE)``, whose relative error is of the
    order of the gap itself. It underflows to zero once ``kappa*b``
    exceeds about 350.
    """
    out = []
    for alpha in alpha_values:
        levels = levels_below_barrier(WellParams(a, b, float(alpha), hbar, m), n_max=n)
        pair = {lv.parity: lv.energy for lv in levels if lv.n == n}
        if len(pair) < 2:
            out.append(GapEntry(float(alpha), None, pair.get(Parity.EVEN), pair.get(Parity.ODD), True))
            continue
        e, o = pair[Parity.EVEN], pair[Parity.ODD]
        params = WellParams(a, b, float(alpha), hbar, m)
        gap = o - e
        if gap < 1e-9 * abs(e):
            gap = _small_gap(e, params)
        out.append(GapEntry(float(alpha), gap, e, o, False))
    return out
