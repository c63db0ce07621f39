"""Grid-based one-dimensional Schrodinger eigenproblems.

Potentials are small frozen dataclasses that evaluate on arrays. The
Hamiltonian is the three-point finite-difference operator on the interior
points of a :class:`~symbreak.numerics.Grid`; the two end points are hard
walls where every eigenfunction vanishes.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import NotNormalized, PotentialNotSymmetric, ValidationError
from .numerics import (
    Grid,
    TabulatedState,
    TridiagonalOperator,
    eig_sym_tridiag,
    inner_product,
)

log = logging.getLogger(__name__)

__all__ = [
    "Parity",
    "Potential",
    "Sombrero",
    "Sextic",
    "Harmonic",
    "DoubleOscillator",
    "PiecewiseDoubleWell",
    "AsymmetricSinh",
    "Tabulated",
    "Level",
    "Spectrum",
    "ParityResult",
    "AuditReport",
    "SexticGroundCheck",
    "build_hamiltonian",
    "solve_spectrum",
    "classify_parity",
    "expectation_x",
    "annihilation_residual",
    "sextic_ground_check",
    "parity_audit",
]


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"
    INDEFINITE = "indefinite"

    def __str__(self):
        return self.value


def _positive(name, value):
    if not (value > 0 and math.isfinite(value)):
        raise ValidationError(f"{name} must be positive and finite, got {value}")


class Potential:
    """Base class: a potential energy ``V(x)`` evaluated on arrays.

    ``hard_walls`` marks potentials whose infinite walls coincide with the
    edges of the box, so that vanishing boundary values are physical rather
    than a truncation (no leakage check applies).
    """

    hard_walls = False
    confining = True
    discontinuous = False

    def __call__(self, x):
        raise NotImplementedError

    def cell_average(self, x, dx):
        """Mean of ``V`` over ``[x - dx/2, x + dx/2]`` (Simpson's rule)."""
        x = np.asarray(x, dtype=float)
        return (self(x - 0.5 * dx) + 4.0 * self(x) + self(x + 0.5 * dx)) / 6.0

    @property
    def descriptor(self) -> str:
        fields = ", ".join(f"{k}={v:g}" for k, v in vars(self).items() if isinstance(v, (int, float)))
        return f"{type(self).__name__}({fields})"


@dataclass(frozen=True)
class Sombrero(Potential):
    """``lam*x**4 - mu*x**2``."""

    lam: float = 1.0
    mu: float = 1.0

    def __post_init__(self):
        _positive("lam", self.lam)
        _positive("mu", self.mu)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        x2 = x * x
        return self.lam * x2 * x2 - self.mu * x2

    def force(self, x):
        return 2.0 * self.mu * x - 4.0 * self.lam * x**3

    @property
    def minima(self):
        x_min = math.sqrt(self.mu / (2.0 * self.lam))
        return (-x_min, x_min)


@dataclass(frozen=True)
class Sextic(Potential):
    """``hbar**2/(2m) * (16 a**2 x**6 - 12 a x**2)``.

    The factor ``hbar**2/(2m)`` is part of the potential, so the ground
    state is ``exp(-a x**4)`` with energy exactly zero.
    """

    a: float = 1.0
    hbar: float = 1.0
    m: float = 1.0

    def __post_init__(self):
        _positive("a", self.a)
        _positive("hbar", self.hbar)
        _positive("m", self.m)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        x2 = x * x
        c = self.hbar**2 / (2.0 * self.m)
        return c * (16.0 * self.a**2 * x2**3 - 12.0 * self.a * x2)


@dataclass(frozen=True)
class Harmonic(Potential):
    """``m*omega**2*x**2/2 + shift``."""

    m: float = 1.0
    omega: float = 1.0
    shift: float = 0.0

    def __post_init__(self):
        _positive("m", self.m)
        _positive("omega", self.omega)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return 0.5 * self.m * self.omega**2 * x * x + self.shift


@dataclass(frozen=True)
class DoubleOscillator(Potential):
    """``m*omega**2*(|x| - a)**2``, taken as written (no factor 1/2).

    With this normalisation ``a = 0`` is a harmonic oscillator of angular
    frequency ``sqrt(2)*omega``; textbooks that include the 1/2 get
    ``omega`` instead.
    """

    m: float = 1.0
    omega: float = 1.0
    a: float = 1.0

    def __post_init__(self):
        _positive("m", self.m)
        _positive("omega", self.omega)
        if not (self.a >= 0 and math.isfinite(self.a)):
            raise ValidationError(f"a must be non-negative, got {self.a}")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.m * self.omega**2 * (np.abs(x) - self.a) ** 2


@dataclass(frozen=True)
class PiecewiseDoubleWell(Potential):
    """Barrier of height ``alpha`` on ``|x| <= b`` between walls at ``|x| = a``.

    The walls are not stored: evaluate this on a grid spanning ``[-a, a]``
    so that the Dirichlet box supplies them. Points with ``|x| >= a`` are
    reported as ``inf``.
    """

    alpha: float
    a: float
    b: float

    hard_walls = True
    discontinuous = True

    def __post_init__(self):
        _positive("alpha", self.alpha)
        _positive("a", self.a)
        _positive("b", self.b)
        if not self.b < self.a:
            raise ValidationError(f"need 0 < b < a, got a={self.a}, b={self.b}")

    def __call__(self, x):
        ax = np.abs(np.asarray(x, dtype=float))
        v = np.where(ax <= self.b, self.alpha, 0.0)
        return np.where(ax >= self.a, np.inf, v)

    def cell_average(self, x, dx):
        """Exact mean over each cell: ``alpha`` times the cell's overlap with the barrier."""
        x = np.asarray(x, dtype=float)
        overlap = np.minimum(x + 0.5 * dx, self.b) - np.maximum(x - 0.5 * dx, -self.b)
        v = self.alpha * np.clip(overlap, 0.0, dx) / dx
        # a cell reaching past the walls sees the infinite potential
        return np.where(np.abs(x) + 0.5 * dx > self.a * (1 + 1e-12), np.inf, v)

    def box(self, n_points: int) -> Grid:
        return Grid(-self.a, self.a, n_points)


@dataclass(frozen=True)
class AsymmetricSinh(Potential):
    """``nu*sinh(alpha*x - 3)**2 * sinh((1 + alpha*x)/20)**2``: two minima, no mirror axis."""

    nu: float = 1.0
    alpha: float = 1.0

    def __post_init__(self):
        _positive("nu", self.nu)
        _positive("alpha", self.alpha)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.nu * np.sinh(self.alpha * x - 3.0) ** 2 * np.sinh((1.0 + self.alpha * x) / 20.0) ** 2

    @property
    def zeros(self):
        return (-1.0 / self.alpha, 3.0 / self.alpha)


@dataclass(frozen=True, eq=False)
class Tabulated(Potential):
    """Potential given by samples, linearly interpolated."""

    state: TabulatedState
    confining: bool = True

    def __call__(self, x):
        return np.interp(np.asarray(x, dtype=float), self.state.x, self.state.values)

    @property
    def descriptor(self) -> str:
        return f"Tabulated({self.state.label or 'unnamed'}, n={self.state.grid.n_points})"


@dataclass(frozen=True, eq=False)
class Level:
    index: int
    energy: float
    parity: Parity
    asymmetry: float
    state: TabulatedState | None = None


@dataclass(frozen=True, eq=False)
class Spectrum:
    levels: list[Level]
    potential_descriptor: str
    grid: Grid
    hbar: float
    m: float
    leaky: bool = False

    @property
    def energies(self) -> np.ndarray:
        return np.array([lv.energy for lv in self.levels])

    def __len__(self):
        return len(self.levels)

    def __getitem__(self, i):
        return self.levels[i]


class ParityResult(NamedTuple):
    parity: Parity
    asymmetry: float
    reason: str = ""


def build_hamiltonian(
    V, grid: Grid, hbar: float = 1.0, m: float = 1.0, sampling: str | None = None
) -> TridiagonalOperator:
    """Three-point finite-difference Hamiltonian on the interior grid points.

    ``diag = hbar**2/(m dx**2) + V_i`` and ``offdiag = -hbar**2/(2 m dx**2)``;
    the end points ``x_min`` and ``x_max`` are Dirichlet walls, so the
    operator has ``n_points - 2`` rows.

    ``V_i`` is ``V(x_i)`` for ``sampling="point"`` and the mean of ``V`` over
    the cell around ``x_i`` for ``sampling="cell"``. Point sampling a jump
    makes the scheme first order in ``dx``; the cell mean restores second
    order. The default is ``"cell"`` for potentials flagged
    ``discontinuous`` and ``"point"`` otherwise.
    """
    _positive("hbar", hbar)
    _positive("m", m)
    x = grid.x[1:-1]
    t = hbar**2 / (2.0 * m * grid.dx**2)
    if sampling is None:
        sampling = "cell" if getattr(V, "discontinuous", False) else "point"
    if sampling == "point":
        v = np.asarray(V(x), dtype=float)
    elif sampling == "cell":
        avg = getattr(V, "cell_average", None)
        v = np.asarray(avg(x, grid.dx) if avg else Potential.cell_average(V, x, grid.dx), dtype=float)
    else:
        raise ValidationError(f"unknown sampling {sampling!r}")
    if not np.all(np.isfinite(v)):
        raise ValidationError("potential is not finite on the grid interior")
    return TridiagonalOperator(2.0 * t + v, np.full(x.size - 1, -t))


def _fix_sign(vec: np.ndarray) -> np.ndarray:
    # first lobe positive, for reproducible output
    mag = np.abs(vec)
    i = int(np.argmax(mag > 1e-3 * mag.max()))
    return -vec if vec[i] < 0 else vec


def _pad(grid: Grid, interior: np.ndarray) -> np.ndarray:
    out = np.zeros(grid.n_points)
    out[1:-1] = interior
    return out


def _reflection_blocks(op: TridiagonalOperator, k: int):
    """Eigenpairs of a mirror-symmetric tridiagonal operator, sector by sector."""
    d, e = op.diag, op.offdiag
    n = op.n
    if np.abs(d - d[::-1]).max() > 1e-10 * np.abs(d).max():
        raise PotentialNotSymmetric("operator is not mirror symmetric on this grid")
    # remove last-bit asymmetry from grid rounding
    d = 0.5 * (d + d[::-1])
    h = n // 2
    pairs = []
    if n % 2 == 0:
        for sign, parity in ((1.0, Parity.EVEN), (-1.0, Parity.ODD)):
            dd = d[:h].copy()
            dd[-1] += sign * e[h - 1]
            blk = TridiagonalOperator(dd, e[: h - 1])
            w, v = eig_sym_tridiag(blk, min(k, h))
            full = np.vstack([v, sign * v[::-1]]) / math.sqrt(2.0)
            pairs += [(w[j], full[:, j], parity) for j in range(w.size)]
    else:
        # centre point c = h; even sector keeps it with a sqrt(2) coupling
        ee = e[:h].copy()
        ee[-1] *= math.sqrt(2.0)
        w, v = eig_sym_tridiag(TridiagonalOperator(d[: h + 1], ee), min(k, h + 1))
        full = np.vstack([v[:h], math.sqrt(2.0) * v[h : h + 1], v[:h][::-1]]) / math.sqrt(2.0)
        pairs += [(w[j], full[:, j], Parity.EVEN) for j in range(w.size)]
        if h > 0:
            w, v = eig_sym_tridiag(TridiagonalOperator(d[:h], e[: h - 1]), min(k, h))
            full = np.vstack([v, np.zeros((1, w.size)), -v[::-1]]) / math.sqrt(2.0)
            pairs += [(w[j], full[:, j], Parity.ODD) for j in range(w.size)]
    pairs.sort(key=lambda t: t[0])
    return pairs[:k]


def solve_spectrum(
    V,
    grid: Grid,
    k: int,
    hbar: float = 1.0,
    m: float = 1.0,
    *,
    axis: float = 0.0,
    parity_tol: float = 1e-6,
    split_parity: bool = False,
    sampling: str | None = None,
) -> Spectrum:
    """Lowest ``k`` levels of ``-hbar**2/(2m) d2/dx2 + V`` in the grid's box.

    Eigenstates are normalised with the trapezoidal rule and labelled with
    :func:`classify_parity`. With ``split_parity=True`` the mirror-symmetric
    problem is diagonalised separately in the even and odd sectors. Use it
    when a level pair is split by less than the eigensolver can resolve in
    eigenvectors (tall barriers); the labels are then exact by
    construction.

    ``Spectrum.leaky`` is set when a confining potential leaves more than
    ``1e-6`` of the peak amplitude next to a box wall, meaning the box is
    too small.
    """
    op = build_hamiltonian(V, grid, hbar, m, sampling)
    if split_parity:
        if abs(grid.x_min + grid.x_max - 2 * axis) > 1e-12 * (grid.x_max - grid.x_min):
            raise ValidationError("split_parity needs a grid symmetric about the axis")
        pairs = _reflection_blocks(op, k)
    else:
        w, v = eig_sym_tridiag(op, k)
        pairs = [(w[j], v[:, j], None) for j in range(w.size)]

    levels = []
    leaky = False
    check_leak = getattr(V, "confining", True) and not getattr(V, "hard_walls", False)
    for i, (energy, vec, known) in enumerate(pairs):
        vec = _fix_sign(vec)
        state = TabulatedState(grid, _pad(grid, vec), f"level {i}").normalized()
        res = classify_parity(state, axis, parity_tol)
        parity = known if known is not None else res.parity
        levels.append(Level(i, float(energy), parity, res.asymmetry, state))
        if check_leak:
            peak = np.abs(vec).max()
            if max(abs(vec[0]), abs(vec[-1])) > 1e-6 * peak:
                leaky = True
    descriptor = getattr(V, "descriptor", None) or repr(V)
    if leaky:
        log.warning("%s: eigenfunctions do not decay at the box walls; widen the grid", descriptor)
    return Spectrum(levels, descriptor, grid, hbar, m, leaky)


def _l2(x, dx):
    x2 = x * x
    return math.sqrt(dx * (x2.sum() - 0.5 * (x2[0] + x2[-1])))


def classify_parity(state: TabulatedState, axis: float = 0.0, tol: float = 1e-6) -> ParityResult:
    """Parity of a tabulated function under reflection about ``axis``.

    The reflected function is obtained by linear interpolation, restricted to
    the part of the grid whose mirror image lies inside the grid. Returns
    the label and the asymmetry ``min(s_plus, s_minus)/||psi||``.
    """
    grid = state.grid
    center = 0.5 * (grid.x_min + grid.x_max)
    if abs(center - axis) > 0.5 * grid.dx:
        return ParityResult(Parity.INDEFINITE, math.nan, "grid is not symmetric about the axis")
    x = state.x
    xr = 2.0 * axis - x
    inside = (xr >= grid.x_min) & (xr <= grid.x_max)
    psi = state.values[inside]
    psi_r = np.interp(xr[inside], x, state.values)
    nrm = _l2(psi, grid.dx)
    if nrm == 0.0:
        return ParityResult(Parity.INDEFINITE, math.nan, "zero function")
    s_plus = _l2(psi - psi_r, grid.dx) / nrm
    s_minus = _l2(psi + psi_r, grid.dx) / nrm
    measure = min(s_plus, s_minus)
    if s_plus <= tol:
        return ParityResult(Parity.EVEN, measure)
    if s_minus <= tol:
        return ParityResult(Parity.ODD, measure)
    return ParityResult(Parity.INDEFINITE, measure, "neither even nor odd")


def expectation_x(state: TabulatedState) -> float:
    """``<x>`` of a normalised state by the trapezoidal rule."""
    nrm2 = inner_product(state, state)
    if abs(nrm2 - 1.0) > 1e-6:
        raise NotNormalized(f"state norm squared is {nrm2}")
    f = state.x * state.values**2
    return float(state.grid.dx * (f.sum() - 0.5 * (f[0] + f[-1])))


def annihilation_residual(a: float, grid: Grid, state=None) -> float:
    """``||A phi|| / ||phi||`` for ``A = -i d/dx - 4 i a x**3``.

    ``phi`` defaults to ``exp(-a x**4)``; pass another callable or a
    :class:`TabulatedState` to test something else. The derivative is the
    second-order central difference, evaluated on interior points.
    """
    _positive("a", a)
    if state is None:
        phi = np.exp(-a * grid.x**4)
    elif isinstance(state, TabulatedState):
        if state.grid != grid:
            raise ValidationError("state lives on a different grid")
        phi = state.values
    else:
        phi = np.asarray(state(grid.x), dtype=float)
    x = grid.x[1:-1]
    dphi = (phi[2:] - phi[:-2]) / (2.0 * grid.dx)
    out = dphi + 4.0 * a * x**3 * phi[1:-1]
    return _l2(out, grid.dx) / _l2(phi[1:-1], grid.dx)


class SexticGroundCheck(NamedTuple):
    E0: float
    overlap: float
    state: TabulatedState


def sextic_ground_check(a: float, grid: Grid, hbar: float = 1.0, m: float = 1.0) -> SexticGroundCheck:
    """Ground level of the sextic potential and its overlap with ``exp(-a x**4)``."""
    spec = solve_spectrum(Sextic(a, hbar, m), grid, 1, hbar, m)
    ground = spec.levels[0]
    phi = grid.sample(lambda x: np.exp(-a * x**4), "exp(-a x^4)").normalized()
    return SexticGroundCheck(ground.energy, abs(inner_product(ground.state, phi)), ground.state)


@dataclass(frozen=True, eq=False)
class AuditReport:
    levels: list[Level]
    degenerate_pairs: list[tuple[int, int]]
    parity_tol: float
    degeneracy_tol: float
    passed: bool = field(default=False)

    def lines(self):
        for lv in self.levels:
            yield f"{lv.index:3d}  E={lv.energy: .10g}  {lv.parity!s:10s}  asym={lv.asymmetry:.2e}"


def parity_audit(
    V,
    grid: Grid,
    k: int,
    axis: float = 0.0,
    hbar: float = 1.0,
    m: float = 1.0,
    parity_tol: float = 1e-6,
    degeneracy_tol: float = 1e-8,
) -> AuditReport:
    """Check that the lowest ``k`` levels of a mirror-symmetric potential have definite parity.

    Passes when every level is even or odd within ``parity_tol`` and no two
    consecutive levels coincide within ``degeneracy_tol`` (relative).
    Degenerate pairs are reported separately and exempt from the parity
    requirement, since any basis of a degenerate eigenspace is valid.

    Raises
    ------
    PotentialNotSymmetric
        If ``V(x)`` and ``V(2*axis - x)`` differ anywhere on the grid by more
        than ``1e-10`` of the potential's scale.
    """
    x = grid.x[1:-1]
    v = np.asarray(V(x), dtype=float)
    vr = np.asarray(V(2.0 * axis - x), dtype=float)
    scale = max(float(np.abs(v).max()), 1.0)
    mismatch = float(np.abs(v - vr).max())
    if not mismatch <= 1e-10 * scale:
        raise PotentialNotSymmetric(
            f"max |V(x) - V(2*{axis} - x)| = {mismatch:.3e} on the grid"
        )
    spec = solve_spectrum(V, grid, k, hbar, m, axis=axis, parity_tol=parity_tol)
    E = spec.energies
    degenerate = [
        (i, i + 1)
        for i in range(len(E) - 1)
        if abs(E[i + 1] - E[i]) <= degeneracy_tol * max(abs(E[i]), abs(E[i + 1]))
    ]
    exempt = {i for pair in degenerate for i in pair}
    definite = all(
        lv.asymmetry < parity_tol for lv in spec.levels if lv.index not in exempt
    )
    return AuditReport(spec.levels, degenerate, parity_tol, degeneracy_tol, definite and not degenerate)
