"""Two displaced oscillators acting on a two-component wavefunction.

The Hamiltonian is block diagonal, ``diag(H_plus, H_minus)`` with

    H_pm = -hbar**2/(2m) d2/dx2 + m omega_pm**2 x**2 / 2 - hbar omega_pm / 2,

so branch ``pm`` has levels ``hbar n omega_pm`` (n >= 0) and both ground
levels sit at zero. ``sigma_3`` commutes with it. Excited levels of the two
branches coincide only if ``n omega_plus = m omega_minus`` for positive
integers, which :func:`find_degeneracies` searches for up to a bound.

The same operator can be written ``H_0 * 1 + u(x) sigma_3`` with a common
oscillator ``H_0`` and a spin-dependent term
``u(x) = m omega_delta**2 x**2/2 - eps_delta``. The offsets that reproduce
the ``-hbar omega_pm/2`` shifts are ``eps_0 = hbar (omega_plus +
omega_minus)/4`` and ``eps_delta = hbar (omega_plus - omega_minus)/4``; the
variant with denominators 2 is available as ``as_printed=True`` and leaves
a constant mismatch of ``hbar omega_pm / 2`` in each block.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ValidationError
from .numerics import Grid, TridiagonalOperator, best_rational_approximations
from .qm1d import Harmonic, build_hamiltonian, solve_spectrum

__all__ = [
    "Branch",
    "SpinorSystem",
    "SpinorLevel",
    "Decomposition",
    "Degeneracy",
    "CommutatorAudit",
    "spinor_spectrum",
    "group_levels",
    "find_degeneracies",
    "decompose",
    "block_operators",
    "block_mismatch",
    "reconstruction_residual",
    "commutator_audit",
    "grid_spinor_spectrum",
]


class Branch(enum.IntEnum):
    """``sigma_3`` eigenvalue of a level."""

    MINUS = -1
    PLUS = 1

    def __str__(self):
        return "+" if self is Branch.PLUS else "-"


@dataclass(frozen=True)
class SpinorSystem:
    omega_plus: float
    omega_minus: float
    hbar: float = 1.0
    m: float = 1.0

    def __post_init__(self):
        for name in ("omega_plus", "omega_minus", "hbar", "m"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValidationError(f"{name} must be positive and finite, got {v}")

    def omega(self, branch: Branch) -> float:
        return self.omega_plus if branch is Branch.PLUS else self.omega_minus

    @property
    def default_tol(self) -> float:
        return 1e-9 * self.hbar * min(self.omega_plus, self.omega_minus)


@dataclass(frozen=True)
class SpinorLevel:
    branch: Branch
    n: int
    energy: float


def spinor_spectrum(sys: SpinorSystem, E_max: float) -> list[SpinorLevel]:
    """All levels ``hbar n omega_pm <= E_max``, sorted by energy then branch."""
    if not E_max > 0:
        raise ValidationError("E_max must be positive")
    out = []
    for branch in (Branch.PLUS, Branch.MINUS):
        w = sys.hbar * sys.omega(branch)
        n_top = int(math.floor(E_max / w * (1 + 1e-15)))
        out += [SpinorLevel(branch, n, sys.hbar * n * sys.omega(branch)) for n in range(n_top + 1)]
    out.sort(key=lambda lv: (lv.energy, -lv.branch))
    return out


def group_levels(levels: list[SpinorLevel]) -> list[tuple[float, list[SpinorLevel]]]:
    """Group exactly equal energies; returns ``(energy, members)`` pairs."""
    groups: list[tuple[float, list[SpinorLevel]]] = []
    for lv in levels:
        if groups and groups[-1][0] == lv.energy:
            groups[-1][1].append(lv)
        else:
            groups.append((lv.energy, [lv]))
    return groups


class Degeneracy(NamedTuple):
    n: int
    m: int
    gap: float


def find_degeneracies(sys: SpinorSystem, n_max: int, tol: float | None = None) -> list[Degeneracy]:
    """All ``1 <= n, m <= n_max`` with ``|hbar n omega_plus - hbar m omega_minus| <= tol``.

    A coincidence means ``m/n`` approximates ``r = omega_plus/omega_minus``
    to within ``tol / (hbar n omega_minus)``. When that is below
    ``1/(2 n**2)`` for every ``n <= n_max``, Legendre's theorem says the
    reduced ``m/n`` must be a continued-fraction convergent of ``r``, so only
    convergents and their multiples are checked. Otherwise every ``n`` is
    scanned with the nearest ``m``. Either way each candidate is verified
    directly, and the result is sorted by ``(n, m)``.

    The absence of coincidences is a statement about ``(n_max, tol)`` only;
    floating point cannot certify that the ratio is irrational.
    """
    if int(n_max) != n_max or n_max < 1:
        raise ValidationError("n_max must be a positive integer")
    n_max = int(n_max)
    tol = sys.default_tol if tol is None else float(tol)
    if not tol > 0:
        raise ValidationError("tol must be positive")
    wp, wm, hbar = sys.omega_plus, sys.omega_minus, sys.hbar

    def gap(n, m):
        return abs(hbar * n * wp - hbar * m * wm)

    found = set()
    if 2.0 * tol * n_max < hbar * wm:
        for r in best_rational_approximations(wp / wm, n_max):
            q, p = r.q, r.p
            for k in range(1, n_max // q + 1):
                n, m = k * q, k * p
                if 1 <= m <= n_max and gap(n, m) <= tol:
                    found.add((n, m))
    else:
        ratio = wp / wm
        spread = int(math.ceil(tol / (hbar * wm))) + 1
        for n in range(1, n_max + 1):
            centre = int(round(n * ratio))
            for m in range(max(1, centre - spread), min(n_max, centre + spread) + 1):
                if gap(n, m) <= tol:
                    found.add((n, m))
    return [Degeneracy(n, m, gap(n, m)) for n, m in sorted(found)]


@dataclass(frozen=True)
class Decomposition:
    omega0: float
    omega_delta_sq: float
    eps0: float
    eps_delta: float
    m: float = 1.0
    hbar: float = 1.0
    as_printed: bool = False

    def u(self, x):
        """Spin-dependent term ``m omega_delta**2 x**2 / 2 - eps_delta``."""
        x = np.asarray(x, dtype=float)
        return 0.5 * self.m * self.omega_delta_sq * x * x - self.eps_delta

    def h0_potential(self, x):
        x = np.asarray(x, dtype=float)
        return 0.5 * self.m * self.omega0**2 * x * x - self.eps0


def decompose(sys: SpinorSystem, as_printed: bool = False) -> Decomposition:
    """Constants of ``H = H_0 * 1 + u(x) sigma_3``.

    ``omega_delta_sq`` is negative when ``omega_plus < omega_minus``.
    """
    wp2, wm2 = sys.omega_plus**2, sys.omega_minus**2
    denom = 2.0 if as_printed else 4.0
    return Decomposition(
        omega0=math.sqrt(0.5 * (wp2 + wm2)),
        omega_delta_sq=0.5 * (wp2 - wm2),
        eps0=sys.hbar * (sys.omega_plus + sys.omega_minus) / denom,
        eps_delta=sys.hbar * (sys.omega_plus - sys.omega_minus) / denom,
        m=sys.m,
        hbar=sys.hbar,
        as_printed=as_printed,
    )


def _block_potential(sys: SpinorSystem, branch: Branch) -> Harmonic:
    w = sys.omega(branch)
    return Harmonic(sys.m, w, -0.5 * sys.hbar * w)


def block_operators(sys: SpinorSystem, grid: Grid) -> tuple[TridiagonalOperator, TridiagonalOperator]:
    """Grid forms of ``H_plus`` and ``H_minus`` built from the displaced oscillators."""
    return tuple(
        build_hamiltonian(_block_potential(sys, br), grid, sys.hbar, sys.m)
        for br in (Branch.PLUS, Branch.MINUS)
    )


def block_mismatch(sys: SpinorSystem, grid: Grid, as_printed: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal differences ``H_pm - (H_0 +/- u)`` per block; off-diagonals agree identically.

    With the default offsets both arrays vanish up to rounding; with
    ``as_printed=True`` they are the constants ``hbar omega_pm / 2``.
    """
    dec = decompose(sys, as_printed)
    hp, hm = block_operators(sys, grid)
    h0 = build_hamiltonian(dec.h0_potential, grid, sys.hbar, sys.m)
    u = dec.u(grid.x[1:-1])
    return hp.diag - (h0.diag + u), hm.diag - (h0.diag - u)


def reconstruction_residual(sys: SpinorSystem, grid: Grid, as_printed: bool = False) -> float:
    """Largest entry-wise difference between ``diag(H_plus, H_minus)`` and ``H_0 +/- u``."""
    dec = decompose(sys, as_printed)
    hp, hm = block_operators(sys, grid)
    h0 = build_hamiltonian(dec.h0_potential, grid, sys.hbar, sys.m)
    worst = max(float(np.abs(d).max()) for d in block_mismatch(sys, grid, as_printed))
    for blk in (hp, hm):
        if blk.n > 1:
            worst = max(worst, float(np.abs(blk.offdiag - h0.offdiag).max()))
    return worst


class CommutatorAudit(NamedTuple):
    max_norm: float
    seed: int
    trials: int


def commutator_audit(
    sys: SpinorSystem, grid: Grid, trials: int = 10, seed: int = 0, coupling: float = 0.0
) -> CommutatorAudit:
    """Largest ``||(sigma_3 H - H sigma_3) Psi||`` over random unit spinors.

    ``coupling`` adds ``coupling * sigma_1`` to ``H`` as a negative control;
    the commutator then has norm ``2 |coupling|`` on every unit spinor.
    """
    if int(trials) != trials or trials < 1:
        raise ValidationError("trials must be a positive integer")
    hp, hm = block_operators(sys, grid)
    rng = np.random.default_rng(seed)
    n = hp.n

    def apply_h(top, bottom):
        return hp.matvec(top) + coupling * bottom, hm.matvec(bottom) + coupling * top

    worst = 0.0
    for _ in range(int(trials)):
        psi = rng.standard_normal(2 * n)
        psi /= np.linalg.norm(psi)
        top, bottom = psi[:n], psi[n:]
        h_top, h_bot = apply_h(top, bottom)
        s_top, s_bot = apply_h(top, -bottom)  # H sigma_3 psi
        comm = np.concatenate([h_top - s_top, -h_bot - s_bot])
        worst = max(worst, float(np.linalg.norm(comm)))
    return CommutatorAudit(worst, seed, int(trials))


def grid_spinor_spectrum(sys: SpinorSystem, grid: Grid, k: int) -> list[SpinorLevel]:
    """Lowest ``k`` grid levels of each branch, merged and sorted by energy."""
    out = []
    for br in (Branch.PLUS, Branch.MINUS):
        spec = solve_spectrum(_block_potential(sys, br), grid, k, sys.hbar, sys.m)
        out += [SpinorLevel(br, lv.index, lv.energy) for lv in spec.levels]
    out.sort(key=lambda lv: (lv.energy, -lv.branch))
    return out
