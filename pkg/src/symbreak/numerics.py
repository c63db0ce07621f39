"""Numerical kernels shared by the model modules.

Everything here is a pure function of its inputs: bracketed root finding,
the lowest eigenpairs of a symmetric tridiagonal matrix, a symplectic
integrator for one-dimensional Hamiltonian flows, trapezoidal quadrature on
a uniform grid, and continued-fraction rational approximation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

from .errors import (
    ConvergenceFailure,
    GridMismatch,
    MaxIterations,
    NonFinite,
    NoSignChange,
    ValidationError,
)

__all__ = [
    "Grid",
    "TabulatedState",
    "TridiagonalOperator",
    "RationalApprox",
    "PhaseState",
    "find_root_bracketed",
    "eig_sym_tridiag",
    "integrate_hamiltonian",
    "inner_product",
    "best_rational_approximations",
]


@dataclass(frozen=True)
class Grid:
    """Uniform grid ``x_min + i*dx`` for ``i = 0 .. n_points-1``."""

    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max)):
            raise ValidationError("grid bounds must be finite")
        if not self.x_min < self.x_max:
            raise ValidationError(f"need x_min < x_max, got {self.x_min}, {self.x_max}")
        if int(self.n_points) != self.n_points or self.n_points < 3:
            raise ValidationError(f"need an integer n_points >= 3, got {self.n_points}")

    @classmethod
    def symmetric(cls, half_width: float, n_points: int) -> "Grid":
        return cls(-float(half_width), float(half_width), int(n_points))

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @cached_property
    def x(self) -> np.ndarray:
        x = self.x_min + self.dx * np.arange(self.n_points)
        x[-1] = self.x_max
        x.setflags(write=False)
        return x

    def sample(self, f: Callable, label: str | None = None) -> "TabulatedState":
        """Tabulate a vectorised function on the grid."""
        values = np.broadcast_to(np.asarray(f(self.x), dtype=float), (self.n_points,))
        return TabulatedState(self, values.copy(), label)


@dataclass(frozen=True, eq=False)
class TabulatedState:
    """A real function sampled on a :class:`Grid`."""

    grid: Grid
    values: np.ndarray
    label: str | None = None

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.n_points,):
            raise ValidationError(
                f"expected {self.grid.n_points} samples, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValidationError("tabulated values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    def norm(self) -> float:
        return math.sqrt(inner_product(self, self))

    def normalized(self) -> "TabulatedState":
        nrm = self.norm()
        if nrm == 0.0:
            raise ValidationError("cannot normalise the zero function")
        return TabulatedState(self.grid, self.values / nrm, self.label)

    def with_values(self, values, label: str | None = None) -> "TabulatedState":
        return TabulatedState(self.grid, values, self.label if label is None else label)


@dataclass(frozen=True, eq=False)
class TridiagonalOperator:
    """Symmetric tridiagonal matrix stored as its diagonal and one off-diagonal."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.array(self.diag, dtype=float).ravel()
        e = np.array(self.offdiag, dtype=float).ravel()
        if d.size < 1 or e.size != d.size - 1:
            raise ValidationError(
                f"diag/offdiag lengths must be n and n-1, got {d.size} and {e.size}"
            )
        d.setflags(write=False)
        e.setflags(write=False)
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def n(self) -> int:
        return self.diag.size

    def matvec(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        out = self.diag[:, None] * v if v.ndim == 2 else self.diag * v
        if self.n > 1:
            e = self.offdiag[:, None] if v.ndim == 2 else self.offdiag
            out[:-1] += e * v[1:]
            out[1:] += e * v[:-1]
        return out

    def norm(self) -> float:
        """Max-row-sum norm, an upper bound on the spectral norm."""
        row = np.abs(self.diag).copy()
        row[:-1] += np.abs(self.offdiag)
        row[1:] += np.abs(self.offdiag)
        return float(row.max())

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


@dataclass(frozen=True)
class RationalApprox:
    p: int
    q: int
    value: float
    error: float
    convergent: bool = True


@dataclass(frozen=True)
class PhaseState:
    x: float
    p: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.p)):
            raise NonFinite(f"phase state must be finite, got ({self.x}, {self.p})")


def find_root_bracketed(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-12,
    max_iter: int = 400,
) -> float:
    """Root of ``f`` inside ``[lo, hi]`` by safeguarded regula falsi.

    The bracket always straddles a sign change and is shrunk until its width
    is at most ``tol``; the midpoint of the final bracket is returned. Steps
    that fail to halve the bracket are replaced by bisection, so convergence
    is never slower than bisection.

    Raises
    ------
    NoSignChange
        If ``f(lo)`` and ``f(hi)`` do not have opposite signs.
    MaxIterations
        If the bracket does not shrink within ``max_iter`` steps, or if it
        collapses onto a point where ``|f|`` grows instead of vanishing
        (a pole rather than a root).
    """
    if not tol > 0:
        raise ValidationError("tol must be positive")
    lo, hi = float(lo), float(hi)
    if lo > hi:
        lo, hi = hi, lo
    flo, fhi = float(f(lo)), float(f(hi))
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if not (math.isfinite(flo) and math.isfinite(fhi)) or flo * fhi > 0:
        raise NoSignChange(f"f({lo})={flo} and f({hi})={fhi} do not bracket a root")
    f_scale = max(abs(flo), abs(fhi))

    side = 0
    w_ref = hi - lo
    since_check = 0
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        since_check += 1
        x = hi - fhi * (hi - lo) / (fhi - flo)
        if since_check > 2:
            if hi - lo > 0.5 * w_ref:
                x = 0.5 * (lo + hi)
            w_ref = hi - lo
            since_check = 0
        if not lo < x < hi:
            x = 0.5 * (lo + hi)
            if not lo < x < hi:
                break  # bracket is down to adjacent floats
        fx = float(f(x))
        if fx == 0.0:
            return x
        if not math.isfinite(fx):
            raise MaxIterations(f"f is not finite at {x}; bracket contains a singularity")
        # Illinois: halve the stale endpoint's weight when the same side moves twice
        if (fx > 0) == (fhi > 0):
            hi, fhi = x, fx
            if side == 1:
                flo *= 0.5
            side = 1
        else:
            lo, flo = x, fx
            if side == -1:
                fhi *= 0.5
            side = -1
    else:
        raise MaxIterations(f"bracket did not shrink below {tol} in {max_iter} iterations")

    root = 0.5 * (lo + hi)
    f_end = min(abs(float(f(lo))), abs(float(f(hi))))
    if f_end > f_scale:
        raise MaxIterations(
            f"bracket collapsed onto {root} where |f| grows; a pole, not a root"
        )
    return root


def eig_sym_tridiag(op: TridiagonalOperator, k: int, want_vectors: bool = True):
    """The ``k`` smallest eigenpairs of a symmetric tridiagonal operator.

    Returns ``(values, vectors)``; ``vectors`` has one unit-norm column per
    eigenvalue, or is ``None`` when ``want_vectors`` is false. Values are
    ascending.
    """
    n = op.n
    if int(k) != k or not 1 <= k <= n:
        raise ValidationError(f"need 1 <= k <= {n}, got {k}")
    k = int(k)
    if n == 1:
        w = op.diag.copy()
        return (w, np.ones((1, 1))) if want_vectors else (w, None)
    try:
        res = eigh_tridiagonal(
            op.diag,
            op.offdiag,
            eigvals_only=not want_vectors,
            select="i",
            select_range=(0, k - 1),
        )
    except (LinAlgError, ValueError) as exc:
        raise ConvergenceFailure(str(exc)) from exc
    if not want_vectors:
        w = np.sort(np.asarray(res))
        if not np.all(np.isfinite(w)):
            raise ConvergenceFailure("non-finite eigenvalues")
        return w, None
    w, v = res
    order = np.argsort(w)
    w, v = w[order], v[:, order]
    v = v / np.linalg.norm(v, axis=0)
    resid = np.linalg.norm(op.matvec(v) - v * w, axis=0)
    if not np.all(np.isfinite(resid)) or resid.max() > 1e-8 * op.norm():
        raise ConvergenceFailure(f"eigenpair residual {resid.max():.3e} too large")
    return w, v


# Minimum-error two-stage splitting (McLachlan 1995; Omelyan et al. 2002).
_MCLACHLAN_LAMBDA = 0.1931833275037836


def integrate_hamiltonian(
    force: Callable[[float], float],
    m: float,
    state0: PhaseState,
    dt: float,
    steps: int,
    scheme: str = "mclachlan",
):
    """Integrate ``x' = p/m, p' = force(x)`` with a symplectic splitting.

    Parameters
    ----------
    force : callable
        Scalar force ``-dV/dx``.
    m : float
        Mass.
    state0 : PhaseState
        Initial condition.
    dt : float
        Time step; negative values are rejected, integrate backwards by
        flipping the momentum instead.
    steps : int
        Number of steps.
    scheme : {"mclachlan", "leapfrog"}
        ``"leapfrog"`` is position Verlet (drift/kick/drift).
        ``"mclachlan"`` is the second-order drift/kick/drift/kick/drift
        splitting with the smallest error constant; both are symmetric,
        symplectic and second order.

    Returns
    -------
    x, p : ndarray
        Arrays of length ``steps + 1`` starting at ``state0``.
    """
    if not m > 0:
        raise ValidationError("mass must be positive")
    if not (dt > 0 and math.isfinite(dt)):
        raise ValidationError("dt must be positive and finite")
    if int(steps) != steps or steps < 0:
        raise ValidationError("steps must be a non-negative integer")
    steps = int(steps)
    xs = np.empty(steps + 1)
    ps = np.empty(steps + 1)
    xs[0], ps[0] = float(state0.x), float(state0.p)
    inv_m = 1.0 / m
    if scheme not in ("leapfrog", "mclachlan"):
        raise ValidationError(f"unknown scheme {scheme!r}")
    try:
        with np.errstate(over="ignore", invalid="ignore"):
            _integrate(force, inv_m, dt, steps, scheme, xs, ps)
    except OverflowError as exc:
        raise NonFinite(f"state left representable range: {exc}") from exc
    return xs, ps


def _integrate(force, inv_m, dt, steps, scheme, xs, ps):
    x, p = xs[0], ps[0]
    if scheme == "leapfrog":
        h = 0.5 * dt
        for i in range(1, steps + 1):
            x += h * p * inv_m
            p += dt * force(x)
            x += h * p * inv_m
            if not (math.isfinite(x) and math.isfinite(p)):
                raise NonFinite(f"state left representable range at step {i}")
            xs[i], ps[i] = x, p
    elif scheme == "mclachlan":
        a = _MCLACHLAN_LAMBDA * dt * inv_m
        b = (1.0 - 2.0 * _MCLACHLAN_LAMBDA) * dt * inv_m
        h = 0.5 * dt
        for i in range(1, steps + 1):
            x += a * p
            p += h * force(x)
            x += b * p
            p += h * force(x)
            x += a * p
            if not (math.isfinite(x) and math.isfinite(p)):
                raise NonFinite(f"state left representable range at step {i}")
            xs[i], ps[i] = x, p


def inner_product(f: TabulatedState, g: TabulatedState) -> float:
    """Composite trapezoidal approximation of the integral of ``f*g``."""
    if f.grid != g.grid:
        raise GridMismatch("states live on different grids")
    prod = f.values * g.values
    return float(f.grid.dx * (prod.sum() - 0.5 * (prod[0] + prod[-1])))


def best_rational_approximations(x: float, q_max: int) -> list[RationalApprox]:
    """Continued-fraction convergents of ``x`` with denominator ``<= q_max``.

    The expansion is carried out exactly on the binary value of ``x``, so it
    terminates for floats that are exact rationals (``0.5``) and never
    accumulates rounding. If a semiconvergent with ``q <= q_max`` beats the
    last convergent it is appended (``convergent=False``) so that the final
    entry is always the closest fraction with that denominator bound.
    """
    if not (x > 0 and math.isfinite(x)):
        raise ValidationError("x must be positive and finite")
    if int(q_max) != q_max or q_max < 1:
        raise ValidationError("q_max must be a positive integer")
    q_max = int(q_max)
    target = Fraction(x)
    out: list[RationalApprox] = []
    p_prev, q_prev, p, q = 0, 1, 1, 0
    rest = target
    while True:
        a = math.floor(rest)
        p_prev, q_prev, p, q = p, q, a * p + p_prev, a * q + q_prev
        if q > q_max:
            break
        out.append(RationalApprox(p, q, x, abs(float(target - Fraction(p, q)))))
        frac = rest - a
        if frac == 0:
            break
        rest = 1 / frac
    best = target.limit_denominator(q_max)
    if out and Fraction(out[-1].p, out[-1].q) != best:
        err = abs(float(target - best))
        if err < out[-1].error:
            out.append(RationalApprox(best.numerator, best.denominator, x, err, False))
    return out
