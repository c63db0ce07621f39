"""The acceptance suite behind ``symbreak verify``.

Each criterion is a function returning a :class:`CriterionResult`; the
numbered list :data:`CRITERIA` is the whole suite. Thresholds are the
stated acceptance tolerances, not tuned to the observed values.
"""

from __future__ import annotations

import contextlib
import io
import math
import tempfile
from pathlib import Path
from typing import Callable, NamedTuple

import numpy as np

from . import classical, doublewell, qm1d, spinor
from .numerics import Grid, inner_product
from .output import extract_curves

__all__ = ["CriterionResult", "CRITERIA", "run_suite", "brute_force_degeneracies"]


class CriterionResult(NamedTuple):
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{self.number:2d} {'pass' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


class _Checks:
    """Collects named boolean checks and their descriptions."""

    def __init__(self):
        self.items: list[tuple[bool, str]] = []

    def __call__(self, ok, text):
        self.items.append((bool(ok), text))

    def result(self, number, name):
        failed = [t for ok, t in self.items if not ok]
        detail = "; ".join(failed) if failed else "; ".join(t for _, t in self.items)
        return CriterionResult(number, name, not failed, detail)


def c1_sextic_ground_state() -> CriterionResult:
    ck = _Checks()
    coarse = qm1d.sextic_ground_check(1.0, Grid(-3.0, 3.0, 2000))
    fine = qm1d.sextic_ground_check(1.0, Grid(-3.0, 3.0, 4000))
    ck(abs(coarse.E0) <= 5e-3, f"|E0|={abs(coarse.E0):.2e}<=5e-3")
    ck(coarse.overlap >= 0.999, f"overlap={coarse.overlap:.9f}>=0.999")
    ratio = abs(coarse.E0) / abs(fine.E0)
    ck(ratio >= 3.0, f"refinement ratio={ratio:.2f}>=3")
    return ck.result(1, "sextic ground state")


def c2_annihilation() -> CriterionResult:
    ck = _Checks()
    r_fine = qm1d.annihilation_residual(1.0, Grid(-3.0, 3.0, 4001))
    r_coarse = qm1d.annihilation_residual(1.0, Grid(-3.0, 3.0, 2001))
    ck(r_fine < 1e-3, f"residual={r_fine:.2e}<1e-3")
    ratio = r_coarse / r_fine
    ck(3.5 <= ratio <= 4.5, f"halving ratio={ratio:.2f}~4")
    return ck.result(2, "annihilation operator")


def c3_parity_audit() -> CriterionResult:
    ck = _Checks()
    for V in (qm1d.Sombrero(1.0, 1.0), qm1d.Sextic(1.0)):
        rep = qm1d.parity_audit(V, Grid(-3.0, 3.0, 2000), 10, 0.0, parity_tol=1e-6, degeneracy_tol=1e-8)
        worst = max(lv.asymmetry for lv in rep.levels)
        ck(rep.passed and worst < 1e-6 and not rep.degenerate_pairs,
           f"{type(V).__name__}: max asymmetry {worst:.1e}, {len(rep.degenerate_pairs)} degenerate pairs")
    return ck.result(3, "parity audit")


def c4_doublewell_oracle() -> CriterionResult:
    ck = _Checks()
    params = doublewell.WellParams(2.0, 0.5, 200.0)
    roots = doublewell.levels_below_barrier(params)
    V = qm1d.PiecewiseDoubleWell(200.0, 2.0, 0.5)
    spec = qm1d.solve_spectrum(V, V.box(4000), len(roots), split_parity=True)
    diffs = [abs(r.energy - lv.energy) for r, lv in zip(roots, spec.levels)]
    parity_ok = all(r.parity == lv.parity for r, lv in zip(roots, spec.levels))
    ck(len(roots) > 0 and len(spec.levels) == len(roots), f"{len(roots)} sub-barrier roots")
    ck(max(diffs) <= 1e-2, f"max |E_root - E_grid|={max(diffs):.2e}<=1e-2")
    ck(parity_ok, "parities agree in order")
    return ck.result(4, "double-well oracle equivalence")


def c5_infinite_barrier_limit() -> CriterionResult:
    ck = _Checks()
    a, b = 2.0, 0.5
    levels = doublewell.levels_below_barrier(doublewell.WellParams(a, b, 1e6), n_max=2)
    worst = 0.0
    for n in (1, 2):
        ref = doublewell.limit_levels(a, b, n=n)
        for lv in (lv for lv in levels if lv.n == n):
            worst = max(worst, abs(lv.energy - ref) / ref)
    ck(len(levels) == 4 and worst <= 1e-3, f"max relative deviation={worst:.2e}<=1e-3")
    g50, g1e4 = doublewell.parity_gap_sweep([50.0, 1e4], 1, a, b)
    ratio = g1e4.gap / g50.gap
    ck(ratio < 0.1, f"gap(1e4)/gap(50)={ratio:.1e}<0.1")
    return ck.result(5, "infinite-barrier limit")


def c6_concentrated_states() -> CriterionResult:
    ck = _Checks()
    a, b = 2.0, 0.5
    grid = Grid(-a, a, 4001)
    st = doublewell.infinite_barrier_states(1, a, b, grid)
    xl = qm1d.expectation_x(st.psi_L)
    xp = qm1d.expectation_x(st.psi_plus)
    xm = qm1d.expectation_x(st.psi_minus)
    ck(abs(xl + (a + b) / 2) <= 1e-10, f"<x>_L + (a+b)/2={xl + (a + b) / 2:.1e}")
    ck(max(abs(xp), abs(xm)) <= 1e-10, f"<x>_+-={max(abs(xp), abs(xm)):.1e}")
    overlap = inner_product(st.psi_L, st.psi_R)
    ck(overlap == 0.0, f"<L,R>={overlap}")
    L = a - b
    ref = [doublewell.limit_levels(a, b, n=n) for n in range(1, 6)]
    worst = 0.0
    for shift in (-0.4, 0.3, 1.0):
        alt = [doublewell.limit_levels(a + shift, b + shift, n=n) for n in range(1, 6)]
        worst = max(worst, max(abs(x - y) / y for x, y in zip(alt, ref)))
    ck(worst <= 1e-12, f"b-dependence at fixed a-b={L:g}: {worst:.1e}")
    return ck.result(6, "concentrated states")


def c7_classical_dynamics() -> CriterionResult:
    ck = _Checks()
    V = qm1d.Sombrero(1.0, 1.0)
    (traj,) = classical.phase_portrait(V, 1.0, [0.5], (-3.0, 3.0), dt=1e-3, steps=10_000)
    H = classical.hamiltonian(V, 1.0, traj.x, traj.p)
    drift = float(np.max(np.abs(H - 0.5)) / 0.5)
    ck(len(traj) == 10_001 and drift <= 1e-6, f"relative energy drift={drift:.1e}<=1e-6")
    cases = [(E, 0.0, classical.SymmetryClass.SYMMETRIC) for E in (0.1, 0.5, 1.0)]
    xm = V.minima[1]
    cases += [(-0.1, -xm, classical.SymmetryClass.ASYMMETRIC), (-0.1, xm, classical.SymmetryClass.ASYMMETRIC)]
    cases += [(0.0, 0.0, classical.SymmetryClass.SEPARATRIX)]
    bad = [(E, x0) for E, x0, want in cases if classical.classify_trajectory(V, E, x0) is not want]
    ck(not bad, f"{len(cases)} classifications correct" if not bad else f"misclassified {bad}")
    return ck.result(7, "classical dynamics")


def c8_local_max_model() -> CriterionResult:
    ck = _Checks()
    for mu in (0.5, 1.0, 2.0):
        mod = classical.local_max_model(qm1d.Sombrero(1.0, mu), 0.0)
        rel = abs(mod.gamma_sq - 2 * mu) / (2 * mu)
        ck(mod.n == 1 and rel <= 0.01, f"mu={mu:g}: n={mod.n}, gamma^2 rel err {rel:.1e}")
    tp = classical.local_turning_points(classical.LocalMaxModel(0.0, 1, 2.0, 0.0), -0.25)
    ck(tp == (-0.5, 0.5), f"turning points {tp}")
    return ck.result(8, "local-maximum model")


def brute_force_degeneracies(wp, wm, n_max, tol, hbar=1.0):
    """Every ``(n, m)`` with ``|hbar n wp - hbar m wm| <= tol``, by direct enumeration."""
    m = np.arange(1, n_max + 1, dtype=float)
    hits = []
    for start in range(1, n_max + 1, 500):
        n = np.arange(start, min(start + 500, n_max + 1), dtype=float)[:, None]
        gap = np.abs(hbar * n * wp - hbar * m[None, :] * wm)
        for i, j in zip(*np.nonzero(gap <= tol)):
            hits.append((int(n[i, 0]), int(m[j])))
    return sorted(hits)


def c9_spinor_spectrum() -> CriterionResult:
    ck = _Checks()
    sysm = spinor.SpinorSystem(math.sqrt(2.0), 1.0)
    grid_levels = spinor.grid_spinor_spectrum(sysm, Grid(-10.0, 10.0, 4001), 6)
    worst = max(abs(lv.energy - lv.n * sysm.omega(lv.branch)) for lv in grid_levels)
    ck(worst <= 1e-3, f"grid vs hbar n omega: {worst:.1e}<=1e-3")
    zero = [lv for lv in spinor.spinor_spectrum(sysm, 10.0) if lv.energy == 0.0]
    ck(len(zero) == 2, f"{len(zero)} labels at E=0")
    found = spinor.find_degeneracies(sysm, 10_000, 1e-9)
    brute = brute_force_degeneracies(sysm.omega_plus, sysm.omega_minus, 10_000, 1e-9)
    ck(not found and [(d.n, d.m) for d in found] == brute, f"sqrt2: {len(found)} found, brute force {len(brute)}")
    n_max = 300
    three_halves = spinor.SpinorSystem(1.5, 1.0)
    found = [(d.n, d.m) for d in spinor.find_degeneracies(three_halves, n_max)]
    expected = [(2 * k, 3 * k) for k in range(1, n_max // 3 + 1)]
    brute = brute_force_degeneracies(1.5, 1.0, n_max, three_halves.default_tol)
    ck(found == expected == brute, f"3/2: {len(found)} pairs (2k, 3k)")
    return ck.result(9, "spinor spectrum")


def c10_decomposition() -> CriterionResult:
    ck = _Checks()
    sysm = spinor.SpinorSystem(math.sqrt(2.0), 1.0)
    grid = Grid(-6.0, 6.0, 1201)
    res = spinor.reconstruction_residual(sysm, grid)
    ck(res <= 1e-10, f"corrected residual={res:.1e}<=1e-10")
    dp, dm = spinor.block_mismatch(sysm, grid, as_printed=True)
    off_p = float(np.max(np.abs(dp - sysm.hbar * sysm.omega_plus / 2)))
    off_m = float(np.max(np.abs(dm - sysm.hbar * sysm.omega_minus / 2)))
    printed = spinor.reconstruction_residual(sysm, grid, as_printed=True)
    ck(max(off_p, off_m) <= 1e-10 and abs(printed - sysm.omega_plus / 2) <= 1e-10,
       f"as-printed residual={printed:.12f} (hbar omega_+/2={sysm.omega_plus / 2:.12f})")
    return ck.result(10, "decomposition")


def _local_minima(pts):
    y = pts[:, 1]
    idx = [i for i in range(1, len(y) - 1) if y[i] < y[i - 1] and y[i] <= y[i + 1]]
    return [float(pts[i, 0]) for i in idx]


def c11_figures() -> CriterionResult:
    from .cli import run

    ck = _Checks()
    lam, mu = 1.0, 1.0
    with tempfile.TemporaryDirectory() as tmp, contextlib.redirect_stdout(io.StringIO()), \
            contextlib.redirect_stderr(io.StringIO()):
        base = ["--lambda", str(lam), "--mu", str(mu), "--formats", "svg", "--out", tmp]
        s1 = run(["spectrum", "--potential", "sombrero", "--x-min", "-1.5", "--x-max", "1.5",
                  "--levels", "4", *base]).status
        s2 = run(["portrait", "--potential", "sombrero", "--energies", "-0.1,0.5", *base]).status
        ck(s1 == 0 and s2 == 0, f"exit statuses {s1}, {s2}")
        if s1 or s2:
            return ck.result(11, "figure reproduction")
        spec_svg = extract_curves(Path(tmp, "spectrum.svg").read_text())
        port_svg = extract_curves(Path(tmp, "portrait.svg").read_text())
    minima = sorted(_local_minima(spec_svg["V(x)"]))
    x0 = math.sqrt(mu / (2 * lam))
    ok = len(minima) == 2 and abs(minima[0] + x0) <= 1e-3 and abs(minima[1] - x0) <= 1e-3
    ck(ok, f"potential minima at {[round(v, 4) for v in minima]} vs +-{x0:.4f}")
    below = sum(1 for lbl in port_svg if lbl.startswith("E=-0.1 "))
    above = sum(1 for lbl in port_svg if lbl.startswith("E=0.5 "))
    ck(below == 2 and above == 1, f"orbit curves: {below} below E=0, {above} above")
    return ck.result(11, "figure reproduction")


CRITERIA: list[Callable[[], CriterionResult]] = [
    c1_sextic_ground_state,
    c2_annihilation,
    c3_parity_audit,
    c4_doublewell_oracle,
    c5_infinite_barrier_limit,
    c6_concentrated_states,
    c7_classical_dynamics,
    c8_local_max_model,
    c9_spinor_spectrum,
    c10_decomposition,
    c11_figures,
]


def run_suite(only=None) -> list[CriterionResult]:
    """Run the selected criteria (all by default), turning exceptions into failures."""
    out = []
    for number, crit in enumerate(CRITERIA, start=1):
        if only and number not in only:
            continue
        try:
            out.append(crit())
        except Exception as exc:  # a crash is a failed criterion, not a crashed suite
            out.append(CriterionResult(number, crit.__name__, False, f"{type(exc).__name__}: {exc}"))
    return out
