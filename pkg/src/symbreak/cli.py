"""Command-line entry point: ``symbreak <command> [flags]``.

Commands are thin adapters over the library. Every run computes all of its
outputs in memory first and only then writes them, so a failed run leaves
no files behind. Exit status is 0 on success, 1 for invalid input and 2
for numerical failures.
"""

from __future__ import annotations

import argparse
import math
import os
import re
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from . import classical, doublewell, qm1d, spinor
from .errors import IoFailure, NonFinite, NumericalError, SymbreakError, UsageError, ValidationError
from .numerics import Grid
from .output import Curve, FigureDocument, render_svg, table_text

__all__ = ["RunConfig", "RunOutcome", "build_parser", "run", "main"]

FORMATS = ("csv", "json", "svg")

# potential name -> (constructor parameters, defaults)
POTENTIALS = {
    "sombrero": {"lam": 1.0, "mu": 1.0},
    "sextic": {"a": 1.0},
    "harmonic": {"omega": 1.0},
    "double-oscillator": {"omega": 1.0, "a": 1.0},
    "double-well": {"alpha": 200.0, "a": 2.0, "b": 0.5},
    "asymmetric": {"nu": 1.0, "alpha": 1.0},
}
SMOOTH = ("sombrero", "sextic", "harmonic", "double-oscillator", "asymmetric")
POTENTIAL_FLAGS = ("lam", "mu", "a", "b", "alpha", "omega", "nu")


@dataclass
class RunConfig:
    command: str
    parameters: dict = field(default_factory=dict)
    output_dir: Path = Path(".")
    formats: tuple[str, ...] = ("csv", "svg")


class RunOutcome(NamedTuple):
    status: int
    files: list[Path]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _float_list(text: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _formats(text: str) -> tuple[str, ...]:
    out = tuple(dict.fromkeys(t.strip() for t in text.split(",") if t.strip()))
    bad = [f for f in out if f not in FORMATS]
    if bad or not out:
        raise argparse.ArgumentTypeError(f"formats must be a subset of {','.join(FORMATS)}, got {text!r}")
    return out


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="symbreak", description="Symmetry and symmetry breaking in 1D toy models.")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    common = _Parser(add_help=False)
    common.add_argument("--out", default=".", help="output directory (default: current)")
    common.add_argument("--formats", type=_formats, default=("csv", "svg"), help="comma list of csv,json,svg")
    common.add_argument("--hbar", type=float, default=1.0)
    common.add_argument("--m", type=float, default=1.0, help="particle mass")

    pot = _Parser(add_help=False)
    pot.add_argument("--potential", choices=list(POTENTIALS), default="sombrero")
    pot.add_argument("--lambda", dest="lam", type=float)
    for name in ("mu", "a", "b", "alpha", "omega", "nu"):
        pot.add_argument(f"--{name}", type=float)
    pot.add_argument("--x-min", type=float, default=-3.0)
    pot.add_argument("--x-max", type=float, default=3.0)

    sp = sub.add_parser("portrait", parents=[common, pot], help="classical phase portrait")
    sp.add_argument("--energies", type=_float_list, default=[-0.1, 0.0, 0.5])
    sp.add_argument("--dt", type=float, default=1e-3)
    sp.add_argument("--steps", type=int, default=10_000)

    sp = sub.add_parser("spectrum", parents=[common, pot], help="grid eigenvalues and eigenstates")
    sp.add_argument("--levels", type=int, default=10)
    sp.add_argument("--points", type=int, default=2000)
    sp.add_argument("--split-parity", action="store_true")
    sp.add_argument("--sampling", choices=["point", "cell"])

    sp = sub.add_parser("doublewell", parents=[common], help="exact levels of the square double well")
    sp.add_argument("--alpha", type=float, default=200.0)
    sp.add_argument("--a", type=float, default=2.0)
    sp.add_argument("--b", type=float, default=0.5)
    sp.add_argument("--levels", type=int, help="number of lowest levels (default: all below the barrier)")
    sp.add_argument("--gap-alphas", type=_float_list, help="barrier heights for a parity-gap sweep")
    sp.add_argument("--pair", type=int, default=1, help="level pair used by the gap sweep")
    sp.add_argument("--threshold", action="store_true", help="also report the threshold barrier height")
    sp.add_argument("--points", type=int, default=2001, help="grid points for plotted states")
    sp.add_argument("--plot-states", type=int, default=4)

    sp = sub.add_parser("spinor", parents=[common], help="two-component oscillator levels")
    sp.add_argument("--omega-plus", type=float, default=math.sqrt(2.0))
    sp.add_argument("--omega-minus", type=float, default=1.0)
    sp.add_argument("--e-max", type=float, default=6.0)
    sp.add_argument("--n-max", type=int, default=1000)
    sp.add_argument("--tol", type=float)
    sp.add_argument("--as-printed", action="store_true", help="use the offsets with denominator 2")

    sp = sub.add_parser("verify", help="run the acceptance suite")
    sp.add_argument("--only", type=lambda t: [int(v) for v in t.split(",")], help="comma list of criterion numbers")
    return p


_NUMERIC_VALUE = re.compile(r"^-[0-9.]")


def _attach_negative_values(argv: Sequence[str]) -> list[str]:
    # argparse reads "-0.1,0.5" as an option; glue such values to their flag
    out: list[str] = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NUMERIC_VALUE.match(tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def _config(ns: argparse.Namespace) -> RunConfig:
    params = {k: v for k, v in vars(ns).items() if k not in ("command", "out", "formats")}
    return RunConfig(ns.command, params, Path(getattr(ns, "out", ".")), getattr(ns, "formats", ()))


def _make_potential(params: dict):
    name = params["potential"]
    allowed = POTENTIALS[name]
    extra = [k for k in POTENTIAL_FLAGS if params.get(k) is not None and k not in allowed]
    if extra:
        flags = ", ".join("--lambda" if k == "lam" else f"--{k}" for k in extra)
        raise UsageError(f"{flags} not used by potential {name!r}")
    kw = {k: (params[k] if params.get(k) is not None else d) for k, d in allowed.items()}
    hbar, m = params["hbar"], params["m"]
    if name == "sombrero":
        return qm1d.Sombrero(kw["lam"], kw["mu"])
    if name == "sextic":
        return qm1d.Sextic(kw["a"], hbar, m)
    if name == "harmonic":
        return qm1d.Harmonic(m, kw["omega"])
    if name == "double-oscillator":
        return qm1d.DoubleOscillator(m, kw["omega"], kw["a"])
    if name == "double-well":
        return qm1d.PiecewiseDoubleWell(kw["alpha"], kw["a"], kw["b"])
    return qm1d.AsymmetricSinh(kw["nu"], kw["alpha"])


def _check_units(params):
    for k in ("hbar", "m"):
        if not (params[k] > 0 and math.isfinite(params[k])):
            raise ValidationError(f"--{k} must be positive and finite")


def _tables(stem: str, rows: list[dict], fieldnames: list[str], formats) -> dict[str, str]:
    return {f"{stem}.{fmt}": table_text(rows, fmt, fieldnames) for fmt in ("csv", "json") if fmt in formats}


def _cmd_portrait(cfg: RunConfig) -> dict[str, str]:
    p = cfg.parameters
    _check_units(p)
    if p["potential"] not in SMOOTH:
        raise UsageError(f"portrait needs a smooth potential, not {p['potential']!r}")
    if not (p["dt"] > 0 and p["steps"] >= 1):
        raise ValidationError("--dt must be positive and --steps at least 1")
    V = _make_potential(p)
    traj = classical.phase_portrait(
        V, p["m"], p["energies"], (p["x_min"], p["x_max"]), dt=p["dt"], steps=p["steps"]
    )
    if traj and all(t.error for t in traj):
        raise NonFinite(f"every trajectory failed; first: {traj[0].error}")
    rows, curves = [], []
    counts: dict[float, int] = {}
    for t in traj:
        idx = counts[t.energy] = counts.get(t.energy, 0) + 1
        if t.error:
            print(f"warning: E={t.energy:g} component {idx}: {t.error}", file=sys.stderr)
            continue
        for x, mom in zip(t.x, t.p):
            rows.append({"energy": t.energy, "component": idx, "class": str(t.symmetry_class), "x": x, "p": mom})
        curves.append(Curve(f"E={t.energy:g} #{idx} {t.symmetry_class}", t.x, t.p))
    out = _tables("portrait", rows, ["energy", "component", "class", "x", "p"], cfg.formats)
    if "svg" in cfg.formats:
        fig = FigureDocument(curves, f"Phase portrait: {V.descriptor}", "x", "p")
        out["portrait.svg"] = render_svg(fig)
    return out


def _potential_curve(V, lo, hi, n=6001):
    xs = np.linspace(lo, hi, n)
    vs = np.asarray(V(xs), dtype=float)
    ok = np.isfinite(vs)
    return xs[ok], vs[ok]


def _cmd_spectrum(cfg: RunConfig) -> dict[str, str]:
    p = cfg.parameters
    _check_units(p)
    V = _make_potential(p)
    if p["levels"] < 1:
        raise ValidationError("--levels must be at least 1")
    if isinstance(V, qm1d.PiecewiseDoubleWell):
        grid = V.box(p["points"])
    else:
        grid = Grid(p["x_min"], p["x_max"], p["points"])
    spec = qm1d.solve_spectrum(
        V, grid, p["levels"], p["hbar"], p["m"], split_parity=p["split_parity"], sampling=p["sampling"]
    )
    if spec.leaky:
        print("warning: some states reach the box edges; enlarge --x-min/--x-max", file=sys.stderr)
    rows = [
        {"index": lv.index, "energy": lv.energy, "parity": str(lv.parity), "asymmetry": lv.asymmetry}
        for lv in spec.levels
    ]
    out = _tables("spectrum", rows, ["index", "energy", "parity", "asymmetry"], cfg.formats)
    if "svg" in cfg.formats:
        E = spec.energies
        xs, vs = _potential_curve(V, grid.x_min, grid.x_max)
        spacing = float(np.diff(E).mean()) if E.size > 1 else max(abs(E[0]), 1.0)
        y_lo = min(float(vs.min()), float(E.min())) - 0.3 * spacing
        y_hi = float(E.max()) + 1.0 * spacing
        curves = [Curve("V(x)", xs, vs, {"stroke": "black"})]
        for lv in spec.levels:
            psi = lv.state.values
            scale = 0.4 * spacing / max(float(np.abs(psi).max()), 1e-300)
            curves.append(Curve(f"n={lv.index} {lv.parity}", grid.x, lv.energy + scale * psi))
        fig = FigureDocument(curves, f"Spectrum: {V.descriptor}", "x", "energy", (grid.x_min, grid.x_max), (y_lo, y_hi))
        out["spectrum.svg"] = render_svg(fig)
    return out


def _cmd_doublewell(cfg: RunConfig) -> dict[str, str]:
    p = cfg.parameters
    _check_units(p)
    params = doublewell.WellParams(p["a"], p["b"], p["alpha"], p["hbar"], p["m"])
    if not params.finite:
        raise ValidationError("--alpha must be finite")
    n = p["levels"]
    if n is not None and n < 1:
        raise ValidationError("--levels must be at least 1")
    levels = doublewell.levels_below_barrier(params, None if n is None else (n + 1) // 2)
    if n is not None:
        if len(levels) < n:
            raise ValidationError(f"only {len(levels)} levels lie below the barrier, asked for {n}")
        levels = levels[:n]
    rows = [{"n": lv.n, "parity": str(lv.parity), "energy": lv.energy} for lv in levels]
    out = _tables("doublewell", rows, ["n", "parity", "energy"], cfg.formats)

    if p["gap_alphas"]:
        sweep = doublewell.parity_gap_sweep(p["gap_alphas"], p["pair"], p["a"], p["b"], p["hbar"], p["m"])
        grows = [dict(e._asdict()) for e in sweep]
        out.update(_tables("doublewell_gaps", grows, ["alpha", "gap", "even", "odd", "missing"], cfg.formats))
    if p["threshold"]:
        a0 = doublewell.threshold_alpha(p["a"], p["b"], p["hbar"], p["m"])
        trow = [{"a": p["a"], "b": p["b"], "alpha0": a0}]
        out.update(_tables("doublewell_threshold", trow, ["a", "b", "alpha0"], cfg.formats))

    if "svg" in cfg.formats and levels:
        grid = Grid(-p["a"], p["a"], p["points"])
        V = qm1d.PiecewiseDoubleWell(p["alpha"], p["a"], p["b"])
        shown = levels[: max(p["plot_states"], 1)]
        E = np.array([lv.energy for lv in shown])
        spacing = max(float(np.diff(E).max()) if E.size > 1 else E[0], 1e-3 * p["alpha"])
        xs = np.array([-p["a"], -p["a"], -p["b"], -p["b"], p["b"], p["b"], p["a"], p["a"]])
        top = 1.2 * p["alpha"]
        vs = np.array([top, 0.0, 0.0, p["alpha"], p["alpha"], 0.0, 0.0, top])
        curves = [Curve("U(x)", xs, vs, {"stroke": "black"})]
        for lv in shown:
            psi = doublewell.assemble_wavefunction(lv, params, grid).values
            scale = 0.4 * spacing / float(np.abs(psi).max())
            curves.append(Curve(f"n={lv.n} {lv.parity}", grid.x, lv.energy + scale * psi))
        y_hi = max(float(E.max()) + spacing, 0.2 * p["alpha"])
        fig = FigureDocument(
            curves, f"Square double well, alpha={p['alpha']:g}", "x", "energy", None, (-0.05 * y_hi, y_hi)
        )
        out["doublewell.svg"] = render_svg(fig)
    return out


def _cmd_spinor(cfg: RunConfig) -> dict[str, str]:
    p = cfg.parameters
    sysm = spinor.SpinorSystem(p["omega_plus"], p["omega_minus"], p["hbar"], p["m"])
    tol = sysm.default_tol if p["tol"] is None else p["tol"]
    levels = spinor.spinor_spectrum(sysm, p["e_max"])
    degs = spinor.find_degeneracies(sysm, p["n_max"], tol)
    dec = spinor.decompose(sysm, p["as_printed"])
    grid = Grid(-8.0, 8.0, 1601)
    resid = spinor.reconstruction_residual(sysm, grid, p["as_printed"])

    lrows = [{"branch": str(lv.branch), "n": lv.n, "energy": lv.energy} for lv in levels]
    drows = [{"n": d.n, "m": d.m, "gap": d.gap, "n_max": p["n_max"], "tol": tol} for d in degs]
    crow = [
        {
            "omega0": dec.omega0,
            "omega_delta_sq": dec.omega_delta_sq,
            "eps0": dec.eps0,
            "eps_delta": dec.eps_delta,
            "as_printed": dec.as_printed,
            "reconstruction_residual": resid,
        }
    ]
    out = _tables("spinor_levels", lrows, ["branch", "n", "energy"], cfg.formats)
    out.update(_tables("spinor_degeneracies", drows, ["n", "m", "gap", "n_max", "tol"], cfg.formats))
    out.update(_tables("spinor_decomposition", crow, list(crow[0]), cfg.formats))
    print(f"{len(degs)} excited-level coincidences with n, m <= {p['n_max']} at tol {tol:.3g}")
    if "svg" in cfg.formats:
        curves = []
        for lv in levels:
            x0 = 0.2 if lv.branch is spinor.Branch.PLUS else -1.0
            curves.append(Curve(f"{lv.branch}{lv.n}", [x0, x0 + 0.8], [lv.energy, lv.energy]))
        fig = FigureDocument(
            curves, "Two-branch oscillator levels (left: minus, right: plus)", "branch", "energy",
            (-1.2, 1.2), (-0.05 * p["e_max"], 1.05 * p["e_max"]),
        )
        out["spinor.svg"] = render_svg(fig)
    return out


def _cmd_verify(cfg: RunConfig) -> int:
    from .acceptance import run_suite

    results = run_suite(cfg.parameters.get("only"))
    for r in results:
        print(r.line())
    return 0 if all(r.passed for r in results) else 2


COMMANDS = {
    "portrait": _cmd_portrait,
    "spectrum": _cmd_spectrum,
    "doublewell": _cmd_doublewell,
    "spinor": _cmd_spinor,
}


def _emit(files: dict[str, str], out_dir: Path) -> list[Path]:
    """Write all files or none of them."""
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoFailure(f"cannot create {out_dir}: {exc}") from exc
    staged: list[tuple[str, Path]] = []
    try:
        for name in sorted(files):
            fd, tmp = tempfile.mkstemp(prefix=f".{name}.", dir=out_dir)
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(files[name])
            staged.append((tmp, out_dir / name))
        for tmp, final in staged:
            os.replace(tmp, final)
    except OSError as exc:
        for tmp, _ in staged:
            if os.path.exists(tmp):
                os.remove(tmp)
        raise IoFailure(f"cannot write outputs to {out_dir}: {exc}") from exc
    return [final for _, final in staged]


def run(argv: Sequence[str] | None = None) -> RunOutcome:
    """Parse ``argv``, run the command and return its status and written files."""
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        ns = build_parser().parse_args(_attach_negative_values(argv))
        cfg = _config(ns)
        if cfg.command == "verify":
            return RunOutcome(_cmd_verify(cfg), [])
        files = COMMANDS[cfg.command](cfg)
        written = _emit(files, cfg.output_dir)
    except (ValidationError, IoFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return RunOutcome(1, [])
    except (NumericalError, SymbreakError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return RunOutcome(2, [])
    for path in written:
        print(path)
    return RunOutcome(0, written)


def main(argv: Sequence[str] | None = None) -> int:
    try:
        status = run(argv).status
    except SystemExit as exc:  # --help
        status = exc.code if isinstance(exc.code, int) else 0
    return status


if __name__ == "__main__":
    sys.exit(main())
