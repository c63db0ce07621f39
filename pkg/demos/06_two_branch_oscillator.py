"""
A two-branch oscillator
=======================

Two displaced oscillators stacked into a two-component wavefunction share a
zero-energy ground level. Excited levels coincide only when the frequency
ratio is rational within the search bounds, so for ``sqrt(2)`` nothing but
the ground pair is degenerate.
"""

import math

from symbreak.numerics import Grid
from symbreak.spinor import (
    SpinorSystem,
    commutator_audit,
    decompose,
    find_degeneracies,
    grid_spinor_spectrum,
    group_levels,
    reconstruction_residual,
    spinor_spectrum,
)

sysm = SpinorSystem(omega_plus=math.sqrt(2), omega_minus=1.0)
for energy, members in group_levels(spinor_spectrum(sysm, 4.0)):
    print(f"E={energy:.6f}  " + ", ".join(f"{lv.branch}{lv.n}" for lv in members))

print("coincidences up to n=10^4:", find_degeneracies(sysm, 10_000, 1e-9))
print("ratio 3/2:", find_degeneracies(SpinorSystem(1.5, 1.0), 12))

dec = decompose(sysm)
print(f"omega0={dec.omega0:.6f} omega_delta^2={dec.omega_delta_sq:.6f} eps0={dec.eps0:.6f} eps_delta={dec.eps_delta:.6f}")
grid = Grid(-8, 8, 1601)
print("reconstruction residual:", reconstruction_residual(sysm, grid))
print("with denominator-2 offsets:", reconstruction_residual(sysm, grid, as_printed=True))
print("commutator with sigma_3:", commutator_audit(sysm, grid).max_norm)
for lv in grid_spinor_spectrum(sysm, Grid(-10, 10, 2000), 3):
    print(f"grid {lv.branch}{lv.n}: {lv.energy:.6f}")
