"""
Exact levels of a square double well
====================================

Two wells of width ``a - b`` are separated by a barrier of height
``alpha``. Below the barrier the levels come in even/odd pairs from the
matching conditions at ``|x| = b``. As the barrier grows the pairs merge
toward the single-well levels ``(pi n hbar)**2 / (2 m (a - b)**2)``.
"""

import math

from symbreak.doublewell import (
    WellParams,
    levels_below_barrier,
    limit_levels,
    parity_gap_sweep,
    threshold_alpha,
)
from symbreak.qm1d import PiecewiseDoubleWell, solve_spectrum

a, b = 2.0, 0.5
params = WellParams(a, b, alpha=200.0)
exact = levels_below_barrier(params)
print(f"{len(exact)} levels below alpha = {params.alpha:g}")

# the grid solver agrees, pair by pair
V = PiecewiseDoubleWell(200.0, a, b)
grid = solve_spectrum(V, V.box(4000), 6, split_parity=True)
for lv, g in zip(exact, grid.levels):
    print(f"n={lv.n} {lv.parity!s:4s}  exact {lv.energy:.8f}  grid {g.energy:.8f}")

print("single-well limit, n = 1:", limit_levels(a, b, n=1))
a0 = threshold_alpha(a, b)
print(f"first level appears below the barrier at alpha0 = {a0:.6f} (pi^2/8L^2 = {math.pi**2 / (8 * 1.5**2):.6f})")

for e in parity_gap_sweep([5, 20, 50, 200, 800, 1e4], 1, a, b):
    print(f"alpha={e.alpha:8g}  odd - even = {e.gap:.3e}")
