"""
An exactly annihilated ground state
===================================

``phi = exp(-a x**4)`` is annihilated by ``A = -i(d/dx + 4 a x**3)``, so it
is a zero-energy eigenstate of ``A^dagger A``, whose potential is the sextic
``hbar**2/(2m) (16 a**2 x**6 - 12 a x**2)``. The grid solver should
recover it, with errors falling like ``dx**2``.
"""

import numpy as np

from symbreak.numerics import Grid
from symbreak.qm1d import annihilation_residual, classify_parity, sextic_ground_check

for n in (1000, 2000, 4000):
    chk = sextic_ground_check(1.0, Grid(-3, 3, n))
    print(f"n={n:5d}  E0={chk.E0:+.3e}  overlap={chk.overlap:.12f}  {classify_parity(chk.state).parity}")

for n in (1001, 2001, 4001):
    print(f"n={n:5d}  ||A phi||/||phi|| = {annihilation_residual(1.0, Grid(-3, 3, n)):.3e}")

# a Gaussian is not annihilated: the residual is of order one
print("gaussian:", annihilation_residual(1.0, Grid(-3, 3, 4001), lambda x: np.exp(-x * x)))
