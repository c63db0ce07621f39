"""
No symmetric potential breaks parity
====================================

For a mirror-symmetric potential in one dimension the bound states are
non-degenerate, so each one is either even or odd. The audit solves for the
lowest levels and checks both facts; an asymmetric potential is refused.
"""

from symbreak.errors import PotentialNotSymmetric
from symbreak.numerics import Grid
from symbreak.qm1d import AsymmetricSinh, DoubleOscillator, Sextic, Sombrero, parity_audit

grid = Grid(-4, 4, 2000)
for V in (Sombrero(1, 1), Sextic(1), DoubleOscillator(1, 1, 1.5)):
    rep = parity_audit(V, grid, 10)
    print(V.descriptor, "passed" if rep.passed else "FAILED")
    for line in list(rep.lines())[:4]:
        print("   ", line)

try:
    parity_audit(AsymmetricSinh(1, 1), Grid(-3, 5, 1000), 4)
except PotentialNotSymmetric as exc:
    print("asymmetric potential:", exc)
