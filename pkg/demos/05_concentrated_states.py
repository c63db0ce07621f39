"""
Left, right, even and odd states
================================

With an infinite barrier each well has its own ladder, and every level is
doubly degenerate. States confined to one well sit at ``<x> = -(a+b)/2`` or
``+(a+b)/2``; their sum and difference have definite parity and ``<x> = 0``.
Any combination is an eigenstate, which is where the symmetric description
stops being forced on us.
"""

from symbreak.doublewell import infinite_barrier_states
from symbreak.numerics import Grid, inner_product
from symbreak.qm1d import classify_parity, expectation_x

a, b = 2.0, 0.5
states = infinite_barrier_states(1, a, b, Grid(-a, a, 4001))
for name, st in states._asdict().items():
    print(f"{name:10s} <x> = {expectation_x(st):+.12f}  parity {classify_parity(st).parity}")
print("<L|R> =", inner_product(states.psi_L, states.psi_R))
