"""Symmetry and its breaking in one-dimensional classical and quantum toy models.

Modules
-------
numerics    grids, tridiagonal eigensolver, root finding, symplectic integration
classical   phase portraits, trajectory symmetry classes, local-maximum model
qm1d        grid Schrodinger spectra, parity classification and audits
doublewell  exact levels of the square double well and their parity gaps
spinor      two-branch oscillator levels, degeneracies and decomposition
output      deterministic SVG figures and CSV/JSON tables
cli         ``symbreak`` command line
"""

from .errors import *  # noqa: F401,F403
from .numerics import Grid, TabulatedState, TridiagonalOperator
from .qm1d import (
    AsymmetricSinh,
    DoubleOscillator,
    Harmonic,
    Parity,
    PiecewiseDoubleWell,
    Sextic,
    Sombrero,
    solve_spectrum,
)

__version__ = "0.1.0"
