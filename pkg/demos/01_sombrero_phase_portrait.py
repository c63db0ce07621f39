"""
Phase portrait of the sombrero potential
========================================

A particle in ``V(x) = lam*x**4 - mu*x**2`` has two wells separated by a
maximum at the origin. Orbits below the top (E < 0) stay in one well and
are not mirror symmetric; orbits above it (E > 0) cross both wells and are.
The E = 0 orbit is the separatrix.
"""

from pathlib import Path

import numpy as np

from symbreak.classical import classify_trajectory, hamiltonian, local_max_model, phase_portrait
from symbreak.output import Curve, FigureDocument, render_svg
from symbreak.qm1d import Sombrero

V = Sombrero(lam=1.0, mu=1.0)
print("minima at", V.minima)

# integrate a few orbits with the symplectic splitting (dt = 1e-3, 10^4 steps)
energies = [-0.2, -0.1, 0.0, 0.5, 1.0]
orbits = phase_portrait(V, 1.0, energies, scan_interval=(-3, 3))
for t in orbits:
    drift = np.max(np.abs(hamiltonian(V, 1.0, t.x, t.p) - t.energy))
    print(f"E={t.energy:+.2f}  {t.symmetry_class!s:10s}  x in [{t.x.min():+.3f}, {t.x.max():+.3f}]  drift {drift:.1e}")

# the symmetry class only depends on the energy and the starting well
print(classify_trajectory(V, -0.1, -0.7), classify_trajectory(V, 0.5, 0.0))

# near the top the potential looks like -(gamma^2/2) x^2
model = local_max_model(V, 0.0)
print(f"local maximum: order 2n = {2 * model.n}, gamma^2 = {model.gamma_sq:.6f}")

out = Path("demo_output")
out.mkdir(exist_ok=True)
fig = FigureDocument([Curve(f"E={t.energy:g}", t.x, t.p) for t in orbits], "Sombrero phase portrait", "x", "p")
(out / "sombrero_portrait.svg").write_text(render_svg(fig))
