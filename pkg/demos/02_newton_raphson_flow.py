"""
Newton-Raphson flow on a static map
===================================

Solve u**3 = 8 by integrating the flow udot = (dg/du)^-1 (r - g(u)).  The
residual decays like exp(-t) regardless of how nonlinear g is.
"""

import numpy as np

from nrflow.nr_controller import memoryless_nr_rate

r, u, dt = 8.0, 1.0, 1e-3
for k in range(5001):
    if k % 1000 == 0:
        t = k * dt
        print(f"t={t:3.1f}  u={u:.6f}  residual={r - u**3:.6f}  7*exp(-t)={7 * np.exp(-t):.6f}")
    u += dt * memoryless_nr_rate(u**3, 3 * u**2, r)[0]
