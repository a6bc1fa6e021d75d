"""
Speedup sweep and the asymptotic error bound
============================================

Larger speedup shrinks the reference-speed share of the asymptotic bound,
``nu1 + nu2 / alpha``.  The realized tail error should stay under it.

On this plant the predictor share ``nu1`` dominates, so the tail error
barely moves with ``alpha``.  Too small a speedup no longer stabilizes the
vehicle: at ``alpha = 10`` the horizontal circle slowly diverges.
"""

from nrflow.harness import SimConfig, SimulationFault, sweep_alpha
from nrflow.trajectories import default_spec

base = SimConfig(trajectory=default_spec("horizontal-circle"))
print(f"{'alpha':>5s} {'tail err':>9s} {'nu1':>7s} {'nu2/a':>7s} {'bound':>7s}")
for a in [10, 20, 30, 60, 90]:
    try:
        (res,) = sweep_alpha(base, [a])
    except SimulationFault as exc:
        print(f"{a:5.0f}  {exc}")
        continue
    m = res.metrics
    print(f"{a:5.0f} {m.tail_sup_error:9.4f} {m.nu1_hat:7.4f} {m.nu2 / a:7.4f} {m.nu1_hat + m.nu2 / a:7.4f}")
