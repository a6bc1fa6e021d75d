"""
Integral barrier on the angular rates
=====================================

Fly the horizontal circle with and without the rate barrier and compare
the largest commanded roll/pitch/yaw rate.  Pass ``--plot`` to save a
figure of the roll and pitch rate commands.
"""

import sys
from dataclasses import replace

from nrflow.harness import SimConfig, run_scenario
from nrflow.icbf import IcbfConfig
from nrflow.trajectories import default_spec

base = SimConfig(trajectory=default_spec("horizontal-circle"))
on = run_scenario(base)
off = run_scenario(replace(base, icbf=IcbfConfig(enabled=False)))
for label, res in (("barrier on", on), ("barrier off", off)):
    m = res.metrics
    print(f"{label:12s} max|rate| = {m.max_abs_rate:.3f} rad/s   rmse = {m.rmse:.4f} m")

if "--plot" in sys.argv:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(2, 1, sharex=True, figsize=(7, 5))
    for ax, idx, name in zip(axes, (1, 2), ("roll rate", "pitch rate")):
        ax.plot(off.log.t, off.log.u[:, idx], lw=0.8, label="no barrier")
        ax.plot(on.log.t, on.log.u[:, idx], lw=0.8, label="barrier")
        ax.axhline(0.8, color="k", ls="--", lw=0.5)
        ax.axhline(-0.8, color="k", ls="--", lw=0.5)
        ax.set_ylabel(f"{name} [rad/s]")
    axes[0].legend()
    axes[1].set_xlabel("t [s]")
    fig.savefig("rate_barrier.png", dpi=120)
    print("saved rate_barrier.png")
