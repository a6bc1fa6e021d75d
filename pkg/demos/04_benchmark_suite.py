"""
Benchmark suite: Newton-Raphson versus cascaded PID
===================================================

Five standard trajectories plus the two lemniscates flown at double speed.
RMSE is taken over position after discarding the first two periods.
"""

from nrflow.harness import SimConfig, run_suite
from nrflow.trajectories import benchmark_suite

results = run_suite(SimConfig(), benchmark_suite())
table = {}
for res in results:
    table.setdefault(res.name, {})[res.cfg.controller] = res.metrics.rmse

print(f"{'trajectory':32s} {'NR':>8s} {'PID':>8s} {'PID/NR':>7s}")
for name, row in table.items():
    nr, pid = row["newton-raphson"], row["baseline"]
    print(f"{name:32s} {nr:8.4f} {pid:8.4f} {pid / nr:7.2f}")
