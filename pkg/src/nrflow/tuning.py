"""Grid-search tuning of the baseline cascade.

Every gain combination is flown on the horizontal circle with the default
simulation settings; faulted runs score ``inf``.  The grid winner is then
polished by :func:`refine_baseline` inside :data:`DEFAULT_BOUNDS`, and the
result is what :class:`nrflow.baseline_pid.PidGains` ships as its defaults::

    best, _, _ = tune_baseline()
    best, _ = refine_baseline(best, bounds=DEFAULT_BOUNDS)

The box keeps every gain within the range of a stock multirotor cascade.
Without it the search drives the attitude gain past ``1 / dt``, where the
rate clamp turns the inner loop into a relay.
"""

from __future__ import annotations

import itertools
from dataclasses import replace

from nrflow.baseline_pid import PidGains
from nrflow.harness import SimConfig, SimulationFault, rmse, run_closed_loop
from nrflow.trajectories import default_spec

DEFAULT_BOUNDS = {
    "kp_pos": (0.0, 3.0),
    "kp_vel": (0.0, 6.0),
    "ki_vel": (0.0, 1.5),
    "kd_vel": (0.0, 0.6),
    "kp_att": (0.0, 20.0),
}

DEFAULT_GRID = {
    "kp_pos": (0.25, 1.0, 3.0),
    "kp_vel": (2.0, 4.0, 6.0),
    "ki_vel": (0.0, 0.5),
    "kd_vel": (0.0, 0.3, 0.6),
    "kp_att": (6.5, 13.0, 20.0),
}


def score(gains: PidGains, base: SimConfig | None = None) -> float:
    base = base or SimConfig(trajectory=default_spec("horizontal-circle"))
    cfg = replace(base, controller="baseline", gains=gains)
    try:
        return rmse(run_closed_loop(cfg), cfg.skip)
    except SimulationFault:
        return float("inf")


def tune_baseline(grid: dict | None = None, base: SimConfig | None = None, verbose: bool = False):
    """Exhaustive search; returns ``(best_gains, best_rmse, table)``."""
    grid = grid or DEFAULT_GRID
    keys = list(grid)
    table = []
    best, best_score = None, float("inf")
    for combo in itertools.product(*(grid[k] for k in keys)):
        gains = PidGains(**dict(zip(keys, combo)))
        s = score(gains, base)
        table.append((gains, s))
        if verbose:
            print(f"{combo} -> {s:.5f}", flush=True)
        if s < best_score:
            best, best_score = gains, s
    return best, best_score, table


def refine_baseline(
    start: PidGains,
    base: SimConfig | None = None,
    scale: float = 1.5,
    min_scale: float = 1.05,
    bounds: dict | None = None,
    rtol: float = 1e-3,
    verbose: bool = False,
):
    """Coordinate pattern search in log-gain space, started from a grid winner.

    Each sweep tries multiplying and dividing every gain by ``scale``
    (zero gains are probed at a small positive value) and keeps any
    improvement larger than ``rtol``; when a sweep brings nothing the step
    is square-rooted, until it drops below ``min_scale``.  ``bounds`` maps gain names to
    ``(lo, hi)`` boxes; candidates outside are clipped onto the box.
    """
    bounds = bounds or {}
    keys = ("kp_pos", "kp_vel", "ki_vel", "kd_vel", "kp_att")
    probe = {"kp_pos": 0.05, "kp_vel": 0.5, "ki_vel": 0.05, "kd_vel": 0.02, "kp_att": 1.0}
    best, best_score = start, score(start, base)
    while scale >= min_scale:
        improved = False
        for k in keys:
            cur = getattr(best, k)
            candidates = (cur * scale, cur / scale) if cur > 0 else (probe[k],)
            for v in candidates:
                lo, hi = bounds.get(k, (0.0, float("inf")))
                v = min(max(v, lo), hi)
                if v == cur:
                    continue
                trial = replace(best, **{k: v})
                s = score(trial, base)
                if verbose:
                    print(f"{k}={v:.4g} -> {s:.5f}", flush=True)
                if s < best_score * (1.0 - rtol):
                    best, best_score, improved = trial, s, True
                    break
        if not improved:
            scale = scale**0.5
    return best, best_score
