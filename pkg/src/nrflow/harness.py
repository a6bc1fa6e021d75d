"""Closed-loop simulation, tracking metrics and CSV logging."""

from __future__ import annotations

import csv
import io
import math
import os
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from numpy.typing import NDArray

from nrflow.baseline_pid import BaselineController, PidGains
from nrflow.icbf import IcbfConfig
from nrflow.nr_controller import ControllerFault, NewtonRaphsonController, NrConfig
from nrflow.predictor import make_predictor, predict_output
from nrflow.quad_model import (
    PSI,
    PlantDomainError,
    QuadParams,
    clamp_thrust,
    integrate_hold,
    make_state,
)
from nrflow.trajectories import TrajectorySpec, default_spec, reference, reference_derivative, sup_ref_speed

CONTROLLERS = ("newton-raphson", "baseline")

CSV_HEADER = (
    "t,px,py,pz,vx,vy,vz,phi,theta,psi,u_tau,u_p,u_q,u_r,"
    "rx,ry,rz,rpsi,yhat_x,yhat_y,yhat_z,yhat_psi"
).split(",")


class SimulationFault(RuntimeError):
    """The plant or controller left its valid domain during a run."""

    def __init__(self, t: float, reason: str) -> None:
        super().__init__(f"simulation fault at t={t:.3f} s: {reason}")
        self.t = t


@dataclass(frozen=True)
class SimConfig:
    """One closed-loop scenario.

    ``duration`` and ``transient_skip`` default to 10 and 2 trajectory
    periods.  ``seed`` is accepted for interface stability only; runs are
    deterministic.
    """

    trajectory: TrajectorySpec = field(default_factory=lambda: default_spec("horizontal-circle"))
    controller: str = "newton-raphson"
    nr: NrConfig = field(default_factory=NrConfig)
    icbf: IcbfConfig = field(default_factory=IcbfConfig)
    gains: PidGains = field(default_factory=PidGains)
    params: QuadParams = field(default_factory=QuadParams)
    dt_plant: float = 0.001
    duration: float | None = None
    transient_skip: float | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.controller not in CONTROLLERS:
            raise ValueError(f"unknown controller {self.controller!r}; valid: {', '.join(CONTROLLERS)}")
        if not self.dt_plant > 0:
            raise ValueError(f"dt_plant must be positive, got {self.dt_plant}")
        n = round(self.dt_ctrl / self.dt_plant)
        if n < 1 or abs(n * self.dt_plant - self.dt_ctrl) > 1e-12:
            raise ValueError(f"dt_plant={self.dt_plant} must divide dt_ctrl={self.dt_ctrl}")
        if self.total_duration < 0:
            raise ValueError(f"duration must be non-negative, got {self.total_duration}")
        if self.total_duration > 0 and not self.total_duration > self.skip:
            raise ValueError(f"duration {self.total_duration} must exceed transient_skip {self.skip}")

    @property
    def dt_ctrl(self) -> float:
        return self.nr.dt_ctrl

    @property
    def plant_substeps(self) -> int:
        return round(self.dt_ctrl / self.dt_plant)

    @property
    def total_duration(self) -> float:
        return 10.0 * self.trajectory.period if self.duration is None else self.duration

    @property
    def skip(self) -> float:
        return 2.0 * self.trajectory.period if self.transient_skip is None else self.transient_skip


@dataclass
class TrajectoryLog:
    """Per-control-step record.

    ``u[k]`` is the input held over ``[t[k], t[k+1])`` and ``y_hat[k]`` is
    the prediction of the output at ``t[k] + T`` made at ``t[k]``.
    ``step_times`` holds controller wall-clock durations and is never
    written to CSV.
    """

    t: NDArray[np.float64]
    x: NDArray[np.float64]
    u: NDArray[np.float64]
    r: NDArray[np.float64]
    y_hat: NDArray[np.float64]
    step_times: NDArray[np.float64] = field(default_factory=lambda: np.zeros(0))

    def __len__(self) -> int:
        return len(self.t)

    @property
    def y(self) -> NDArray[np.float64]:
        return np.column_stack([self.x[:, :3], self.x[:, PSI]])

    def as_rows(self) -> NDArray[np.float64]:
        return np.column_stack([self.t, self.x, self.u, self.r, self.y_hat])


@dataclass(frozen=True)
class RunMetrics:
    rmse: float
    yaw_rmse: float
    nu1_hat: float
    nu2: float
    tail_sup_error: float
    max_abs_rate: float
    mean_step_time: float
    max_step_time: float


def initial_state(spec: TrajectorySpec) -> NDArray[np.float64]:
    """At rest on the reference start point with yaw aligned."""
    r0 = reference(spec, 0.0)
    return make_state(p=r0[:3], angles=(0.0, 0.0, r0[3]))


def run_closed_loop(cfg: SimConfig) -> TrajectoryLog:
    """Simulate one scenario.

    The controller runs every ``dt_ctrl``; between updates the plant is
    integrated with RK4 at ``dt_plant`` under a zero-order hold of the
    thrust-clamped input.

    Raises:
        SimulationFault: if the plant or controller faults; carries the time stamp.
    """
    spec, params = cfg.trajectory, cfg.params
    dt = cfg.dt_ctrl
    n_rows = math.floor(cfg.total_duration / dt + 1e-9) + 1
    mats = make_predictor(params, cfg.nr.T)
    T = cfg.nr.T

    if cfg.controller == "newton-raphson":
        nr = NewtonRaphsonController(params, cfg.nr, cfg.icbf, mats=mats)

        def control(t, x):
            return nr.step(x, reference(spec, t + T))
    else:
        pid = BaselineController(params, cfg.gains, dt)

        def control(t, x):
            return pid.step(x, reference(spec, t), reference_derivative(spec, t))

    ts = np.arange(n_rows) * dt
    xs = np.empty((n_rows, 9))
    us = np.empty((n_rows, 4))
    rs = np.empty((n_rows, 4))
    yh = np.empty((n_rows, 4))
    step_times = np.empty(n_rows)

    x = initial_state(spec)
    clock = time.perf_counter
    for k in range(n_rows):
        t = float(ts[k])
        try:
            t0 = clock()
            u = control(t, x)
            step_times[k] = clock() - t0
        except ControllerFault as exc:
            raise SimulationFault(t, str(exc)) from exc
        xs[k] = x
        us[k] = u
        rs[k] = reference(spec, t)
        yh[k] = predict_output(x, u, mats)
        if k + 1 < n_rows:
            try:
                x = integrate_hold(x, clamp_thrust(u, params), cfg.dt_plant, cfg.plant_substeps, params)
            except PlantDomainError as exc:
                raise SimulationFault(t, str(exc)) from exc
    return TrajectoryLog(t=ts, x=xs, u=us, r=rs, y_hat=yh, step_times=step_times)


def _window(log: TrajectoryLog, skip: float) -> NDArray[np.bool_]:
    mask = log.t >= skip - 1e-9
    if not mask.any():
        raise ValueError(f"no samples at or after t={skip} (log ends at {log.t[-1] if len(log) else 'empty'})")
    return mask


def rmse(log: TrajectoryLog, skip: float) -> float:
    """Root-mean-square position error norm over samples with ``t >= skip``."""
    mask = _window(log, skip)
    err = log.r[mask, :3] - log.x[mask, :3]
    return float(np.sqrt(np.mean(np.sum(err**2, axis=1))))


def tail_metrics(log: TrajectoryLog, spec: TrajectorySpec, cfg: SimConfig) -> RunMetrics:
    """Tracking and bound quantities over the post-transient window.

    The prediction logged at ``t`` is compared with the realized output at
    the sample nearest ``t + T``; errors are norms in output space.
    """
    skip = cfg.skip
    mask = _window(log, skip)
    shift = round(cfg.nr.T / cfg.dt_ctrl)
    idx = np.flatnonzero(mask)
    idx = idx[idx + shift < len(log)]
    if idx.size == 0:
        raise ValueError("log too short for the prediction horizon after the transient window")
    y = log.y
    nu1 = float(np.max(np.linalg.norm(log.y_hat[idx] - y[idx + shift], axis=1)))
    tail_err = np.linalg.norm(log.r[mask] - y[mask], axis=1)
    yaw_err = log.r[mask, 3] - y[mask, 3]
    st = log.step_times if log.step_times.size else np.zeros(1)
    return RunMetrics(
        rmse=rmse(log, skip),
        yaw_rmse=float(np.sqrt(np.mean(yaw_err**2))),
        nu1_hat=nu1,
        nu2=sup_ref_speed(spec),
        tail_sup_error=float(np.max(tail_err)),
        max_abs_rate=float(np.max(np.abs(log.u[:, 1:]))) if len(log) else 0.0,
        mean_step_time=float(np.mean(st)),
        max_step_time=float(np.max(st)),
    )


def format_csv(log: TrajectoryLog) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in log.as_rows():
        w.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def write_csv(log: TrajectoryLog, path: str | os.PathLike) -> None:
    """Write the log with shortest round-trip float formatting.

    Raises:
        OSError: with the offending path in the message.
    """
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(format_csv(log))
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write trajectory log: {exc.strerror}", str(path)) from exc


def read_csv(path: str | os.PathLike) -> TrajectoryLog:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if rows[0] != CSV_HEADER:
        raise ValueError(f"{path}: unexpected header {rows[0]}")
    data = np.array([[float(v) for v in row] for row in rows[1:]], dtype=float).reshape(-1, len(CSV_HEADER))
    return TrajectoryLog(t=data[:, 0], x=data[:, 1:10], u=data[:, 10:14], r=data[:, 14:18], y_hat=data[:, 18:22])


@dataclass(frozen=True)
class RunResult:
    name: str
    cfg: SimConfig
    log: TrajectoryLog
    metrics: RunMetrics


def run_scenario(cfg: SimConfig, name: str = "") -> RunResult:
    log = run_closed_loop(cfg)
    return RunResult(name or cfg.trajectory.kind, cfg, log, tail_metrics(log, cfg.trajectory, cfg))


def run_suite(base: SimConfig, suite: list[tuple[str, TrajectorySpec]], controllers=CONTROLLERS) -> list[RunResult]:
    """Every scenario in ``suite`` under every controller, in a fixed order."""
    out = []
    for name, spec in suite:
        for ctrl in controllers:
            out.append(run_scenario(replace(base, trajectory=spec, controller=ctrl), name))
    return out


def sweep_alpha(base: SimConfig, alphas) -> list[RunResult]:
    return [run_scenario(replace(base, controller="newton-raphson", nr=replace(base.nr, alpha=a))) for a in alphas]
