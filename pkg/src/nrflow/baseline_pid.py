"""Cascaded PID tracker used as the comparison baseline.

Position P (with reference-velocity feed-forward) -> velocity PID ->
desired acceleration -> thrust along the current body axis and small-angle
roll/pitch targets -> attitude P producing rate commands.  The output has
the same ``(u_tau, u_p, u_q, u_r)`` layout and the same +-0.8 rad/s rate
bound as the Newton-Raphson controller.

The default gains come from :func:`nrflow.tuning.tune_baseline` followed by
:func:`nrflow.tuning.refine_baseline` on the horizontal circle and are
frozen here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from nrflow.quad_model import PHI, PSI, THETA, QuadParams

TILT_LIMIT = 0.5
RATE_LIMIT = 0.8


@dataclass(frozen=True)
class PidGains:
    # frozen output of the documented tuning run; see nrflow.tuning
    kp_pos: float = 1.0 / 9.0
    kp_vel: float = 6.0
    ki_vel: float = 0.0
    kd_vel: float = 0.6
    kp_att: float = 20.0
    vel_int_limit: float = 1.0

    def __post_init__(self) -> None:
        gains = (self.kp_pos, self.kp_vel, self.ki_vel, self.kd_vel, self.kp_att)
        if min(gains) < 0:
            raise ValueError(f"gains must be non-negative: {self}")
        if not self.vel_int_limit > 0:
            raise ValueError(f"vel_int_limit must be positive, got {self.vel_int_limit}")


@dataclass
class PidState:
    """Velocity-loop integrator and the previous velocity error."""

    integ: NDArray[np.float64] = field(default_factory=lambda: np.zeros(3))
    prev_err: NDArray[np.float64] | None = None


def thrust_direction(phi: float, theta: float, psi: float) -> NDArray[np.float64]:
    sphi, cphi = math.sin(phi), math.cos(phi)
    bx, by, bz = -sphi, math.sin(theta) * cphi, math.cos(theta) * cphi
    spsi, cpsi = math.sin(psi), math.cos(psi)
    return np.array([cpsi * bx - spsi * by, spsi * bx + cpsi * by, bz])


def baseline_step(
    x: ArrayLike,
    r: ArrayLike,
    r_dot: ArrayLike,
    gains: PidGains,
    params: QuadParams,
    dt: float,
    pid: PidState,
) -> NDArray[np.float64]:
    """One update of the cascade; ``pid`` is mutated.

    Args:
        x: Plant state.
        r: Reference output ``(px, py, pz, psi)``.
        r_dot: Reference output rate, used as velocity feed-forward.
        gains: Loop gains.
        params: Vehicle parameters.
        dt: Control period [s].
        pid: Integrator and derivative memory.

    Returns:
        Input ``(u_tau, u_p, u_q, u_r)``.
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    x = np.asarray(x, dtype=float)
    r = np.asarray(r, dtype=float)
    r_dot = np.asarray(r_dot, dtype=float)

    v_des = gains.kp_pos * (r[:3] - x[:3]) + r_dot[:3]
    err = v_des - x[3:6]
    pid.integ = np.clip(pid.integ + err * dt, -gains.vel_int_limit, gains.vel_int_limit)
    deriv = np.zeros(3) if pid.prev_err is None else (err - pid.prev_err) / dt
    pid.prev_err = err
    a_des = gains.kp_vel * err + gains.ki_vel * pid.integ + gains.kd_vel * deriv

    f = a_des + np.array([0.0, 0.0, params.g])
    phi, theta, psi = x[PHI], x[THETA], x[PSI]
    u_tau = params.m * float(f @ thrust_direction(phi, theta, psi))

    # express the desired direction in the yaw-aligned frame, then invert d ~ (-phi, theta, 1)
    c, s = math.cos(psi), math.sin(psi)
    fx, fy = c * f[0] + s * f[1], -s * f[0] + c * f[1]
    fz = max(f[2], 1e-6)
    phi_des = min(max(-fx / fz, -TILT_LIMIT), TILT_LIMIT)
    theta_des = min(max(fy / fz, -TILT_LIMIT), TILT_LIMIT)

    rates = gains.kp_att * np.array([phi_des - phi, theta_des - theta, r[3] - psi])
    rates = np.clip(rates, -RATE_LIMIT, RATE_LIMIT)
    return np.array([u_tau, *rates])


@dataclass
class BaselineController:
    params: QuadParams
    gains: PidGains = field(default_factory=PidGains)
    dt: float = 0.01
    pid: PidState = field(default_factory=PidState)

    def reset(self) -> None:
        self.pid = PidState()

    def step(self, x: ArrayLike, r: ArrayLike, r_dot: ArrayLike) -> NDArray[np.float64]:
        return baseline_step(x, r, r_dot, self.gains, self.params, self.dt, self.pid)
