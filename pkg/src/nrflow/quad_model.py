"""Quadrotor plant: state/input layout, parameters and RK4 integration.

States are length-9 arrays ``(px, py, pz, vx, vy, vz, phi, theta, psi)`` in
a fixed world frame; inputs are length-4 arrays ``(u_tau, u_p, u_q, u_r)``
holding net thrust [N] and the three commanded angle rates [rad/s].

The attitude channel treats the rate commands as ideal Euler-angle rates.
The translational channel uses the exact thrust direction

    d = Rz(psi) @ (-sin(phi), sin(theta) cos(phi), cos(theta) cos(phi))

whose hover linearization gives ``dvx/dphi = -g`` and ``dvy/dtheta = +g``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

PX, PY, PZ, VX, VY, VZ, PHI, THETA, PSI = range(9)
TAU, RATE_P, RATE_Q, RATE_R = range(4)

STATE_DIM = 9
INPUT_DIM = 4

# Runs abort once |theta| reaches this margin below pi/2.
PITCH_LIMIT = math.pi / 2 - 0.01


class PlantDomainError(ValueError):
    """Raised when the plant is evaluated outside its valid domain."""


@dataclass(frozen=True)
class QuadParams:
    """Physical parameters of the vehicle.

    Attributes:
        m: Mass [kg].
        g: Gravitational acceleration [m/s^2].
    """

    m: float = 1.69
    g: float = 9.81

    def __post_init__(self) -> None:
        if not (self.m > 0 and self.g > 0):
            raise ValueError(f"mass and gravity must be positive, got m={self.m}, g={self.g}")

    @property
    def max_thrust(self) -> float:
        return 4.0 * self.m * self.g


def make_state(
    p: ArrayLike = (0.0, 0.0, 0.0),
    v: ArrayLike = (0.0, 0.0, 0.0),
    angles: ArrayLike = (0.0, 0.0, 0.0),
) -> NDArray[np.float64]:
    """Pack position, velocity and (roll, pitch, yaw) into a state vector."""
    return np.concatenate([np.asarray(p, float), np.asarray(v, float), np.asarray(angles, float)])


def hover_input(params: QuadParams) -> NDArray[np.float64]:
    """Input that holds the vehicle at rest with level attitude."""
    return np.array([params.m * params.g, 0.0, 0.0, 0.0])


def clamp_thrust(u: NDArray[np.float64], params: QuadParams) -> NDArray[np.float64]:
    """Clip the thrust component to ``[0, 4 m g]``; rates pass through."""
    out = np.array(u, dtype=float)
    out[TAU] = min(max(out[TAU], 0.0), params.max_thrust)
    return out


def _check_domain(x, u) -> None:
    if not all(math.isfinite(c) for c in x):
        raise PlantDomainError(f"non-finite state {list(x)}")
    if not all(math.isfinite(c) for c in u):
        raise PlantDomainError(f"non-finite input {list(u)}")
    if abs(x[THETA]) >= math.pi / 2:
        raise PlantDomainError(f"pitch {x[THETA]:.6f} rad outside (-pi/2, pi/2)")


def _deriv(x, u, m: float, g: float) -> tuple[float, ...]:
    # Scalar core shared by plant_derivative and the fixed-input integrator.
    phi, theta, psi = x[6], x[7], x[8]
    sphi, cphi = math.sin(phi), math.cos(phi)
    sth, cth = math.sin(theta), math.cos(theta)
    spsi, cpsi = math.sin(psi), math.cos(psi)
    dx_body = -sphi
    dy_body = sth * cphi
    a = u[0] / m
    return (
        x[3],
        x[4],
        x[5],
        a * (cpsi * dx_body - spsi * dy_body),
        a * (spsi * dx_body + cpsi * dy_body),
        a * cth * cphi - g,
        u[1],
        u[2],
        u[3],
    )


def plant_derivative(x: ArrayLike, u: ArrayLike, params: QuadParams) -> NDArray[np.float64]:
    """Time derivative of the nonlinear plant state.

    Raises:
        PlantDomainError: if ``|theta| >= pi/2`` or any entry is non-finite.
    """
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    _check_domain(x, u)
    return np.array(_deriv(x.tolist(), u.tolist(), params.m, params.g))


def rk4_step(x: ArrayLike, u: ArrayLike, dt: float, params: QuadParams) -> NDArray[np.float64]:
    """One classical Runge-Kutta step with the input held constant."""
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    x = np.asarray(x, dtype=float)
    k1 = plant_derivative(x, u, params)
    k2 = plant_derivative(x + 0.5 * dt * k1, u, params)
    k3 = plant_derivative(x + 0.5 * dt * k2, u, params)
    k4 = plant_derivative(x + dt * k3, u, params)
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate_hold(
    x: ArrayLike, u: ArrayLike, dt: float, n_steps: int, params: QuadParams
) -> NDArray[np.float64]:
    """Advance ``n_steps`` RK4 steps of size ``dt`` under a zero-order-held input.

    Numerically the same scheme as repeated :func:`rk4_step`, written on
    Python floats because the closed-loop harness calls it every control
    period and small-array numpy overhead dominates there.

    Raises:
        PlantDomainError: on non-finite values or when ``|theta|`` reaches
            :data:`PITCH_LIMIT`.
    """
    xs = [float(c) for c in np.asarray(x, dtype=float)]
    us = [float(c) for c in np.asarray(u, dtype=float)]
    _check_domain(xs, us)
    m, g = params.m, params.g
    h2, h6 = 0.5 * dt, dt / 6.0
    rng = range(STATE_DIM)
    for _ in range(n_steps):
        k1 = _deriv(xs, us, m, g)
        k2 = _deriv([xs[i] + h2 * k1[i] for i in rng], us, m, g)
        k3 = _deriv([xs[i] + h2 * k2[i] for i in rng], us, m, g)
        k4 = _deriv([xs[i] + dt * k3[i] for i in rng], us, m, g)
        xs = [xs[i] + h6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) for i in rng]
        if abs(xs[THETA]) >= PITCH_LIMIT:
            raise PlantDomainError(f"pitch {xs[THETA]:.6f} rad reached the singularity margin")
    if not all(math.isfinite(c) for c in xs):
        raise PlantDomainError("state became non-finite during integration")
    return np.array(xs)
