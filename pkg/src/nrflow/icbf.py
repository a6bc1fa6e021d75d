"""Integral control barrier functions acting on the input rate.

A dynamically defined control law ``udot = Psi(x, u, t)`` is corrected to
``udot = Psi + eta`` so that a barrier ``b(x, u) >= 0`` on state-input
pairs stays forward invariant.  The class-K function is linear,
``gamma(b) = gamma * b``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray


class DegenerateBarrierError(ValueError):
    """An active barrier whose input gradient vanishes."""


@dataclass(frozen=True)
class IcbfConfig:
    """Per-axis angular-rate limits and barrier gain.

    ``literal_lower_branch`` reproduces the lower-limit expression exactly
    as printed in the published pseudocode, ``-gamma*(-rate_min - u_s)``.
    That form never activates for ``rate_min < 0``; it exists only so the
    difference can be shown in a regression test.
    """

    rate_min: float = -0.8
    rate_max: float = 0.8
    gamma: float = 1.0
    enabled: bool = True
    literal_lower_branch: bool = False

    def __post_init__(self) -> None:
        if not self.rate_min < 0 < self.rate_max:
            raise ValueError(f"need rate_min < 0 < rate_max, got [{self.rate_min}, {self.rate_max}]")
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")


@dataclass(frozen=True)
class BarrierEval:
    """A barrier evaluated at one ``(x, u)`` together with the flow terms.

    Attributes:
        b: Barrier value.
        db_du: Gradient of ``b`` with respect to the input.
        db_dx: Gradient of ``b`` with respect to the state.
        xi: Column form of ``db_du``.
        lam: Violation measure; the correction is active when ``lam > 0``.
    """

    b: float
    db_du: NDArray[np.float64]
    db_dx: NDArray[np.float64]
    xi: NDArray[np.float64]
    lam: float


def evaluate_barrier(
    b: float,
    db_du: ArrayLike,
    db_dx: ArrayLike,
    f: ArrayLike,
    psi: ArrayLike,
    gamma: float,
) -> BarrierEval:
    """Assemble ``xi`` and ``lambda`` for barrier ``b`` under drift ``f`` and nominal rate ``psi``."""
    db_du = np.asarray(db_du, dtype=float)
    db_dx = np.asarray(db_dx, dtype=float)
    lam = -(db_dx @ np.asarray(f, float) + db_du @ np.asarray(psi, float) + gamma * b)
    return BarrierEval(b=float(b), db_du=db_du, db_dx=db_dx, xi=db_du.copy(), lam=float(lam))


def eta_general(ev: BarrierEval) -> NDArray[np.float64]:
    """Minimum-norm rate correction restoring ``bdot + gamma(b) >= 0``.

    Returns ``lam / |xi|^2 * xi`` when ``lam > 0`` and zero otherwise.

    Raises:
        DegenerateBarrierError: if the barrier is active but ``xi == 0``.
    """
    if ev.lam <= 0:
        return np.zeros_like(ev.xi)
    nrm2 = float(ev.xi @ ev.xi)
    if nrm2 == 0.0:
        raise DegenerateBarrierError("active barrier has zero input gradient")
    return (ev.lam / nrm2) * ev.xi


def clamp_rate_axis(u_s: float, nominal_rate_s: float, cfg: IcbfConfig) -> float:
    """Filter the rate of one angular-rate input against ``[rate_min, rate_max]``.

    For ``u_s >= 0`` the upper barrier ``rate_max - u_s`` is used, otherwise
    the lower barrier ``u_s - rate_min``.
    """
    if u_s >= 0.0:
        eta = min(cfg.gamma * (cfg.rate_max - u_s) - nominal_rate_s, 0.0)
    elif cfg.literal_lower_branch:
        eta = max(-cfg.gamma * (-cfg.rate_min - u_s) - nominal_rate_s, 0.0)
    else:
        eta = max(-cfg.gamma * (u_s - cfg.rate_min) - nominal_rate_s, 0.0)
    return nominal_rate_s + eta
