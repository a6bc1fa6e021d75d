"""Newton-Raphson flow tracking controller.

The controller integrates its own input.  Each control period it computes
the Newton direction that moves the predicted output onto the reference
one horizon ahead, filters the angular-rate components through the
integral barrier, and takes an explicit Euler step of size ``alpha * dt``.
Only ``r(t + T)`` is consumed; no reference derivative is ever needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from nrflow.icbf import IcbfConfig, clamp_rate_axis
from nrflow.predictor import (
    PredictorMatrices,
    SingularJacobianError,
    make_predictor,
    predict_output,
)
from nrflow.quad_model import RATE_P, RATE_Q, RATE_R, QuadParams, hover_input


class ControllerFault(RuntimeError):
    """Non-finite data reached the controller."""


@dataclass(frozen=True)
class NrConfig:
    """Speedup ``alpha``, lookahead ``T`` [s] and control period ``dt_ctrl`` [s]."""

    alpha: float = 30.0
    T: float = 0.8
    dt_ctrl: float = 0.01

    def __post_init__(self) -> None:
        if not (self.alpha > 0 and self.T > 0 and self.dt_ctrl > 0):
            raise ValueError(f"alpha, T and dt_ctrl must be positive: {self}")
        # explicit Euler on the closed-loop pole at -alpha
        if not self.alpha * self.dt_ctrl < 1.0:
            raise ValueError(
                f"alpha * dt_ctrl = {self.alpha * self.dt_ctrl:g} must be < 1 for a stable update"
            )


@dataclass
class ControllerState:
    u: NDArray[np.float64]

    @classmethod
    def at_hover(cls, params: QuadParams) -> ControllerState:
        return cls(u=hover_input(params))


def memoryless_nr_rate(g_val: ArrayLike, jac: ArrayLike, r: ArrayLike) -> NDArray[np.float64]:
    """Newton-Raphson flow direction ``jac^-1 (r - g(u))`` for a static map.

    Raises:
        SingularJacobianError: if ``jac`` cannot be inverted.
    """
    jac = np.atleast_2d(np.asarray(jac, dtype=float))
    resid = np.atleast_1d(np.asarray(r, float) - np.asarray(g_val, float))
    if jac.shape == (1, 1):
        # scalar maps skip the LAPACK call
        if jac[0, 0] == 0.0 or not np.isfinite(jac[0, 0]):
            raise SingularJacobianError("Jacobian is zero")
        return resid / jac[0, 0]
    try:
        return np.linalg.solve(jac, resid)
    except np.linalg.LinAlgError as exc:
        raise SingularJacobianError(str(exc)) from exc


def nominal_rate(
    x: ArrayLike, u: ArrayLike, r_future: ArrayLike, mats: PredictorMatrices
) -> NDArray[np.float64]:
    """Unscaled Newton direction for the dynamic plant (``alpha`` applied later)."""
    return mats.CB_tilde_inv @ (np.asarray(r_future, float) - predict_output(x, u, mats))


def filter_rates(u: NDArray[np.float64], rate: NDArray[np.float64], icbf: IcbfConfig) -> NDArray[np.float64]:
    """Apply the per-axis barrier to the p, q, r components; thrust passes through."""
    if not icbf.enabled:
        return rate
    out = rate.copy()
    for s in (RATE_P, RATE_Q, RATE_R):
        out[s] = clamp_rate_axis(float(u[s]), float(rate[s]), icbf)
    return out


def step(
    state: ControllerState,
    x: ArrayLike,
    r_future: ArrayLike,
    cfg: NrConfig,
    mats: PredictorMatrices,
    icbf: IcbfConfig,
) -> NDArray[np.float64]:
    """Advance the controller one period and return the new input.

    ``state.u`` is updated in place.

    Raises:
        ControllerFault: if the state, reference or resulting input is not finite.
    """
    x = np.asarray(x, dtype=float)
    r_future = np.asarray(r_future, dtype=float)
    if not (np.isfinite(x).all() and np.isfinite(r_future).all()):
        raise ControllerFault("non-finite state or reference")
    rate = filter_rates(state.u, nominal_rate(x, state.u, r_future, mats), icbf)
    u_new = state.u + (cfg.alpha * cfg.dt_ctrl) * rate
    if not np.isfinite(u_new).all():
        raise ControllerFault(f"non-finite input {u_new}")
    state.u = u_new
    return u_new


@dataclass
class NewtonRaphsonController:
    """Stateful wrapper bundling configuration, predictor and input state."""

    params: QuadParams
    cfg: NrConfig = field(default_factory=NrConfig)
    icbf: IcbfConfig = field(default_factory=IcbfConfig)
    mats: PredictorMatrices | None = None
    state: ControllerState | None = None

    def __post_init__(self) -> None:
        if self.mats is None:
            self.mats = make_predictor(self.params, self.cfg.T)
        elif not math.isclose(self.mats.T, self.cfg.T):
            raise ValueError(f"predictor horizon {self.mats.T} != controller horizon {self.cfg.T}")
        if self.state is None:
            self.state = ControllerState.at_hover(self.params)

    def reset(self) -> None:
        self.state = ControllerState.at_hover(self.params)

    def step(self, x: ArrayLike, r_future: ArrayLike) -> NDArray[np.float64]:
        return step(self.state, x, r_future, self.cfg, self.mats, self.icbf)
