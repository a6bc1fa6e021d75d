"""Hover-linearized model and its closed-form lookahead predictor.

The linear model ``xdot = A x + B u - g e_vz`` has a nilpotent ``A``
(``A^3 = 0``), so the zero-order-hold discretization over a horizon ``T``
is an exact three-term series and needs no matrix exponential routine.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from nrflow.quad_model import (
    INPUT_DIM,
    PHI,
    PSI,
    PX,
    PY,
    PZ,
    RATE_P,
    RATE_Q,
    RATE_R,
    STATE_DIM,
    TAU,
    THETA,
    VX,
    VY,
    VZ,
    QuadParams,
    hover_input,
)


class SingularJacobianError(np.linalg.LinAlgError):
    """The input-to-output Jacobian of the predictor cannot be inverted."""


@dataclass(frozen=True)
class SystemMatrices:
    A: NDArray[np.float64]
    B: NDArray[np.float64]
    C: NDArray[np.float64]
    u_hover: NDArray[np.float64]


@dataclass(frozen=True)
class PredictorMatrices:
    """Precomputed lookahead predictor for a fixed horizon.

    ``offset`` is the state drift caused by gravity over the horizon, so
    that ``x(t+T) = A_tilde x + B_tilde u + offset`` for a held input.
    ``CA_tilde``, ``CB_tilde`` and ``c_offset`` are the output-space
    projections actually used per control step.
    """

    T: float
    A_tilde: NDArray[np.float64]
    B_tilde: NDArray[np.float64]
    offset: NDArray[np.float64]
    CA_tilde: NDArray[np.float64]
    CB_tilde: NDArray[np.float64]
    CB_tilde_inv: NDArray[np.float64]
    c_offset: NDArray[np.float64]


def build_system_matrices(params: QuadParams) -> SystemMatrices:
    """Linearization of the plant about hover."""
    A = np.zeros((STATE_DIM, STATE_DIM))
    A[PX, VX] = A[PY, VY] = A[PZ, VZ] = 1.0
    A[VX, PHI] = -params.g
    A[VY, THETA] = params.g

    B = np.zeros((STATE_DIM, INPUT_DIM))
    B[VZ, TAU] = 1.0 / params.m
    B[PHI, RATE_P] = B[THETA, RATE_Q] = B[PSI, RATE_R] = 1.0

    C = np.zeros((INPUT_DIM, STATE_DIM))
    C[0, PX] = C[1, PY] = C[2, PZ] = C[3, PSI] = 1.0
    return SystemMatrices(A=A, B=B, C=C, u_hover=hover_input(params))


def discretize(sys: SystemMatrices, T: float = 0.8) -> PredictorMatrices:
    """Exact zero-order-hold discretization over horizon ``T``.

    Raises:
        ValueError: if ``T <= 0``.
        SingularJacobianError: if ``C B_tilde`` is singular.
    """
    if not T > 0:
        raise ValueError(f"horizon must be positive, got {T}")
    A, B, C = sys.A, sys.B, sys.C
    A2 = A @ A
    A_tilde = np.eye(STATE_DIM) + A * T + A2 * (T**2 / 2.0)
    B_tilde = B * T + (A @ B) * (T**2 / 2.0) + (A2 @ B) * (T**3 / 6.0)
    # gravity enters as the constant input -u_hover
    offset = -B_tilde @ sys.u_hover

    CB = C @ B_tilde
    if not np.linalg.cond(CB) < 1.0 / np.finfo(float).eps:
        raise SingularJacobianError(f"C @ B_tilde is singular for T={T}")
    return PredictorMatrices(
        T=float(T),
        A_tilde=A_tilde,
        B_tilde=B_tilde,
        offset=offset,
        CA_tilde=C @ A_tilde,
        CB_tilde=CB,
        CB_tilde_inv=np.linalg.inv(CB),
        c_offset=C @ offset,
    )


def make_predictor(params: QuadParams, T: float = 0.8) -> PredictorMatrices:
    return discretize(build_system_matrices(params), T)


def predict_state(x: ArrayLike, u: ArrayLike, mats: PredictorMatrices) -> NDArray[np.float64]:
    return mats.A_tilde @ np.asarray(x, float) + mats.B_tilde @ np.asarray(u, float) + mats.offset


def predict_output(x: ArrayLike, u: ArrayLike, mats: PredictorMatrices) -> NDArray[np.float64]:
    """Predicted ``(px, py, pz, psi)`` one horizon ahead, input held constant."""
    return mats.CA_tilde @ x + mats.CB_tilde @ u + mats.c_offset


def output_jacobian(mats: PredictorMatrices) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Input Jacobian of :func:`predict_output` and its inverse.

    The predictor is affine in the input, so both are state independent.
    """
    return mats.CB_tilde, mats.CB_tilde_inv
