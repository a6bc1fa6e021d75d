import numpy as np
import pytest
from oracles import central_jacobian, fine_step_zoh
from scipy.linalg import expm

from nrflow.predictor import (
    SingularJacobianError,
    build_system_matrices,
    discretize,
    make_predictor,
    output_jacobian,
    predict_output,
    predict_state,
)
from nrflow.quad_model import QuadParams, hover_input, integrate_hold, make_state

P = QuadParams()
SYS = build_system_matrices(P)
MATS = discretize(SYS, 0.8)
U0 = hover_input(P)

# rows px, py, pz, psi; cols u_tau, u_p, u_q, u_r; entries from -gT^3/6, T^2/(2m), T
CB_EXPECTED = np.array(
    [
        [0.0, -0.837120, 0.0, 0.0],
        [0.0, 0.0, 0.837120, 0.0],
        [0.189349, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.8],
    ]
)


def test_system_matrix_entries():
    assert SYS.A[3, 6] == -9.81
    assert SYS.A[4, 7] == 9.81
    assert SYS.B[5, 0] == pytest.approx(0.591716, abs=1e-6)
    assert np.count_nonzero(SYS.A) == 5
    assert np.count_nonzero(SYS.B) == 4
    np.testing.assert_array_equal(np.unique(SYS.C), [0.0, 1.0])


def test_output_selector():
    x = make_state(p=(1, 2, 3), v=(7, 8, 9), angles=(0.1, 0.2, 0.5))
    np.testing.assert_array_equal(SYS.C @ x, [1, 2, 3, 0.5])


def test_A_is_nilpotent_of_order_three():
    A2 = SYS.A @ SYS.A
    assert np.any(A2 != 0)
    np.testing.assert_array_equal(A2 @ SYS.A, np.zeros((9, 9)))


def test_discretize_spot_values():
    assert MATS.A_tilde[0, 3] == pytest.approx(0.8, abs=1e-15)
    assert MATS.A_tilde[0, 6] == pytest.approx(-3.1392, abs=1e-12)
    assert MATS.B_tilde[2, 0] == pytest.approx(0.189349, abs=1e-6)
    assert MATS.B_tilde[0, 1] == pytest.approx(-0.837120, abs=1e-12)
    np.testing.assert_allclose(MATS.CB_tilde, CB_EXPECTED, atol=1e-6)
    assert abs(np.linalg.det(MATS.CB_tilde)) > 0.05


def test_discretize_matches_fine_step_integration():
    Phi, Gamma = fine_step_zoh(SYS.A, SYS.B, 0.8, dt=1e-5)
    assert np.max(np.abs(Phi - MATS.A_tilde)) <= 1e-8
    assert np.max(np.abs(Gamma - MATS.B_tilde)) <= 1e-8


@pytest.mark.parametrize("T", [0.05, 0.8, 2.5])
def test_discretize_matches_van_loan_expm(T):
    M = np.zeros((13, 13))
    M[:9, :9] = SYS.A
    M[:9, 9:] = SYS.B
    E = expm(M * T)
    m = discretize(SYS, T)
    np.testing.assert_allclose(m.A_tilde, E[:9, :9], atol=1e-10)
    np.testing.assert_allclose(m.B_tilde, E[:9, 9:], atol=1e-10)


def test_inverse_jacobian():
    CB, CBi = output_jacobian(MATS)
    np.testing.assert_allclose(CBi @ CB, np.eye(4), atol=1e-12)


def test_horizon_continuity():
    m = discretize(SYS, 1e-6)
    np.testing.assert_allclose(m.A_tilde, np.eye(9), atol=1e-5)
    assert np.max(np.abs(m.B_tilde)) < 1e-5


@pytest.mark.parametrize("T", [0.0, -0.1])
def test_discretize_rejects_nonpositive_horizon(T):
    with pytest.raises(ValueError):
        discretize(SYS, T)


def test_singular_jacobian_guard():
    # a predictor blind to yaw inputs cannot be inverted
    from dataclasses import replace

    B = SYS.B.copy()
    B[8, 3] = 0.0
    with pytest.raises(SingularJacobianError):
        discretize(replace(SYS, B=B), 0.8)


def test_predict_hover_fixed_point():
    np.testing.assert_allclose(predict_output(np.zeros(9), U0, MATS), np.zeros(4), atol=1e-15)


def test_predict_vertical_drift():
    x = make_state(v=(0, 0, 1))
    np.testing.assert_allclose(predict_output(x, U0, MATS), [0, 0, 0.8, 0], atol=1e-15)


def test_predict_roll_rate_response():
    u = U0 + np.array([0, 0.1, 0, 0])
    assert predict_output(np.zeros(9), u, MATS)[0] == pytest.approx(-0.0837120, abs=1e-12)


def test_prediction_agrees_with_plant_for_small_inputs():
    # the nonlinear plant under a held small input should land near the linear prediction
    x = make_state(p=(0.2, -0.1, 1.5), v=(0.1, 0.05, 0.0), angles=(0.01, -0.01, 0.0))
    u = U0 + np.array([0.05, 0.005, -0.005, 0.01])
    realized = integrate_hold(x, u, 1e-3, 800, P)
    np.testing.assert_allclose(predict_output(x, u, MATS), SYS.C @ realized, atol=5e-3)


def test_predict_state_matches_linear_ode_with_gravity():
    rng = np.random.default_rng(3)
    x = rng.normal(size=9)
    u = rng.normal(size=4)
    # augmented affine system with the gravity drift as a constant input column
    M = np.zeros((14, 14))
    M[:9, :9] = SYS.A
    M[:9, 9:13] = SYS.B
    M[5, 13] = -P.g
    z = expm(M * 0.8) @ np.concatenate([x, u, [1.0]])
    np.testing.assert_allclose(predict_state(x, u, MATS), z[:9], atol=1e-10)


def test_jacobian_matches_finite_differences():
    rng = np.random.default_rng(7)
    for _ in range(5):
        x = rng.normal(size=9)
        u = rng.normal(size=4) + U0
        J = central_jacobian(lambda v: predict_output(x, v, MATS), u)
        np.testing.assert_allclose(J, MATS.CB_tilde, atol=1e-6)


def test_superposition_in_input():
    rng = np.random.default_rng(11)
    x = rng.normal(size=9)
    u1, u2 = rng.normal(size=4), rng.normal(size=4)
    base = predict_output(x, np.zeros(4), MATS)
    lhs = predict_output(x, 2.0 * u1 - 3.0 * u2, MATS) - base
    rhs = 2.0 * (predict_output(x, u1, MATS) - base) - 3.0 * (predict_output(x, u2, MATS) - base)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_make_predictor_equivalent():
    m = make_predictor(P, 0.8)
    np.testing.assert_array_equal(m.CB_tilde, MATS.CB_tilde)
