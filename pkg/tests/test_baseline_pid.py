import numpy as np
import pytest

from nrflow.baseline_pid import (
    RATE_LIMIT,
    TILT_LIMIT,
    BaselineController,
    PidGains,
    PidState,
    baseline_step,
    thrust_direction,
)
from nrflow.quad_model import QuadParams, clamp_thrust, hover_input, integrate_hold, make_state

P = QuadParams()
HOVER = make_state(p=(0.3, -0.2, 1.5))
R_HOVER = np.array([0.3, -0.2, 1.5, 0.0])


def test_gain_validation():
    with pytest.raises(ValueError):
        PidGains(kp_pos=-1.0)
    with pytest.raises(ValueError):
        PidGains(vel_int_limit=0.0)


def test_equilibrium_gives_hover_input():
    u = baseline_step(HOVER, R_HOVER, np.zeros(4), PidGains(), P, 0.01, PidState())
    np.testing.assert_allclose(u, hover_input(P), atol=1e-9)


def test_vertical_error_with_unit_gains():
    gains = PidGains(kp_pos=1.0, kp_vel=1.0, ki_vel=0.0, kd_vel=0.0, kp_att=0.0)
    r = R_HOVER + np.array([0, 0, 0.1, 0])
    u = baseline_step(HOVER, r, np.zeros(4), gains, P, 0.01, PidState())
    assert u[0] == pytest.approx(P.m * (P.g + 0.1), rel=1e-12)
    np.testing.assert_array_equal(u[1:], 0.0)


def test_lateral_error_tilts_the_right_way():
    # +x acceleration needs negative roll, +y needs positive pitch
    gains = PidGains(kp_pos=1.0, kp_vel=1.0, ki_vel=0.0, kd_vel=0.0, kp_att=1.0)
    u = baseline_step(HOVER, R_HOVER + [0.2, 0.1, 0, 0], np.zeros(4), gains, P, 0.01, PidState())
    assert u[1] < 0 and u[2] > 0
    assert u[1] == pytest.approx(-0.2 / P.g, rel=1e-9)
    assert u[2] == pytest.approx(0.1 / P.g, rel=1e-9)


def test_tilt_and_rate_limits():
    gains = PidGains(kp_pos=10.0, kp_vel=10.0, kp_att=100.0)
    far = R_HOVER + np.array([50.0, -50.0, 0.0, 3.0])
    u = baseline_step(HOVER, far, np.zeros(4), gains, P, 0.01, PidState())
    np.testing.assert_allclose(np.abs(u[1:]), RATE_LIMIT)
    gains = PidGains(kp_pos=10.0, kp_vel=10.0, kp_att=1.0)
    u = baseline_step(HOVER, far, np.zeros(4), gains, P, 0.01, PidState())
    assert abs(u[1]) == pytest.approx(TILT_LIMIT)


def test_integrator_anti_windup():
    gains = PidGains(ki_vel=1.0, vel_int_limit=0.3)
    pid = PidState()
    for _ in range(500):
        baseline_step(HOVER, R_HOVER + [5, 5, 5, 0], np.zeros(4), gains, P, 0.01, pid)
        assert np.max(np.abs(pid.integ)) <= 0.3 + 1e-15


def test_thrust_projected_on_current_axis():
    x = make_state(p=R_HOVER[:3], angles=(0.2, 0.0, 0.0))
    u = baseline_step(x, R_HOVER, np.zeros(4), PidGains(), P, 0.01, PidState())
    assert u[0] == pytest.approx(P.m * P.g * np.cos(0.2), rel=1e-12)


def test_thrust_direction_unit_norm():
    for ang in [(0.1, -0.3, 2.0), (0.5, 0.5, -1.0)]:
        assert np.linalg.norm(thrust_direction(*ang)) == pytest.approx(1.0)


def test_feed_forward_only_no_error():
    gains = PidGains(kp_pos=0.0, kp_vel=2.0, ki_vel=0.0, kd_vel=0.0)
    x = make_state(p=R_HOVER[:3], v=(0.5, 0, 0))
    u = baseline_step(x, R_HOVER, np.array([0.5, 0, 0, 0]), gains, P, 0.01, PidState())
    np.testing.assert_allclose(u, hover_input(P), atol=1e-12)


def test_controller_wrapper_reset():
    c = BaselineController(P)
    c.step(HOVER, R_HOVER + [1, 0, 0, 0], np.zeros(4))
    assert np.any(c.pid.integ != 0)
    c.reset()
    np.testing.assert_array_equal(c.pid.integ, 0)


def test_step_response_from_offset():
    # the tuned outer loop is slow (kp_pos ~ 0.11/s) and leans on feed-forward;
    # a pure step must still converge monotonically without overshoot
    c = BaselineController(P)
    x = make_state(p=(0.0, 0.0, 1.5))
    r = np.array([1.0, 0.0, 1.5, 0.0])
    xs = []
    for _ in range(6000):
        u = c.step(x, r, np.zeros(4))
        x = integrate_hold(x, clamp_thrust(u, P), 1e-3, 10, P)
        xs.append(x[0])
    xs = np.array(xs)
    assert xs.max() <= 1.0
    assert np.all(np.diff(xs[100:]) >= 0)
    assert xs[-1] == pytest.approx(1.0, abs=0.01)
