import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nrflow.icbf import (
    BarrierEval,
    DegenerateBarrierError,
    IcbfConfig,
    clamp_rate_axis,
    eta_general,
    evaluate_barrier,
)

CFG = IcbfConfig()


def test_defaults():
    assert (CFG.rate_min, CFG.rate_max, CFG.gamma) == (-0.8, 0.8, 1.0)


@pytest.mark.parametrize("kw", [dict(rate_min=0.1), dict(rate_max=-0.1), dict(gamma=0.0)])
def test_config_validation(kw):
    with pytest.raises(ValueError):
        IcbfConfig(**kw)


def test_eta_inactive_when_slack():
    ev = BarrierEval(b=1.0, db_du=np.ones(4), db_dx=np.zeros(9), xi=np.ones(4), lam=-1.0)
    np.testing.assert_array_equal(eta_general(ev), np.zeros(4))


def test_eta_unit_direction():
    xi = np.array([0.0, 1.0, 0.0, 0.0])
    ev = BarrierEval(b=0.0, db_du=xi, db_dx=np.zeros(9), xi=xi, lam=0.5)
    np.testing.assert_array_equal(eta_general(ev), [0, 0.5, 0, 0])


def test_eta_degenerate_barrier():
    ev = BarrierEval(b=-1.0, db_du=np.zeros(4), db_dx=np.zeros(9), xi=np.zeros(4), lam=0.3)
    with pytest.raises(DegenerateBarrierError):
        eta_general(ev)


def test_eta_restores_barrier_condition_randomized():
    rng = np.random.default_rng(2024)
    gamma = 1.7
    active = inactive = 0
    for _ in range(100):
        b = rng.normal()
        db_du, db_dx = rng.normal(size=4), rng.normal(size=9)
        f, psi = rng.normal(size=9), rng.normal(size=4)
        ev = evaluate_barrier(b, db_du, db_dx, f, psi, gamma)
        eta = eta_general(ev)
        bdot = db_dx @ f + db_du @ (psi + eta)
        slack = bdot + gamma * b
        if ev.lam > 0:
            active += 1
            assert abs(slack) <= 1e-10
            # minimum norm: eta is parallel to the gradient
            assert np.linalg.norm(eta - (eta @ db_du) / (db_du @ db_du) * db_du) <= 1e-12
        else:
            inactive += 1
            np.testing.assert_array_equal(eta, 0)
            assert slack >= 0
    assert active > 10 and inactive > 10


@pytest.mark.parametrize(
    "u_s,nominal,expected",
    [
        (0.7, 0.5, 0.1),  # upper barrier active: eta = -0.4
        (0.5, 0.2, 0.2),  # inactive
        (-0.7, -0.5, -0.1),  # lower barrier active: eta = 0.4
        (-0.5, -0.2, -0.2),
        (0.0, 1.5, 0.8),
    ],
)
def test_clamp_rate_axis_examples(u_s, nominal, expected):
    assert clamp_rate_axis(u_s, nominal, CFG) == pytest.approx(expected, abs=1e-15)


@given(st.floats(0.0, 5.0))
def test_clamp_at_upper_limit_blocks_further_increase(nominal):
    assert clamp_rate_axis(CFG.rate_max, nominal, CFG) <= 0.0


@given(st.floats(-5.0, 0.0))
def test_clamp_at_lower_limit_blocks_further_decrease(nominal):
    assert clamp_rate_axis(CFG.rate_min, nominal, CFG) >= 0.0


@given(st.floats(-2.0, 2.0), st.floats(-5.0, 5.0), st.floats(0.1, 3.0))
def test_clamp_matches_general_form_on_axis_barriers(u_s, nominal, gamma):
    cfg = IcbfConfig(gamma=gamma)
    e_s = np.array([0.0, 1.0, 0.0, 0.0])
    psi = np.array([0.3, nominal, -0.2, 0.1])
    if u_s >= 0:
        ev = evaluate_barrier(cfg.rate_max - u_s, -e_s, np.zeros(9), np.ones(9), psi, gamma)
    else:
        ev = evaluate_barrier(u_s - cfg.rate_min, e_s, np.zeros(9), np.ones(9), psi, gamma)
    general = psi[1] + eta_general(ev)[1]
    assert clamp_rate_axis(u_s, nominal, cfg) == pytest.approx(general, abs=1e-12)


@given(st.floats(-2.0, 2.0), st.floats(-5.0, 5.0))
def test_correction_is_minimal(u_s, nominal):
    out = clamp_rate_axis(u_s, nominal, CFG)
    b = CFG.rate_max - u_s if u_s >= 0 else u_s - CFG.rate_min
    sign = -1.0 if u_s >= 0 else 1.0
    if sign * nominal + CFG.gamma * b >= 0:
        assert out == nominal
    else:
        assert sign * out + CFG.gamma * b == pytest.approx(0.0, abs=1e-12)


def test_literal_lower_branch_does_not_hold_the_limit():
    literal = IcbfConfig(literal_lower_branch=True)
    # for u_s < 0 the literal barrier value exceeds rate_max, so moderate demands pass untouched
    for u_s in np.linspace(-3.0, -0.01, 50):
        assert clamp_rate_axis(u_s, -0.8, literal) == -0.8
    u_fixed = u_lit = 0.0
    for _ in range(200):
        u_fixed += 0.3 * clamp_rate_axis(u_fixed, -1.0, CFG)
        u_lit += 0.3 * clamp_rate_axis(u_lit, -1.0, literal)
    assert u_fixed >= CFG.rate_min
    assert u_lit < 10 * CFG.rate_min


def test_per_axis_forward_invariance_discrete():
    # Euler flow u += h * filtered_rate with h*gamma < 1 never leaves the interval
    h = 0.3
    rng = np.random.default_rng(5)
    u = 0.0
    for _ in range(2000):
        u += h * clamp_rate_axis(u, rng.normal(scale=0.5), CFG)
        assert CFG.rate_min * (1 + h) <= u <= CFG.rate_max * (1 + h)
