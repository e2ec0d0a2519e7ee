import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from manet_trust.mobility import MobilityState, RandomWaypoint, fixed_state, initial_state, waypoint_step

MODEL = RandomWaypoint(1000.0, 500.0, 10.0, 300.0)


def test_paused_node_stays_put():
    st0 = MobilityState((50.0, 60.0), (50.0, 60.0), 0.0, 300.0)
    rng = np.random.default_rng(0)
    s = st0
    for t in range(1, 300):
        s = waypoint_step(s, float(t), rng, MODEL)
        assert s == st0


def test_leaves_after_pause():
    s = MobilityState((50.0, 60.0), (50.0, 60.0), 0.0, 300.0)
    s = waypoint_step(s, 301.0, np.random.default_rng(0), MODEL)
    assert s.waypoint != (50.0, 60.0)
    assert 0 < s.speed <= MODEL.max_speed


def test_kinematics():
    s = MobilityState((100.0, 250.0), (200.0, 250.0), 10.0, 0.0)
    s = waypoint_step(s, 1.0, np.random.default_rng(0), MODEL)
    assert s.position == pytest.approx((110.0, 250.0))


def test_arrival_starts_pause():
    s = MobilityState((195.0, 250.0), (200.0, 250.0), 10.0, 0.0)
    s = waypoint_step(s, 1.0, np.random.default_rng(0), MODEL)
    assert s.position == (200.0, 250.0) and not s.moving
    assert s.pause_until == pytest.approx(0.5 + 300.0)


def test_zero_pause_keeps_moving():
    model = RandomWaypoint(100.0, 100.0, 10.0, 0.0)
    s = MobilityState((0.0, 0.0), (3.0, 4.0), 10.0, 0.0)
    s = waypoint_step(s, 1.0, np.random.default_rng(1), model)
    assert s.moving


def test_fixed_state_never_moves():
    s = fixed_state((1.0, 2.0))
    assert waypoint_step(s, 1e6, np.random.default_rng(0), MODEL) == s


def test_initial_state_moving_and_inside():
    rng = np.random.default_rng(5)
    for _ in range(200):
        s = initial_state(MODEL, rng)
        x, y = s.position
        assert 0 <= x <= 1000 and 0 <= y <= 500
        assert 0 < s.speed <= 10.0


@settings(max_examples=30)
@given(st.integers(0, 2 ** 32 - 1), st.floats(0.0, 50.0), st.floats(0.5, 40.0))
def test_positions_stay_inside(seed, pause, speed):
    model = RandomWaypoint(300.0, 200.0, speed, pause)
    rng = np.random.default_rng(seed)
    s = initial_state(model, rng)
    for t in range(1, 400):
        prev = s.position
        s = waypoint_step(s, float(t), rng, model)
        x, y = s.position
        assert 0 <= x <= 300 and 0 <= y <= 200
        assert math.dist(prev, s.position) <= speed * model.dt + 1e-9
        if s.moving:
            assert 0 < s.speed <= speed
