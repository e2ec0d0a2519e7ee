"""Random waypoint mobility."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Tuple

import numpy as np

Point = Tuple[float, float]


@dataclass(frozen=True)
class RandomWaypoint:
    area_w: float
    area_h: float
    max_speed: float
    pause: float
    dt: float = 1.0


@dataclass(frozen=True)
class MobilityState:
    position: Point
    waypoint: Point
    speed: float
    pause_until: float

    @property
    def moving(self) -> bool:
        return self.position != self.waypoint


def initial_state(model: RandomWaypoint, rng: np.random.Generator) -> MobilityState:
    """Uniform start position with the first leg already drawn; pauses happen on arrival."""
    pos = (float(rng.uniform(0.0, model.area_w)), float(rng.uniform(0.0, model.area_h)))
    state = MobilityState(pos, pos, 0.0, 0.0)
    if model.max_speed <= 0.0:
        return state
    return _new_leg(state, model, rng)


def fixed_state(position: Point) -> MobilityState:
    return MobilityState(position, position, 0.0, math.inf)


def _new_leg(state: MobilityState, model: RandomWaypoint, rng: np.random.Generator) -> MobilityState:
    wp = (float(rng.uniform(0.0, model.area_w)), float(rng.uniform(0.0, model.area_h)))
    # uniform on (0, max_speed]
    speed = model.max_speed * (1.0 - float(rng.random()))
    return replace(state, waypoint=wp, speed=speed)


def waypoint_step(state: MobilityState, now: float, rng: np.random.Generator,
                  model: RandomWaypoint) -> MobilityState:
    """Advance ``state`` from ``now - model.dt`` to ``now``.

    Travel, arrival, pause and departure may all happen inside one step;
    leftover time after an arrival or a pause end is spent on the next phase.
    """
    if model.max_speed <= 0.0:
        return state
    t = now - model.dt
    while t < now:
        if not state.moving:
            if state.pause_until > t:
                if state.pause_until >= now:
                    return state
                t = state.pause_until
            state = _new_leg(state, model, rng)
            continue
        (x, y), (wx, wy) = state.position, state.waypoint
        dist = math.hypot(wx - x, wy - y)
        budget = (now - t) * state.speed
        if budget >= dist:
            t += dist / state.speed
            state = MobilityState(state.waypoint, state.waypoint, state.speed, t + model.pause)
        else:
            f = budget / dist
            pos = (min(max(x + (wx - x) * f, 0.0), model.area_w),
                   min(max(y + (wy - y) * f, 0.0), model.area_h))
            state = replace(state, position=pos)
            t = now
    return state
