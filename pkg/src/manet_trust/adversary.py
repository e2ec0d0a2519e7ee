"""Two-phase packet dropper driven by a Good/Bad Markov chain.

In the Good phase every packet is forwarded. In the Bad phase the node gets
a fresh drop quota at the start of every simulated second, a uniform integer
in ``[min_rate, max_rate]``, and drops arrivals until the quota runs out.
Phase lengths are drawn uniformly from ``t_trans_range``, or taken from a
fixed schedule when one is given.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np


class Phase(enum.Enum):
    GOOD = "good"
    BAD = "bad"

    def flipped(self) -> "Phase":
        return Phase.BAD if self is Phase.GOOD else Phase.GOOD


class Decision(enum.Enum):
    FORWARD = "forward"
    DROP = "drop"


@dataclass
class MarkovDropper:
    min_rate: int
    max_rate: int
    t_trans_range: Tuple[float, float]
    phase: Phase = Phase.BAD
    next_transition: float = math.inf
    # scripted phase boundaries as (start_time, phase); overrides random draws
    schedule: Optional[Sequence[Tuple[float, Phase]]] = None
    quota_second: Optional[int] = None
    quota_left: int = 0
    history: List[Tuple[float, Phase]] = field(default_factory=list)

    def __post_init__(self):
        if not 0 <= self.min_rate <= self.max_rate:
            raise ValueError(f"need 0 <= min_rate <= max_rate, got {self.min_rate}, {self.max_rate}")
        lo, hi = self.t_trans_range
        if not 0 <= lo <= hi:
            raise ValueError(f"bad t_trans range {self.t_trans_range!r}")
        if self.schedule is not None:
            self.schedule = sorted(self.schedule, key=lambda s: s[0])
            if not self.schedule:
                raise ValueError("empty phase schedule")

    @classmethod
    def random(cls, min_rate, max_rate, t_trans_range, rng: np.random.Generator,
               start: float = 0.0, phase: Phase = Phase.BAD) -> "MarkovDropper":
        d = cls(int(min_rate), int(max_rate), tuple(t_trans_range), phase=phase)
        d.next_transition = start + d._draw_period(rng)
        d.history.append((start, phase))
        return d

    @classmethod
    def scripted(cls, min_rate, max_rate, schedule: Sequence[Tuple[float, Phase]]) -> "MarkovDropper":
        d = cls(int(min_rate), int(max_rate), (0.0, 0.0), schedule=schedule)
        first_t, first = d.schedule[0]
        d.phase = first
        d.history.append((first_t, first))
        d._schedule_pos = 1
        d.next_transition = d.schedule[1][0] if len(d.schedule) > 1 else math.inf
        return d

    def _draw_period(self, rng) -> float:
        lo, hi = self.t_trans_range
        return float(rng.uniform(lo, hi)) if hi > lo else float(lo)

    def advance(self, now: float, rng: np.random.Generator) -> Phase:
        """Apply every phase transition due at or before ``now``."""
        while now >= self.next_transition:
            t = self.next_transition
            if self.schedule is not None:
                _, phase = self.schedule[self._schedule_pos]
                self._schedule_pos += 1
                if phase is self.phase:
                    raise ValueError("scripted phases must alternate")
                self.phase = phase
                self.next_transition = (self.schedule[self._schedule_pos][0]
                                        if self._schedule_pos < len(self.schedule) else math.inf)
            else:
                self.phase = self.phase.flipped()
                period = self._draw_period(rng)
                # a zero-length draw would stall the loop
                self.next_transition = t + max(period, 1e-6)
            self.history.append((t, self.phase))
        return self.phase


def forward_decision(dropper: MarkovDropper, now: float, rng: np.random.Generator) -> Decision:
    if dropper.advance(now, rng) is Phase.GOOD:
        return Decision.FORWARD
    second = math.floor(now)
    if dropper.quota_second != second:
        dropper.quota_second = second
        dropper.quota_left = int(rng.integers(dropper.min_rate, dropper.max_rate + 1))
    if dropper.quota_left > 0:
        dropper.quota_left -= 1
        return Decision.DROP
    return Decision.FORWARD
