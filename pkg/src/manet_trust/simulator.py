"""Deterministic discrete-event MANET simulator.

Events run in ``(time, kind, node, seq)`` order, so equal timestamps are
resolved by event kind, then node index, then scheduling order. All
randomness comes from one root seed split into independent substreams
(mobility per node, dropper per node, channel, traffic).

Links are ideal unit-disk links with an optional per-hop loss probability.
Routing is global minimum-hop source routing: a source avoids the relays its
own Trust Manager has flagged whenever such a route exists, and falls back to
the plain shortest route otherwise.
"""

from __future__ import annotations

import enum
import heapq
import itertools
import logging
import math
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from .adversary import Decision, MarkovDropper, forward_decision
from .metrics import DetectionMetrics, compute_metrics
from .mobility import MobilityState, RandomWaypoint, fixed_state, initial_state, waypoint_step
from .reputation import format_node
from .scenario import Scenario, node_id, node_index
from .topology import Adjacency, connectivity, path_valid, route
from .trace import TraceRecord
from .trust_manager import TrustManager
from .wire import RepMessage, decode, encode

log = logging.getLogger(__name__)

BUFFER_CAPACITY = 64
TX_TIME = 0.002  # per-packet service time at a node, s
CTRL_DELAY = 0.001  # one-hop latency of REP_MESS frames, s
TICK = 1.0  # mobility and connectivity granularity, s


class Outcome(str, enum.Enum):
    FORWARDED = "forwarded"
    MALICIOUS_DROP = "malicious_drop"
    BUFFER_DROP = "buffer_drop"
    CHANNEL_DROP = "channel_drop"
    DELIVERED = "delivered"
    NO_ROUTE = "no_route"


class Kind(enum.IntEnum):
    TICK = 0
    WINDOW = 1
    EXPIRE = 2
    INJECT = 3
    REP = 4
    GENERATE = 5
    TRANSMIT = 6


@dataclass
class Packet:
    pid: int
    src: int
    dst: int
    created: float
    path: List[int]
    pos: int = 0  # index in ``path`` of the node holding the packet


class NodeBuffer:
    """Drop-tail FIFO interface queue."""

    def __init__(self, capacity: int = BUFFER_CAPACITY):
        self.capacity = capacity
        self._q: deque = deque()
        self.peak = 0

    def __len__(self):
        return len(self._q)

    @property
    def full(self) -> bool:
        return len(self._q) >= self.capacity

    def push(self, packet: Packet) -> bool:
        if self.full:
            return False
        self._q.append(packet)
        self.peak = max(self.peak, len(self._q))
        return True

    def pop(self) -> Packet:
        return self._q.popleft()


def deliver(packet: Packet, buffer: NodeBuffer, dropper: Optional[MarkovDropper], now: float,
            channel_loss_prob: float, channel_rng: np.random.Generator,
            dropper_rng: Optional[np.random.Generator] = None) -> Outcome:
    """Hand ``packet`` to a relay: channel first, then its queue, then its dropper."""
    if channel_loss_prob > 0.0 and channel_rng.random() < channel_loss_prob:
        return Outcome.CHANNEL_DROP
    if buffer.full:
        return Outcome.BUFFER_DROP
    if dropper is not None and forward_decision(dropper, now, dropper_rng) is Decision.DROP:
        return Outcome.MALICIOUS_DROP
    buffer.push(packet)
    return Outcome.FORWARDED


@dataclass
class SimulationResult:
    scenario: Scenario
    traces: List[TraceRecord]
    events: List[Tuple[float, int, int, Optional[int], str]]
    metrics: DetectionMetrics
    managers: Dict[int, TrustManager]
    counts: Counter = field(default_factory=Counter)
    generated: int = 0
    droppers: Dict[int, MarkovDropper] = field(default_factory=dict)

    def tables(self) -> Dict[int, Dict[int, float]]:
        return {nid: tm.table.as_dict() for nid, tm in self.managers.items()}

    def series(self, observer: int, subject: int, event=None) -> List[Tuple[float, float]]:
        """``(time, reputation)`` points of one observer's view of one subject."""
        return [(r.time, r.reputation) for r in self.traces
                if r.observer == observer and r.subject == subject and (event is None or r.event == event)]


def _substream(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=key))


class Simulator:
    def __init__(self, scenario: Scenario):
        self.sc = sc = scenario
        n = sc.nodes
        self.ids = [node_id(i) for i in range(n)]
        self.now = 0.0
        self._queue: list = []
        self._seq = itertools.count()
        self._pid = itertools.count()

        self.model = RandomWaypoint(sc.area_w_m, sc.area_h_m, sc.max_speed_mps, sc.pause_s, TICK)
        self.mob_rng = [_substream(sc.seed, 1, i) for i in range(n)]
        self.drop_rng = [_substream(sc.seed, 2, i) for i in range(n)]
        self.channel_rng = _substream(sc.seed, 3)
        self.traffic_rng = _substream(sc.seed, 4)

        if sc.positions is not None:
            self.mobility = [fixed_state(tuple(p)) if sc.max_speed_mps <= 0 else
                             MobilityState(tuple(p), tuple(p), 0.0, sc.pause_s) for p in sc.positions]
        else:
            self.mobility = [initial_state(self.model, self.mob_rng[i]) for i in range(n)]
        self.adj: Adjacency = connectivity([m.position for m in self.mobility], sc.tx_range_m)
        self.topo_version = 0

        initial: Dict[int, Dict[int, float]] = {}
        for obs, subj, value in sc.initial_reputations:
            initial.setdefault(obs, {})[self.ids[subj]] = value
        params = sc.trust
        self.tm = [TrustManager(self.ids[i], params, initial.get(i)) for i in range(n)]
        self.buffers = [NodeBuffer() for _ in range(n)]
        self.busy = [False] * n

        self.droppers: Dict[int, MarkovDropper] = {}
        for i in sorted(sc.malicious_ids):
            if sc.phase_script is not None:
                d = MarkovDropper.scripted(sc.drop_min_pps, sc.drop_max_pps, sc.phase_script)
            else:
                d = MarkovDropper.random(sc.drop_min_pps, sc.drop_max_pps,
                                         (sc.t_trans_lo_s, sc.t_trans_hi_s), self.drop_rng[i])
            self.droppers[i] = d

        # one CBR slot per concurrent source; fixed flows keep their pair for the whole run
        self.honest = [i for i in range(n) if i not in self.droppers]
        if sc.flows is not None:
            self.slots: List[Optional[Tuple[int, int]]] = [tuple(f) for f in sc.flows]
            self._fixed_flows = True
        else:
            k = min(sc.sources, len(self.honest))
            if k < sc.sources:
                log.warning("only %d honest nodes available as sources (asked for %d)", k, sc.sources)
            self.slots = [None] * k
            self._fixed_flows = False
        self._session = -1

        self._routes: Dict[Tuple[int, int], Tuple[int, FrozenSet[int], List[int]]] = {}
        self.traces: List[TraceRecord] = []
        self.events: List[Tuple[float, int, int, Optional[int], str]] = []
        self.counts: Counter = Counter()
        self.generated = 0

    # -- scheduling ---------------------------------------------------

    def _at(self, t: float, kind: Kind, node: int, payload=None):
        heapq.heappush(self._queue, (t, int(kind), node, next(self._seq), payload))

    def _collect(self, i: int):
        if self.tm[i].journal:
            self.traces.extend(self.tm[i].drain())

    def _log(self, node: int, pid: int, hop: Optional[int], outcome: Outcome):
        self.counts[outcome] += 1
        self.events.append((self.now, node, pid, hop, outcome.value))

    # -- routing ------------------------------------------------------

    def _flagged_idx(self, i: int) -> FrozenSet[int]:
        return frozenset(node_index(f) for f in self.tm[i].flagged())

    def route_for(self, origin: int, dst: int) -> Optional[List[int]]:
        excl = self._flagged_idx(origin)
        key = (origin, dst)
        cached = self._routes.get(key)
        if cached is not None and cached[0] == self.topo_version and cached[1] == excl:
            return cached[2]
        best = route(self.adj, origin, dst, excl)
        honoured = excl
        if best is None and excl:
            best = route(self.adj, origin, dst)
            honoured = frozenset()
        if best is None:
            self._routes.pop(key, None)
            return None
        # keep a still-valid cached route of equal length to avoid needless churn
        if cached is not None:
            old = cached[2]
            if len(old) == len(best) and path_valid(self.adj, old, honoured):
                best = old
        self._routes[key] = (self.topo_version, excl, best)
        return best

    # -- handlers -----------------------------------------------------

    def _broadcast(self, sender: int, msg: RepMessage):
        frame = encode(msg)
        for j in self.adj[sender]:
            self._at(self.now + CTRL_DELAY, Kind.REP, j, (sender, frame))

    def _tick(self):
        t = self.now
        if t > 0:
            for i, st in enumerate(self.mobility):
                self.mobility[i] = waypoint_step(st, t, self.mob_rng[i], self.model)
            adj = connectivity([m.position for m in self.mobility], self.sc.tx_range_m)
            if adj != self.adj:
                self.adj = adj
                self.topo_version += 1
        for i, tm in enumerate(self.tm):
            requests = tm.update_neighbors((self.ids[j] for j in self.adj[i]), t)
            for msg in requests:
                self._broadcast(i, msg)
            if requests:
                self._at(t + self.sc.response_wait_s, Kind.EXPIRE, i)
        nxt = t + TICK
        if nxt <= self.sc.duration_s:
            self._at(nxt, Kind.TICK, -1)

    def _window(self, k: int):
        for i, tm in enumerate(self.tm):
            _, accusations = tm.close_window(self.now)
            self._collect(i)
            for msg in accusations:
                self._broadcast(i, msg)
        nxt = (k + 1) * self.sc.window_s
        if nxt <= self.sc.duration_s:
            self._at(nxt, Kind.WINDOW, -1, k + 1)

    def _rep(self, j: int, sender: int, frame: bytes):
        msg = decode(frame)
        replies, _ = self.tm[j].handle_message(msg, self.ids[sender], self.now)
        self._collect(j)
        for reply in replies:
            if sender in self.adj[j]:
                self._at(self.now + CTRL_DELAY, Kind.REP, sender, (j, encode(reply)))

    def _draw_session(self, session: int):
        """Pick this session's sources (distinct honest nodes) and their destinations."""
        self._session = session
        srcs = self.traffic_rng.choice(self.honest, size=len(self.slots), replace=False)
        for slot, src in enumerate(int(x) for x in srcs):
            dst = int(self.traffic_rng.integers(self.sc.nodes - 1))
            self.slots[slot] = (src, dst + (dst >= src))

    def _generate(self, slot: int, k: int):
        sc = self.sc
        if not self._fixed_flows:
            session = int(math.floor(self.now / sc.session_s + 1e-9))
            if session != self._session:
                self._draw_session(session)
        src, dst = self.slots[slot]
        pkt = Packet(next(self._pid), src, dst, self.now, [])
        self.generated += 1
        path = self.route_for(src, dst)
        if path is None:
            self._log(src, pkt.pid, None, Outcome.NO_ROUTE)
        else:
            pkt.path = list(path)
            if not self.buffers[src].push(pkt):
                self._log(src, pkt.pid, src, Outcome.BUFFER_DROP)
            else:
                self._kick(src)
        t = (k + 1) / sc.cbr_pps
        if t < sc.duration_s:
            self._at(t, Kind.GENERATE, slot, k + 1)

    def _kick(self, i: int):
        if not self.busy[i] and len(self.buffers[i]):
            self.busy[i] = True
            self._at(self.now + TX_TIME, Kind.TRANSMIT, i)

    def _transmit(self, i: int):
        self.busy[i] = False
        buf = self.buffers[i]
        pkt = buf.pop()
        self._kick(i)
        nxt = pkt.path[pkt.pos + 1]
        if nxt not in self.adj[i]:
            # link gone: salvage from here with this node's own view
            path = self.route_for(i, pkt.dst)
            if path is None:
                self._log(i, pkt.pid, None, Outcome.NO_ROUTE)
                return
            pkt.path, pkt.pos = list(path), 0
            nxt = path[1]
        if nxt == pkt.dst:
            lost = self.sc.channel_loss_prob > 0 and self.channel_rng.random() < self.sc.channel_loss_prob
            self._log(i, pkt.pid, nxt, Outcome.CHANNEL_DROP if lost else Outcome.DELIVERED)
            return
        outcome = deliver(pkt, self.buffers[nxt], self.droppers.get(nxt), self.now,
                          self.sc.channel_loss_prob, self.channel_rng, self.drop_rng[nxt])
        self.tm[i].observe(self.ids[nxt], outcome is Outcome.FORWARDED, self.now)
        self._log(i, pkt.pid, nxt, outcome)
        if outcome is Outcome.FORWARDED:
            pkt.pos += 1
            self._kick(nxt)

    def _inject(self, sender: int, subject: int, value: float):
        self._broadcast(sender, RepMessage.broadcast(self.ids[subject], value))

    # -- main loop ----------------------------------------------------

    def run(self) -> SimulationResult:
        sc = self.sc
        self._at(0.0, Kind.TICK, -1)
        if sc.window_s <= sc.duration_s:
            self._at(sc.window_s, Kind.WINDOW, -1, 1)
        if sc.cbr_pps > 0 and sc.duration_s > 0:
            for slot in range(len(self.slots)):
                self._at(0.0, Kind.GENERATE, slot, 0)
        for t, sender, subject, value in sc.injected_broadcasts:
            if t <= sc.duration_s:
                self._at(t, Kind.INJECT, sender, (subject, value))

        while self._queue:
            t, kind, node, _, payload = heapq.heappop(self._queue)
            if t > sc.duration_s:
                break
            self.now = t
            if kind == Kind.TICK:
                self._tick()
            elif kind == Kind.WINDOW:
                self._window(payload)
            elif kind == Kind.EXPIRE:
                self.tm[node].expire_requests(t)
                self._collect(node)
            elif kind == Kind.INJECT:
                self._inject(node, *payload)
            elif kind == Kind.REP:
                self._rep(node, *payload)
            elif kind == Kind.GENERATE:
                self._generate(node, payload)
            elif kind == Kind.TRANSMIT:
                self._transmit(node)

        managers = {self.ids[i]: tm for i, tm in enumerate(self.tm)}
        metrics = compute_metrics(self.traces, sc)
        return SimulationResult(sc, self.traces, self.events, metrics, managers, self.counts,
                                self.generated, self.droppers)


def run(scenario: Scenario) -> SimulationResult:
    return Simulator(scenario).run()


def event_rows(result: SimulationResult):
    for t, node, pid, hop, outcome in result.events:
        yield (f"{t:.3f}", format_node(node_id(node)), pid,
               "" if hop is None else format_node(node_id(hop)), outcome)
