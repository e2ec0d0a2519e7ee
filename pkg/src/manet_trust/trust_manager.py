"""Per-node Trust Manager: watchdog windows plus reputation handling.

A ``TrustManager`` never talks to the network itself. The caller feeds it
observations, clock ticks and decoded REP_MESS values, and forwards the
messages it returns. Every table write goes through ``_commit`` and is
journaled as a :class:`~manet_trust.trace.TraceRecord`; the caller drains
``journal`` to build a trace.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Set, Tuple

from .reputation import (
    NodeId,
    Reputation,
    ReputationTable,
    TrustParams,
    Verdict,
    ZeroWeightError,
    aggregate_on_demand,
    blend,
    classify,
    direct_ratio,
    format_node,
    merge_broadcast,
)
from .trace import TraceEvent, TraceRecord
from .wire import MsgType, RepMessage

log = logging.getLogger(__name__)

_EPS = 1e-9


@dataclass
class ForwardingWindow:
    sent: int = 0
    forwarded: int = 0


@dataclass
class PendingRequest:
    subject: NodeId
    issued_at: float
    deadline: float
    # responder -> reported value; a repeat reply overwrites the earlier one
    collected: Dict[NodeId, float] = field(default_factory=dict)


class TrustManager:
    """Reputation state of one node.

    Parameters
    ----------
    self_id:
        Address of the owning node.
    params:
        Trust parameters; defaults to :class:`TrustParams` defaults.
    initial:
        Optional preset table entries (node -> reputation). They are not
        journaled.
    """

    def __init__(self, self_id: NodeId, params: Optional[TrustParams] = None,
                 initial: Optional[Dict[NodeId, float]] = None, window_start: float = 0.0):
        self.self_id = self_id
        self.params = params or TrustParams()
        self.table = ReputationTable()
        for node, value in (initial or {}).items():
            if node == self_id:
                raise ValueError("a node keeps no reputation entry for itself")
            self.table.update(node, value)
        self.windows: Dict[NodeId, ForwardingWindow] = {}
        self.window_start = window_start
        self.pending: Dict[NodeId, PendingRequest] = {}
        self.known_neighbors: Set[NodeId] = set()
        self.journal: List[TraceRecord] = []
        self._flagged: Set[NodeId] = {
            n for n, v in self.table.items() if classify(v, self.params.theta_malicious) is Verdict.MALICIOUS
        }

    def __repr__(self):
        return f"TrustManager({format_node(self.self_id)}, {len(self.table)} entries)"

    # -- table writes -------------------------------------------------

    def _commit(self, subject: NodeId, value: Reputation, kind: TraceEvent, now: float) -> None:
        self.table.update(subject, value)
        self.journal.append(TraceRecord(now, self.self_id, subject, float(value), kind))
        malicious = classify(value, self.params.theta_malicious) is Verdict.MALICIOUS
        if malicious and subject not in self._flagged:
            self._flagged.add(subject)
            self.journal.append(TraceRecord(now, self.self_id, subject, float(value), TraceEvent.FLAGGED))
        elif not malicious:
            self._flagged.discard(subject)

    def drain(self) -> List[TraceRecord]:
        out, self.journal = self.journal, []
        return out

    # -- monitoring ---------------------------------------------------

    def observe(self, neighbor: NodeId, forwarded: bool, now: float) -> None:
        if neighbor == self.self_id:
            raise ValueError("a node cannot observe itself")
        w = self.windows.get(neighbor)
        if w is None:
            w = self.windows[neighbor] = ForwardingWindow()
        w.sent += 1
        if forwarded:
            w.forwarded += 1

    def close_window(self, now: float) -> Tuple[List[Tuple[NodeId, Reputation]], List[RepMessage]]:
        """Fold this window's counters into the table.

        Returns the table updates and the accusations to broadcast. Only
        neighbors whose drop ratio in this window exceeds ``theta_drop`` are
        accused; the broadcast carries the freshly blended value.
        """
        p = self.params
        if now + _EPS < self.window_start + p.window_secs:
            raise ValueError(f"window opened at {self.window_start} cannot close at {now}")
        updates, broadcasts = [], []
        for neighbor in sorted(self.windows):
            w = self.windows[neighbor]
            if w.sent < p.min_samples:
                continue
            current = direct_ratio(w.forwarded, w.sent)
            new = blend(self.table.get(neighbor), current, p.alpha)
            self._commit(neighbor, new, TraceEvent.WINDOW_CLOSE, now)
            updates.append((neighbor, new))
            if 1.0 - current > p.theta_drop:
                broadcasts.append(RepMessage.broadcast(neighbor, new))
        self.windows.clear()
        self.window_start = now
        return updates, broadcasts

    # -- reputation exchange ------------------------------------------

    def handle_message(self, msg: RepMessage, sender: NodeId, now: float) -> Tuple[List[RepMessage], bool]:
        """Process one incoming REP_MESS. Replies are meant for ``sender`` only."""
        if sender == self.self_id:
            return [], False
        if msg.msg_type is MsgType.REQUEST:
            stored = self.table.stored(msg.subject)
            if stored is None or msg.subject == self.self_id:
                return [], False
            return [RepMessage.response(msg.subject, stored)], False

        if msg.msg_type is MsgType.RESPONSE:
            req = self.pending.get(msg.subject)
            if req is None or now > req.deadline + _EPS:
                log.debug("%s: unsolicited response about %s from %s", format_node(self.self_id),
                          format_node(msg.subject), format_node(sender))
                return [], False
            req.collected[sender] = float(msg.rep_val)
            return [], False

        # broadcast: no entries about ourselves, and the accuser's own entry is left alone
        if msg.subject in (self.self_id, sender):
            return [], False
        new = merge_broadcast(self.table.get(sender), msg.rep_val, self.table.get(msg.subject))
        self._commit(msg.subject, new, TraceEvent.BROADCAST_MERGE, now)
        return [], True

    def on_new_neighbor(self, node: NodeId, now: float) -> List[RepMessage]:
        if node == self.self_id or node in self.known_neighbors:
            return []
        self.known_neighbors.add(node)
        if node in self.pending:
            return []
        self.pending[node] = PendingRequest(node, now, now + self.params.response_wait_secs)
        return [RepMessage.request(node)]

    def update_neighbors(self, current: Iterable[NodeId], now: float) -> List[RepMessage]:
        """Sync ``known_neighbors`` with a connectivity snapshot.

        Nodes that left range are forgotten, so a later return counts as a
        new contact. Returns the requests for newly met nodes.
        """
        current = set(current)
        current.discard(self.self_id)
        self.known_neighbors &= current
        out: List[RepMessage] = []
        for node in sorted(current - self.known_neighbors):
            out.extend(self.on_new_neighbor(node, now))
        return out

    def expire_requests(self, now: float) -> List[Tuple[NodeId, Reputation]]:
        closed = []
        for subject in sorted(self.pending):
            req = self.pending[subject]
            if now + _EPS < req.deadline:
                continue
            del self.pending[subject]
            prior = self.table.get(subject)
            if not req.collected:
                closed.append((subject, prior))
                continue
            responses = [(self.table.get(r), v) for r, v in sorted(req.collected.items())]
            try:
                new = aggregate_on_demand(prior, self.params.alpha, responses)
            except ZeroWeightError:
                log.debug("%s: no weight on any reply about %s", format_node(self.self_id),
                          format_node(subject))
                closed.append((subject, prior))
                continue
            self._commit(subject, new, TraceEvent.ONDEMAND_MERGE, now)
            closed.append((subject, new))
        return closed

    def next_deadline(self) -> Optional[float]:
        return min((r.deadline for r in self.pending.values()), default=None)

    # -- classification -----------------------------------------------

    def flagged(self) -> Set[NodeId]:
        return set(self._flagged)

    def is_flagged(self, node: NodeId) -> bool:
        return node in self._flagged
