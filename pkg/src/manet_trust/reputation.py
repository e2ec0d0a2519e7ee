"""Reputation algebra.

Every node keeps a table of unit-interval trust scores for the other nodes
it has dealt with. Scores come from four rules:

* ``direct_ratio``: fraction of handed-over packets a neighbor forwarded
  during one monitoring window.
* ``blend``: exponential smoothing of the stored score with a fresh ratio.
* ``merge_broadcast``: folding in an accusation, weighted by how much the
  accuser is trusted.
* ``aggregate_on_demand``: trust-weighted average of neighbor replies to a
  reputation request, anchored on the requester's own prior.

Arithmetic is plain double precision. Results are clamped to the hull of
their inputs so rounding can never push a score out of [0, 1].
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from ipaddress import IPv4Address
from typing import Dict, Iterable, Iterator, Optional, Sequence, Tuple

NodeId = int

BOOTSTRAP_REPUTATION = 1.0


class ContractError(ValueError):
    """An argument violates an operation's precondition."""


class ZeroWeightError(ZeroDivisionError):
    """On-demand aggregation with no weight on any term."""


def format_node(node: NodeId) -> str:
    return str(IPv4Address(node))


def parse_node(text: str) -> NodeId:
    return int(IPv4Address(text.strip()))


class Reputation(float):
    """A float confined to the closed unit interval."""

    __slots__ = ()

    def __new__(cls, value=BOOTSTRAP_REPUTATION):
        v = float(value)
        if not 0.0 <= v <= 1.0:  # also rejects NaN
            raise ValueError(f"reputation must lie in [0, 1], got {value!r}")
        return super().__new__(cls, v)

    def __repr__(self) -> str:
        return f"Reputation({float(self)!r})"


def _unit(name: str, value: float) -> float:
    v = float(value)
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
    return v


def _clamp(value: float, lo: float, hi: float) -> Reputation:
    return Reputation(min(max(value, lo), hi))


@dataclass(frozen=True)
class TrustParams:
    alpha: float = 0.8
    theta_drop: float = 0.2
    theta_malicious: float = 0.5
    window_secs: float = 10.0
    response_wait_secs: float = 2.0
    # windows with fewer packets than this count as no observation
    min_samples: int = 10

    def __post_init__(self):
        for name in ("alpha", "theta_drop", "theta_malicious"):
            _unit(name, getattr(self, name))
        for name in ("window_secs", "response_wait_secs"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValueError(f"{name} must be a positive number of seconds, got {v!r}")
        if not (isinstance(self.min_samples, int) and self.min_samples >= 1):
            raise ValueError(f"min_samples must be a positive integer, got {self.min_samples!r}")


def direct_ratio(forwarded: int, sent: int) -> Optional[Reputation]:
    """Fraction of packets forwarded; ``None`` when nothing was handed over."""
    if forwarded < 0 or sent < 0:
        raise ContractError(f"counts must be non-negative, got ({forwarded}, {sent})")
    if forwarded > sent:
        raise ContractError(f"forwarded ({forwarded}) exceeds sent ({sent})")
    if sent == 0:
        return None
    return Reputation(forwarded / sent)


def blend(prior: float, current: float, alpha: float) -> Reputation:
    prior = _unit("prior", prior)
    current = _unit("current", current)
    alpha = _unit("alpha", alpha)
    value = (1.0 - alpha) * prior + alpha * current
    return _clamp(value, min(prior, current), max(prior, current))


def merge_broadcast(trust_in_broadcaster: float, broadcast_value: float,
                    own_prior: float) -> Reputation:
    """Combine a neighbor's broadcast value with our own, weighted by trust in the sender."""
    w = _unit("trust_in_broadcaster", trust_in_broadcaster)
    b = _unit("broadcast_value", broadcast_value)
    o = _unit("own_prior", own_prior)
    value = w * b + (1.0 - w) * o
    return _clamp(value, min(b, o), max(b, o))


def aggregate_on_demand(own_prior: float, alpha: float,
                        responses: Sequence[Tuple[float, float]]) -> Reputation:
    """Trust-weighted mean of reply values, with the prior weighted by ``alpha``.

    ``responses`` holds ``(trust_in_responder, reported_value)`` pairs. With no
    replies the prior is returned unchanged.
    """
    o = _unit("own_prior", own_prior)
    a = _unit("alpha", alpha)
    if not responses:
        return Reputation(o)
    weights = [a]
    terms = [a * o]
    lo = hi = o
    for w, r in responses:
        w = _unit("trust_in_responder", w)
        r = _unit("reported_value", r)
        weights.append(w)
        terms.append(w * r)
        lo, hi = min(lo, r), max(hi, r)
    denom = math.fsum(weights)
    if denom == 0.0:
        raise ZeroWeightError("alpha and every responder weight are zero")
    return _clamp(math.fsum(terms) / denom, lo, hi)


class Verdict(enum.Enum):
    TRUSTED = "trusted"
    MALICIOUS = "malicious"


def classify(value: float, theta_malicious: float) -> Verdict:
    # the threshold itself counts as trusted
    return Verdict.MALICIOUS if value < theta_malicious else Verdict.TRUSTED


class ReputationTable:
    """Map from node id to reputation; unknown nodes read as 1.0."""

    def __init__(self, entries: Optional[Iterable[Tuple[NodeId, float]]] = None):
        self._entries: Dict[NodeId, Reputation] = {}
        if entries is not None:
            items = entries.items() if isinstance(entries, dict) else entries
            for node, value in items:
                self.update(node, value)

    def get(self, node: NodeId) -> Reputation:
        return self._entries.get(node, Reputation(BOOTSTRAP_REPUTATION))

    def update(self, node: NodeId, value: float) -> "ReputationTable":
        self._entries[node] = Reputation(value)
        return self

    def stored(self, node: NodeId) -> Optional[Reputation]:
        return self._entries.get(node)

    def __contains__(self, node: NodeId) -> bool:
        return node in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[NodeId]:
        return iter(self._entries)

    def items(self):
        return self._entries.items()

    def as_dict(self) -> Dict[NodeId, float]:
        return {k: float(v) for k, v in self._entries.items()}

    def __repr__(self) -> str:
        body = ", ".join(f"{format_node(k)}: {float(v):.4f}" for k, v in sorted(self._entries.items()))
        return f"ReputationTable({{{body}}})"
