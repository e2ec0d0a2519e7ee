"""Reputation-based trust management for simulated mobile ad hoc networks."""

from .adversary import Decision, MarkovDropper, Phase, forward_decision
from .metrics import DetectionMetrics, compute_metrics
from .reputation import (
    BOOTSTRAP_REPUTATION,
    ContractError,
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
    merge_broadcast,
)
from .scenario import PRESETS, ConfigError, Scenario, load_scenario, parse_scenario, preset
from .simulator import SimulationResult, Simulator, run
from .trace import TraceEvent, TraceRecord
from .trust_manager import TrustManager
from .wire import DecodeError, MsgType, RepMessage, decode, encode

__version__ = "0.1.0"
