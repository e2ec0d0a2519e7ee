"""Experiment scenarios: the config-file format and the built-in presets.

Config files are flat ``key=value`` text with ``#`` comments. Every key is
optional; missing keys fall back to the ``table1`` preset.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

from .adversary import Phase
from .reputation import NodeId, TrustParams

ADDRESS_BASE = 0x0A000000  # 10.0.0.0


def node_id(index: int) -> NodeId:
    """Address of node ``index``: node 0 is 10.0.0.1."""
    return ADDRESS_BASE + index + 1


def node_index(node: NodeId) -> int:
    return node - ADDRESS_BASE - 1


class ConfigError(ValueError):
    def __init__(self, message: str, key: Optional[str] = None, line: Optional[int] = None):
        self.message = message
        self.key = key
        self.line = line
        where = []
        if key is not None:
            where.append(f"key '{key}'")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


@dataclass(frozen=True)
class Scenario:
    duration_s: float = 450.0
    area_w_m: float = 1000.0
    area_h_m: float = 500.0
    nodes: int = 22
    tx_range_m: float = 250.0
    max_speed_mps: float = 10.0
    pause_s: float = 300.0
    sources: int = 5
    cbr_pps: float = 4.0
    malicious_ids: Tuple[int, ...] = (2, 6, 10, 14, 18)
    drop_min_pps: int = 1
    drop_max_pps: int = 8
    t_trans_lo_s: float = 100.0
    t_trans_hi_s: float = 200.0
    alpha: float = 0.8
    theta_drop: float = 0.2
    theta_malicious: float = 0.5
    window_s: float = 10.0
    response_wait_s: float = 2.0
    channel_loss_prob: float = 0.02
    seed: int = 0

    # preset-only fields, not settable from config files
    session_s: float = 10.0
    min_samples: int = 10
    positions: Optional[Tuple[Tuple[float, float], ...]] = None
    flows: Optional[Tuple[Tuple[int, int], ...]] = None
    phase_script: Optional[Tuple[Tuple[float, Phase], ...]] = None
    initial_reputations: Tuple[Tuple[int, int, float], ...] = ()
    injected_broadcasts: Tuple[Tuple[float, int, int, float], ...] = ()
    focus: Optional[Tuple[int, int]] = None
    name: str = "custom"

    def __post_init__(self):
        validate(self)

    @property
    def trust(self) -> TrustParams:
        return TrustParams(self.alpha, self.theta_drop, self.theta_malicious,
                           self.window_s, self.response_wait_s, self.min_samples)

    @property
    def node_ids(self) -> Tuple[NodeId, ...]:
        return tuple(node_id(i) for i in range(self.nodes))

    @property
    def malicious(self) -> frozenset:
        return frozenset(node_id(i) for i in self.malicious_ids)

    def replace(self, **changes) -> "Scenario":
        return dataclasses.replace(self, **changes)


CONFIG_KEYS = (
    "duration_s", "area_w_m", "area_h_m", "nodes", "tx_range_m", "max_speed_mps", "pause_s",
    "sources", "cbr_pps", "malicious_ids", "drop_min_pps", "drop_max_pps", "t_trans_lo_s",
    "t_trans_hi_s", "alpha", "theta_drop", "theta_malicious", "window_s", "response_wait_s",
    "channel_loss_prob", "seed",
)
_INT_KEYS = {"nodes", "sources", "drop_min_pps", "drop_max_pps", "seed"}


def _check(ok: bool, key: str, message: str):
    if not ok:
        raise ConfigError(message, key=key)


def validate(s: Scenario) -> None:
    def finite(key, lo=0.0, strict=False):
        v = getattr(s, key)
        good = isinstance(v, (int, float)) and math.isfinite(v) and (v > lo if strict else v >= lo)
        _check(good, key, f"must be {'>' if strict else '>='} {lo}, got {v!r}")

    finite("duration_s")
    finite("area_w_m", strict=True)
    finite("area_h_m", strict=True)
    finite("tx_range_m")
    finite("max_speed_mps")
    finite("pause_s")
    finite("cbr_pps")
    finite("t_trans_lo_s")
    finite("t_trans_hi_s")
    finite("session_s", strict=True)
    _check(isinstance(s.min_samples, int) and s.min_samples >= 1, "min_samples",
           f"must be a positive integer, got {s.min_samples!r}")
    for key in ("alpha", "theta_drop", "theta_malicious", "channel_loss_prob"):
        v = getattr(s, key)
        _check(isinstance(v, (int, float)) and 0.0 <= v <= 1.0, key, f"must lie in [0, 1], got {v!r}")
    for key in ("window_s", "response_wait_s"):
        finite(key, strict=True)
    _check(isinstance(s.nodes, int) and s.nodes >= 2, "nodes", f"need at least 2 nodes, got {s.nodes!r}")
    _check(isinstance(s.sources, int) and s.sources >= 0, "sources", f"must be >= 0, got {s.sources!r}")
    _check(isinstance(s.drop_min_pps, int) and s.drop_min_pps >= 0, "drop_min_pps",
           f"must be a non-negative integer, got {s.drop_min_pps!r}")
    _check(isinstance(s.drop_max_pps, int) and s.drop_max_pps >= s.drop_min_pps, "drop_max_pps",
           f"must be an integer >= drop_min_pps, got {s.drop_max_pps!r}")
    _check(s.t_trans_hi_s >= s.t_trans_lo_s, "t_trans_hi_s", "must be >= t_trans_lo_s")
    _check(isinstance(s.seed, int) and 0 <= s.seed < 2 ** 64, "seed", f"must be a 64-bit unsigned integer, got {s.seed!r}")
    _check(len(set(s.malicious_ids)) == len(s.malicious_ids), "malicious_ids", "duplicate ids")
    for i in s.malicious_ids:
        _check(isinstance(i, int) and 0 <= i < s.nodes, "malicious_ids",
               f"id {i!r} outside 0..{s.nodes - 1}")
    if s.positions is not None:
        _check(len(s.positions) == s.nodes, "positions", "need one position per node")
        for x, y in s.positions:
            _check(0 <= x <= s.area_w_m and 0 <= y <= s.area_h_m, "positions", f"({x}, {y}) outside the area")
    for src, dst in s.flows or ():
        _check(0 <= src < s.nodes and 0 <= dst < s.nodes and src != dst, "flows", f"bad flow {src}->{dst}")


def _parse_value(key: str, raw: str, line: int):
    try:
        if key == "malicious_ids":
            return tuple(int(p) for p in raw.split(",") if p.strip())
        if key in _INT_KEYS:
            return int(raw, 0)
        v = float(raw)
    except ValueError:
        raise ConfigError(f"cannot parse {raw!r}", key=key, line=line) from None
    if not math.isfinite(v):
        raise ConfigError(f"non-finite value {raw!r}", key=key, line=line)
    return v


def parse_scenario(text: str, base: Optional[Scenario] = None) -> Scenario:
    values: Dict[str, object] = {}
    lines: Dict[str, int] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected key=value, got {line!r}", line=lineno)
        key, raw = (p.strip() for p in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigError("unknown key", key=key, line=lineno)
        if key in values:
            raise ConfigError("duplicate key", key=key, line=lineno)
        values[key] = _parse_value(key, raw, lineno)
        lines[key] = lineno
    base = base or TABLE1
    try:
        return base.replace(name="custom", **values)
    except ConfigError as e:
        if e.key in lines:
            raise ConfigError(e.message, key=e.key, line=lines[e.key]) from None
        raise


def load_scenario(path: Union[str, Path]) -> Scenario:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read scenario file {path}: {e.strerror or e}") from None
    return parse_scenario(text)


# -- presets ----------------------------------------------------------

TABLE1 = Scenario(name="table1")

# S(0) - A(1) - M(2) - D(3) on a line, 200 m hops; 4 and 5 overhear A only.
_CHAIN = ((100.0, 250.0), (300.0, 250.0), (500.0, 250.0), (700.0, 250.0), (300.0, 450.0), (300.0, 50.0))

_CHAIN_BASE = dict(
    nodes=6, positions=_CHAIN, max_speed_mps=0.0, flows=((0, 3),), sources=1,
    malicious_ids=(2,), focus=(1, 2),
)

FIG2_3 = TABLE1.replace(
    name="fig2_3", **_CHAIN_BASE,
    phase_script=((0.0, Phase.BAD), (140.0, Phase.GOOD), (240.0, Phase.BAD), (400.0, Phase.GOOD)),
)

FIG4 = TABLE1.replace(name="fig4", **_CHAIN_BASE, drop_min_pps=0, drop_max_pps=5,
                      t_trans_lo_s=0.0, t_trans_hi_s=5.0)

FIG5 = TABLE1.replace(name="fig5", **_CHAIN_BASE, drop_min_pps=3, drop_max_pps=15,
                      t_trans_lo_s=0.0, t_trans_hi_s=5.0)

FIG6 = TABLE1.replace(name="fig6")

# X(0) watches Y(1); B1(2) and B2(3) accuse Y. No data traffic.
FIG7 = TABLE1.replace(
    name="fig7", nodes=4, sources=0, malicious_ids=(), max_speed_mps=0.0, flows=(),
    positions=((500.0, 250.0), (700.0, 250.0), (500.0, 450.0), (300.0, 250.0)),
    initial_reputations=((0, 1, 0.7), (0, 2, 0.6), (0, 3, 0.5)),
    injected_broadcasts=((60.0, 2, 1, 0.3), (120.0, 3, 1, 0.25), (180.0, 2, 1, 0.2),
                         (240.0, 3, 1, 0.2), (300.0, 2, 1, 0.15), (360.0, 3, 1, 0.15)),
    focus=(0, 1),
)

PRESETS: Dict[str, Scenario] = {
    "fig2_3": FIG2_3,
    "fig4": FIG4,
    "fig5": FIG5,
    "fig6": FIG6,
    "fig7": FIG7,
    "table1": TABLE1,
}


def preset(name: str) -> Scenario:
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(sorted(PRESETS))}",
                          key="preset") from None
