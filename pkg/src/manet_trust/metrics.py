"""Detection metrics derived from a trace."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional, TextIO, Union

from .reputation import NodeId, format_node
from .trace import TraceEvent, TraceRecord

METRICS_HEADER = ("subject", "is_malicious", "first_flag_time_s", "false_flags")


@dataclass
class DetectionMetrics:
    first_flag_time: Dict[NodeId, Optional[float]]  # malicious node -> earliest flag, None if never
    false_flags: Dict[NodeId, int]  # honest node -> number of observers that ever flagged it
    detected_count: int
    false_positive_count: int
    mean_time_to_detection: Optional[float]

    def rows(self):
        for node in sorted(set(self.first_flag_time) | set(self.false_flags)):
            if node in self.first_flag_time:
                t = self.first_flag_time[node]
                yield format_node(node), 1, "never" if t is None else f"{t:.3f}", 0
            else:
                yield format_node(node), 0, "never", self.false_flags[node]


def compute_metrics(traces: Iterable[TraceRecord], scenario) -> DetectionMetrics:
    malicious = set(scenario.malicious)
    first: Dict[NodeId, Optional[float]] = {m: None for m in malicious}
    flaggers: Dict[NodeId, set] = {n: set() for n in scenario.node_ids if n not in malicious}
    for rec in traces:
        if rec.event is not TraceEvent.FLAGGED:
            continue
        if rec.subject in malicious:
            t = first[rec.subject]
            if t is None or rec.time < t:
                first[rec.subject] = rec.time
        else:
            flaggers.setdefault(rec.subject, set()).add(rec.observer)
    times = [t for t in first.values() if t is not None]
    return DetectionMetrics(
        first_flag_time=first,
        false_flags={n: len(obs) for n, obs in flaggers.items()},
        detected_count=len(times),
        false_positive_count=sum(len(obs) for obs in flaggers.values()),
        mean_time_to_detection=sum(times) / len(times) if times else None,
    )


def write_metrics(metrics: DetectionMetrics, out: Union[str, Path, TextIO]) -> None:
    if isinstance(out, (str, Path)):
        with open(out, "w", newline="") as fh:
            write_metrics(metrics, fh)
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(METRICS_HEADER)
    w.writerows(metrics.rows())
