"""Trace records and their CSV form."""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, TextIO, Union

from .reputation import NodeId, Reputation, format_node, parse_node

TRACE_HEADER = ("time", "observer", "subject", "reputation", "event")
EVENT_HEADER = ("time", "node", "packet_id", "hop", "outcome")


class TraceEvent(str, enum.Enum):
    WINDOW_CLOSE = "window_close"
    BROADCAST_MERGE = "broadcast_merge"
    ONDEMAND_MERGE = "ondemand_merge"
    FLAGGED = "flagged"


@dataclass(frozen=True)
class TraceRecord:
    time: float
    observer: NodeId
    subject: NodeId
    reputation: float
    event: TraceEvent

    def row(self):
        return (f"{self.time:.3f}", format_node(self.observer), format_node(self.subject),
                f"{self.reputation:.6f}", self.event.value)


def write_trace(records: Iterable[TraceRecord], out: Union[str, Path, TextIO]) -> None:
    if isinstance(out, (str, Path)):
        with open(out, "w", newline="") as fh:
            write_trace(records, fh)
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(TRACE_HEADER)
    for rec in records:
        w.writerow(rec.row())


def trace_to_csv(records: Iterable[TraceRecord]) -> str:
    buf = io.StringIO()
    write_trace(records, buf)
    return buf.getvalue()


def read_trace(src: Union[str, Path, TextIO]) -> List[TraceRecord]:
    if isinstance(src, (str, Path)):
        with open(src, newline="") as fh:
            return read_trace(fh)
    reader = csv.reader(src)
    header = next(reader, None)
    if header is None:
        return []
    if tuple(header) != TRACE_HEADER:
        raise ValueError(f"unexpected trace header {header!r}")
    return [
        TraceRecord(float(t), parse_node(obs), parse_node(subj), Reputation(float(rep)), TraceEvent(ev))
        for t, obs, subj, rep, ev in reader
    ]
