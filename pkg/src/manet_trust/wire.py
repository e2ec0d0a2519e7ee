"""REP_MESS frames: 8-byte binary reputation headers.

Layout, big-endian::

    0      1      2..5            6..7
    +------+------+---------------+---------------+
    | ver  | type | subject addr  | rep_val q16   |
    +------+------+---------------+---------------+

``ver`` is always 0x01. ``type`` is 0 (request), 1 (response) or
2 (broadcast). ``rep_val`` carries round-half-away-from-zero of
``value * 65535``; requests carry zero there.
"""

from __future__ import annotations

import enum
import math
import struct
from dataclasses import dataclass

from .reputation import NodeId, Reputation, format_node

VERSION = 0x01
FRAME_LEN = 8
SCALE = 65535

_FRAME = struct.Struct(">BBIH")


class MsgType(enum.IntEnum):
    REQUEST = 0
    RESPONSE = 1
    BROADCAST = 2


class DecodeError(ValueError):
    pass


class BadLength(DecodeError):
    pass


class BadVersion(DecodeError):
    pass


class BadType(DecodeError):
    pass


class BadValue(DecodeError):
    """A request frame with a non-zero reputation field."""


@dataclass(frozen=True)
class RepMessage:
    msg_type: MsgType
    subject: NodeId
    rep_val: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "msg_type", MsgType(self.msg_type))
        if not 0 <= self.subject <= 0xFFFFFFFF:
            raise ValueError(f"subject {self.subject!r} is not a 32-bit address")
        object.__setattr__(self, "rep_val", Reputation(self.rep_val))

    @classmethod
    def request(cls, subject: NodeId) -> "RepMessage":
        return cls(MsgType.REQUEST, subject, 0.0)

    @classmethod
    def response(cls, subject: NodeId, value: float) -> "RepMessage":
        return cls(MsgType.RESPONSE, subject, value)

    @classmethod
    def broadcast(cls, subject: NodeId, value: float) -> "RepMessage":
        return cls(MsgType.BROADCAST, subject, value)

    def __str__(self) -> str:
        if self.msg_type is MsgType.REQUEST:
            return f"REP_REQUEST({format_node(self.subject)})"
        return f"REP_{self.msg_type.name}({format_node(self.subject)}, {self.rep_val:.4f})"


def quantize(value: float) -> int:
    x = float(value) * SCALE
    n = math.floor(x)
    # compare the fraction directly; floor(x + 0.5) misrounds just below .5
    return n + 1 if x - n >= 0.5 else n


def encode(msg: RepMessage) -> bytes:
    raw = 0 if msg.msg_type is MsgType.REQUEST else quantize(msg.rep_val)
    return _FRAME.pack(VERSION, int(msg.msg_type), msg.subject, raw)


def decode(frame: bytes) -> RepMessage:
    if len(frame) != FRAME_LEN:
        raise BadLength(f"expected {FRAME_LEN} bytes, got {len(frame)}")
    version, kind, subject, raw = _FRAME.unpack(bytes(frame))
    if version != VERSION:
        raise BadVersion(f"unsupported version 0x{version:02x}")
    if kind > MsgType.BROADCAST:
        raise BadType(f"unknown message type 0x{kind:02x}")
    if kind == MsgType.REQUEST and raw != 0:
        raise BadValue("request frames must carry a zero reputation field")
    return RepMessage(MsgType(kind), subject, raw / SCALE)
