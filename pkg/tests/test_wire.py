import pytest
from hypothesis import given
from hypothesis import strategies as st

from manet_trust.wire import (
    FRAME_LEN,
    SCALE,
    BadLength,
    BadType,
    BadValue,
    BadVersion,
    DecodeError,
    MsgType,
    RepMessage,
    decode,
    encode,
    quantize,
)

from conftest import addr

unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
subjects = st.integers(0, 2 ** 32 - 1)


@pytest.mark.parametrize("msg,hexstr", [
    (RepMessage.broadcast(addr(5), 1.0), "01020A000005FFFF"),
    (RepMessage.request(addr(7)), "01000A0000070000"),
    (RepMessage.response(addr(5), 0.5), "01010A0000058000"),
])
def test_vectors(msg, hexstr):
    frame = encode(msg)
    assert frame.hex().upper() == hexstr
    assert decode(frame) == RepMessage(msg.msg_type, msg.subject, decode(frame).rep_val)


def test_quantize_half_rounds_up():
    assert quantize(0.5) == 32768
    assert quantize(0.0) == 0 and quantize(1.0) == SCALE
    assert quantize(1.5 / SCALE) == 2
    assert quantize(0.49999999 / SCALE) == 0


def test_bad_length():
    with pytest.raises(BadLength):
        decode(bytes(7))
    with pytest.raises(BadLength):
        decode(bytes(9))


def test_bad_type():
    with pytest.raises(BadType):
        decode(bytes.fromhex("01030A0000050000"))


def test_bad_version():
    with pytest.raises(BadVersion):
        decode(bytes.fromhex("02020A000005FFFF"))


def test_request_with_value_rejected():
    with pytest.raises(BadValue):
        decode(bytes.fromhex("01000A0000050001"))


def test_errors_share_a_base():
    for cls in (BadLength, BadType, BadVersion, BadValue):
        assert issubclass(cls, DecodeError)


@given(st.sampled_from(list(MsgType)), subjects, unit)
def test_round_trip(kind, subject, v):
    msg = RepMessage(kind, subject, v)
    back = decode(encode(msg))
    assert back.msg_type is kind and back.subject == subject
    if kind is MsgType.REQUEST:
        assert back.rep_val == 0.0
    else:
        assert abs(back.rep_val - v) <= 1 / SCALE


@given(st.sampled_from(list(MsgType)), subjects, st.integers(0, SCALE))
def test_valid_frames_are_fixed_points(kind, subject, raw):
    if kind is MsgType.REQUEST:
        raw = 0
    frame = bytes([1, int(kind)]) + subject.to_bytes(4, "big") + raw.to_bytes(2, "big")
    assert encode(decode(frame)) == frame


@given(st.binary(max_size=16))
def test_decode_never_crashes(data):
    try:
        msg = decode(data)
    except DecodeError:
        return
    assert len(data) == FRAME_LEN and encode(msg) == data


def test_message_validation():
    with pytest.raises(ValueError):
        RepMessage.response(2 ** 32, 0.5)
    with pytest.raises(ValueError):
        RepMessage.response(1, 1.5)
    assert str(RepMessage.request(addr(7))) == "REP_REQUEST(10.0.0.7)"
