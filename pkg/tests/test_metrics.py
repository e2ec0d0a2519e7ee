import io

from manet_trust.metrics import METRICS_HEADER, compute_metrics, write_metrics
from manet_trust.scenario import TABLE1, node_id
from manet_trust.trace import TraceEvent, TraceRecord

SC = TABLE1.replace(nodes=4, malicious_ids=(2,))
M = node_id(2)


def rec(t, obs, subj, v, ev=TraceEvent.FLAGGED):
    return TraceRecord(t, node_id(obs), subj, v, ev)


def test_no_flags():
    m = compute_metrics([rec(10, 0, M, 0.9, TraceEvent.WINDOW_CLOSE)], SC)
    assert m.detected_count == 0 and m.false_positive_count == 0
    assert m.mean_time_to_detection is None
    assert m.first_flag_time == {M: None}


def test_single_detection():
    m = compute_metrics([rec(150.0, 0, M, 0.3), rec(170.0, 1, M, 0.2)], SC)
    assert m.detected_count == 1
    assert m.first_flag_time[M] == 150.0
    assert m.mean_time_to_detection == 150.0


def test_false_positive():
    m = compute_metrics([rec(20.0, 0, node_id(1), 0.4)], SC)
    assert m.false_positive_count == 1
    assert m.false_flags[node_id(1)] == 1


def test_false_positives_count_pairs():
    honest = node_id(1)
    m = compute_metrics([rec(20, 0, honest, .4), rec(40, 0, honest, .3), rec(50, 3, honest, .3)], SC)
    assert m.false_positive_count == 2


def test_csv():
    m = compute_metrics([rec(150.0, 0, M, 0.3)], SC)
    buf = io.StringIO()
    write_metrics(m, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == ",".join(METRICS_HEADER)
    assert "10.0.0.3,1,150.000,0" in lines
    assert "10.0.0.1,0,never,0" in lines
    assert len(lines) == 1 + SC.nodes
