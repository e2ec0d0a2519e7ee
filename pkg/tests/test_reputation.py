import math
import random

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from manet_trust.reputation import (
    BOOTSTRAP_REPUTATION,
    ContractError,
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
    parse_node,
)

unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
pairs = st.lists(st.tuples(unit, unit), min_size=1, max_size=8)


# -- direct_ratio -------------------------------------------------------

def test_ratio_examples():
    assert direct_ratio(8, 10) == pytest.approx(0.8)
    assert direct_ratio(10, 10) == 1.0
    assert direct_ratio(0, 10) == 0.0


def test_ratio_no_observation():
    assert direct_ratio(0, 0) is None


@pytest.mark.parametrize("fwd,sent", [(11, 10), (-1, 3), (1, -1)])
def test_ratio_contract(fwd, sent):
    with pytest.raises(ContractError):
        direct_ratio(fwd, sent)


# -- blend --------------------------------------------------------------

@pytest.mark.parametrize("prior,cur,alpha,want", [
    (1.0, 0.5, 0.8, 0.6),
    (0.7, 0.3, 0.0, 0.7),
    (0.7, 0.3, 1.0, 0.3),
])
def test_blend_examples(prior, cur, alpha, want):
    assert blend(prior, cur, alpha) == pytest.approx(want, abs=1e-15)


def test_blend_endpoints_exact():
    assert blend(0.7, 0.3, 0.0) == 0.7
    assert blend(0.7, 0.3, 1.0) == 0.3


@given(unit, unit, unit)
def test_blend_closed(p, c, a):
    assert 0.0 <= blend(p, c, a) <= 1.0


@given(unit, unit, st.floats(min_value=0.01, max_value=1.0))
def test_blend_monotone(p, c, a):
    assume(abs(c - p) >= 1e-9)
    r = blend(p, c, a)
    if c < p:
        assert r < p
    else:
        assert r > p


@pytest.mark.parametrize("bad", [-0.1, 1.1, math.nan])
def test_blend_rejects_out_of_range(bad):
    with pytest.raises(ValueError):
        blend(bad, 0.5, 0.5)
    with pytest.raises(ValueError):
        blend(0.5, 0.5, bad)


# -- merge_broadcast ----------------------------------------------------

@pytest.mark.parametrize("w,b,o,want", [(1.0, 0.2, 0.9, 0.2), (0.0, 0.2, 0.9, 0.9), (0.5, 0.2, 0.8, 0.5)])
def test_merge_examples(w, b, o, want):
    assert merge_broadcast(w, b, o) == pytest.approx(want, abs=1e-15)


@given(unit, unit)
def test_merge_endpoint_identities(b, o):
    assert merge_broadcast(1.0, b, o) == b
    assert merge_broadcast(0.0, b, o) == o


@given(unit, unit, unit)
def test_merge_between_inputs(w, b, o):
    assert min(b, o) <= merge_broadcast(w, b, o) <= max(b, o)


# -- aggregate_on_demand ------------------------------------------------

def test_aggregate_examples():
    assert aggregate_on_demand(1.0, 0.8, [(1.0, 0.6)]) == pytest.approx(1.4 / 1.8)
    assert aggregate_on_demand(0.9, 0.8, []) == 0.9
    assert aggregate_on_demand(0.3, 0.0, [(0.5, 0.42), (0.5, 0.42)]) == pytest.approx(0.42, abs=1e-15)


def test_aggregate_zero_weight():
    with pytest.raises(ZeroWeightError):
        aggregate_on_demand(0.4, 0.0, [(0.0, 0.2), (0.0, 0.9)])


def test_aggregate_no_replies_even_with_zero_alpha():
    assert aggregate_on_demand(0.4, 0.0, []) == 0.4


@given(unit, unit, unit, unit)
def test_aggregate_single_reply_is_merge(o, a, w, r):
    assume(a + w > 0)
    got = aggregate_on_demand(o, a, [(w, r)])
    want = merge_broadcast(w / (a + w), r, o)
    assert abs(got - want) <= 1e-12


@given(unit, unit, pairs, st.randoms(use_true_random=False))
def test_aggregate_permutation_invariant(o, a, resp, rnd):
    assume(a + sum(w for w, _ in resp) > 0)
    shuffled = list(resp)
    rnd.shuffle(shuffled)
    assert abs(aggregate_on_demand(o, a, resp) - aggregate_on_demand(o, a, shuffled)) <= 1e-12


@given(unit, unit, pairs)
def test_aggregate_bounds(o, a, resp):
    assume(a + sum(w for w, _ in resp) > 0)
    got = aggregate_on_demand(o, a, resp)
    lo = min([o] + [r for _, r in resp])
    hi = max([o] + [r for _, r in resp])
    assert lo <= got <= hi


def test_aggregate_matches_brute_formula():
    rng = random.Random(7)
    for _ in range(2000):
        o, a = rng.random(), rng.random()
        resp = [(rng.random(), rng.random()) for _ in range(rng.randint(1, 6))]
        want = (a * o + sum(w * r for w, r in resp)) / (a + sum(w for w, _ in resp))
        assert aggregate_on_demand(o, a, resp) == pytest.approx(want, rel=1e-12, abs=1e-15)


# -- classify / table ---------------------------------------------------

@pytest.mark.parametrize("v,verdict", [(0.25, Verdict.MALICIOUS), (0.5, Verdict.TRUSTED), (0.9, Verdict.TRUSTED)])
def test_classify(v, verdict):
    assert classify(v, 0.5) is verdict


def test_table_defaults_and_updates():
    t = ReputationTable()
    assert t.get(123) == BOOTSTRAP_REPUTATION == 1.0
    t.update(1, 0.25)
    assert t.get(1) == 0.25
    t.update(1, 0.6)
    assert t.get(1) == 0.6
    t.update(2, 0.9)
    assert t.get(1) == 0.6 and t.get(3) == 1.0
    assert t.stored(3) is None and 3 not in t
    with pytest.raises(ValueError):
        t.update(1, 1.5)
    assert t.get(1) == 0.6


@given(st.lists(st.tuples(st.integers(0, 20), unit), max_size=60))
def test_table_round_trip(ops):
    t = ReputationTable()
    model = {}
    for node, v in ops:
        t.update(node, v)
        model[node] = v
    for node in range(21):
        assert t.get(node) == model.get(node, 1.0)
    assert t.as_dict() == model


def test_reputation_type():
    assert Reputation() == 1.0
    for bad in (-1e-12, 1.0000001, math.nan, math.inf):
        with pytest.raises(ValueError):
            Reputation(bad)


def test_params_defaults_and_validation():
    p = TrustParams()
    assert (p.alpha, p.theta_drop, p.theta_malicious, p.window_secs, p.response_wait_secs) == (0.8, 0.2, 0.5, 10.0, 2.0)
    with pytest.raises(ValueError):
        TrustParams(alpha=1.5)
    with pytest.raises(ValueError):
        TrustParams(window_secs=0)
    with pytest.raises(ValueError):
        TrustParams(min_samples=0)


def test_node_addresses():
    assert format_node(0x0A000005) == "10.0.0.5"
    assert parse_node(" 10.0.0.5 ") == 0x0A000005
