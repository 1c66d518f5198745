import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from decompio.model import DELTA, ModelError, isomorphic, parse_iolts
from decompio.sampling import random_iolts
from decompio.semantics import (
    Determinizer,
    bounded_straces,
    check_divergence,
    check_sa_valid,
    delta_transform,
    out_set,
    weak_after,
)

CORRECTED_DELTA = """
name delta_vending
kind sa
inputs c
outputs t r
init q0
trans q0 c q1
trans q0 delta q0
trans q1 c q1
trans q1 r q3
trans q1 t q2
trans q1 delta q0
trans q2 delta q2
trans q3 delta q3
"""


def test_weak_after_vending(fx):
    m = fx("vending_s")
    assert weak_after(m, {"s0"}, ["c", "t"]) == {"s4"}
    assert weak_after(m, {"s0"}, []) == {"s0"}
    assert weak_after(m, {"s2"}, []) == {"s0", "s1", "s2"}
    assert weak_after(m, {"s0"}, ["t"]) == set()


def test_weak_after_on_sa(fx):
    a = fx("vending_delta")
    assert weak_after(a, {"q0"}, [DELTA, "c", "r"]) == {"q3"}


def test_weak_after_rejects_foreign_labels(fx):
    with pytest.raises(ModelError):
        weak_after(fx("vending_s"), {"s0"}, ["order"])


def test_out_sets(fx):
    m = fx("vending_s")
    assert out_set(m, {"s0"}) == {DELTA}
    assert out_set(m, {"s4"}) == {DELTA}
    assert out_set(fx("vending_delta"), {"q1"}) == {"t", "r", DELTA}


def test_delta_of_vending(fx):
    a = delta_transform(fx("vending_s"))
    assert len(a.states) == 4
    assert isomorphic(a, parse_iolts(CORRECTED_DELTA))
    assert check_sa_valid(a)


def test_drawn_delta_lacks_one_forced_edge(fx):
    """The drawn suspension automaton is the computed one minus the coin loop
    on q1, and that loop is needed for the trace ``c c``."""
    drawn = fx("vending_delta")
    computed = delta_transform(fx("vending_s"))
    with_loop = drawn.replace(transitions=drawn.transitions | {("q1", "c", "q1")})
    assert not isomorphic(drawn, computed)
    assert isomorphic(with_loop, computed)
    assert ("c", "c") in oracles.straces(fx("vending_s"), 2)
    assert ("c", "c") not in bounded_straces(drawn, 2)


def test_delta_of_single_state():
    a = delta_transform(parse_iolts("init s\n"))
    assert a.transitions == {("{s}", DELTA, "{s}")}


def test_delta_origin_map(fx):
    a = delta_transform(fx("vending_s"))
    assert a.origin[a.initial] == {"s0"}


def test_delta_rejects_divergence():
    with pytest.raises(ModelError, match="divergent"):
        delta_transform(parse_iolts("init s\ntrans s tau s\n"))


def test_bounded_straces_examples(fx):
    m = fx("vending_s")
    assert bounded_straces(m, 0) == {()}
    two = bounded_straces(m, 2)
    for w in [(DELTA, "c"), ("c", "t"), ("c", "r"), ("c", DELTA)]:
        assert w in two
    assert ("t",) not in two
    with pytest.raises(ValueError):
        bounded_straces(m, -1)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 4))
def test_bounded_straces_monotone(seed, k):
    m = random_iolts(random.Random(seed), max_states=4, max_transitions=6)
    assert bounded_straces(m, k) <= bounded_straces(m, k + 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_bounded_straces_match_oracle(seed):
    m = random_iolts(random.Random(seed), max_states=4, max_transitions=7)
    assert bounded_straces(m, 4) == oracles.straces(m, 4)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_delta_preserves_straces_and_validity(seed):
    m = random_iolts(random.Random(seed), max_states=5, max_transitions=9)
    a = delta_transform(m)
    assert bounded_straces(a, 5) == bounded_straces(m, 5)
    assert check_sa_valid(a)
    assert all(len(weak_after(a, {a.initial}, w)) <= 1 for w in bounded_straces(a, 3))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.data())
def test_out_set_is_a_union(seed, data):
    m = random_iolts(random.Random(seed), max_states=5)
    states = sorted(m.states)
    q1 = data.draw(st.sets(st.sampled_from(states), min_size=1))
    q2 = data.draw(st.sets(st.sampled_from(states), min_size=1))
    assert out_set(m, q1 | q2) == out_set(m, q1) | out_set(m, q2)


def test_divergence_examples(fx):
    assert not check_divergence(fx("vending_s")).divergent
    loop = check_divergence(parse_iolts("init s\ntrans s tau s\n"))
    assert loop.divergent and loop.cycle == ("s", "s")
    unreachable = parse_iolts("states s t\ninit s\ntrans t tau t\n")
    assert not check_divergence(unreachable).divergent


def test_hiding_can_create_divergence():
    from decompio.composition import hide

    m = parse_iolts("outputs order\ninit p\ntrans p order q\ntrans q order p\n")
    assert not check_divergence(m).divergent
    report = check_divergence(hide(m, {"order"}))
    assert report.divergent and report.cycle[0] == report.cycle[-1]


def _sa(body):
    return parse_iolts("kind sa\ninputs a\noutputs t\n" + body)


def test_validity_v2_anomaly():
    a = _sa("init p\ntrans p delta q\ntrans q t r\ntrans q delta q\ntrans r delta r\ntrans p t r\n")
    report = check_sa_valid(a)
    assert not report and {v.rule for v in report.violations} >= {"V2"}


def test_validity_v1_blocking():
    a = _sa("init p\ntrans p a q\ntrans p delta p\n")
    report = check_sa_valid(a)
    assert [v.rule for v in report.violations] == ["V1"]


def test_validity_v3_unstable():
    a = _sa("init p\ntrans p delta q\ntrans q a q\n")
    assert "V3" in {v.rule for v in check_sa_valid(a).violations}


def test_validity_v4_new_behaviour_after_delta():
    a = _sa("init p\ntrans p delta q\ntrans q delta q\ntrans q a q\n")
    assert "V4" in {v.rule for v in check_sa_valid(a).violations}


def test_drawn_quotients_are_valid(fx):
    assert check_sa_valid(fx("quotient_r"))
    assert check_sa_valid(fx("quotient_i"))
    assert check_sa_valid(fx("eft_quotient"))


def test_determinizer_silent_labels():
    m = parse_iolts("inputs a u\noutputs x\ninit p\ntrans p u q\ntrans q x p\n")
    plain = Determinizer(m)
    silent = Determinizer(m, silent={"u"})
    assert plain.initial == {"p"}
    assert silent.initial == {"p", "q"}
    assert DELTA in silent.out(silent.initial) and "x" in silent.out(silent.initial)
    assert "u" not in silent.labels
