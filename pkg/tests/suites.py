"""Seeded property suites shared by the acceptance and property tests."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import oracles
from decompio.composition import check_shared_output_bounded, hide, parallel
from decompio.conformance import ioco_check
from decompio.fixtures import fixture
from decompio.model import InterfaceSpec
from decompio.onthefly import OnTheFlyTester, TestConfig, run_onthefly_test, sut_from_model
from decompio.quotient import check_decomposable
from decompio.sampling import (
    SHAPES,
    deterministic_components,
    input_complete,
    random_iolts,
    random_iots,
    random_pair,
)
from decompio.semantics import bounded_straces, check_divergence, check_sa_valid, delta_transform

COMPONENT_INPUTS = ("w",)
COMPONENT_OUTPUTS = ("u", "x")


@dataclass
class Tally:
    checked: int = 0
    skipped_divergent: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and self.checked > 0


def decomposable_pairs(count: int, seed: int, internal_choice: bool = False):
    rng = random.Random(seed)
    shapes = sorted(SHAPES)
    found = 0
    while found < count:
        pair = random_pair(rng, shapes[found % len(shapes)], internal_choice)
        if pair is None:
            continue
        verdict = check_decomposable(*pair)
        if verdict:
            found += 1
            yield pair[0], pair[1], verdict.witness


def exhaustive_components(max_states: int = 3):
    return [
        c
        for n in range(1, max_states + 1)
        for c in deterministic_components(n, COMPONENT_INPUTS, COMPONENT_OUTPUTS)
        if check_shared_output_bounded(c, {"u"})
    ]


def random_conforming(rng, quotient, count: int, attempts: int = 5000):
    found = []
    for _ in range(attempts):
        c = random_iots(
            rng, max_states=5, inputs=COMPONENT_INPUTS, outputs=COMPONENT_OUTPUTS, max_transitions=10, name="c"
        )
        if check_shared_output_bounded(c, {"u"}) and ioco_check(c, quotient):
            found.append(c)
            if len(found) == count:
                break
    return found


def _hidden(c, spec, env):
    return hide(parallel(c, env), InterfaceSpec.from_models(spec, env).hidden)


def decomposition_suite(pairs: int, seed: int, internal_choice: bool, random_per_pair: int = 20, max_states: int = 3):
    """Components conforming to the quotient compose into conforming systems;
    with ``internal_choice`` non-conforming ones must also compose into
    non-conforming systems."""
    tally = Tally()
    exhaustive = exhaustive_components(max_states)
    rng = random.Random(seed + 1)
    for spec, env, qa in decomposable_pairs(pairs, seed, internal_choice):
        quotient = qa.automaton
        extra = random_conforming(rng, quotient, random_per_pair)
        for c in exhaustive + extra:
            conforms = bool(ioco_check(c, quotient))
            if not conforms and not internal_choice:
                continue
            hidden = _hidden(c, spec, env)
            if check_divergence(hidden).divergent:
                tally.skipped_divergent += 1
                continue
            tally.checked += 1
            if bool(ioco_check(hidden, spec)) != conforms:
                tally.failures.append((spec, env, c, conforms))
    return tally


def delta_suite(count: int, seed: int, depth: int = 6):
    rng = random.Random(seed)
    failures = []
    for _ in range(count):
        m = random_iolts(rng, max_states=6, max_transitions=12)
        a = delta_transform(m)
        if bounded_straces(m, depth) != bounded_straces(a, depth) or not check_sa_valid(a):
            failures.append(m)
    return failures


def ioco_pair(rng):
    spec = random_iolts(rng, max_states=4, inputs=("a",), outputs=("x", "y"), max_transitions=7, name="s")
    if rng.random() < 0.5:
        impl = input_complete(spec).replace(name="i")
        edits = rng.randint(0, 2)
        for _ in range(edits):
            src, dst = rng.choice(sorted(impl.states)), rng.choice(sorted(impl.states))
            impl = impl.replace(transitions=impl.transitions | {(src, rng.choice(("x", "y")), dst)})
    else:
        impl = random_iots(rng, max_states=4, inputs=("a",), outputs=("x", "y"), max_transitions=7, name="i")
    return impl, spec


def ioco_oracle_suite(count: int, seed: int, depth: int = 6):
    rng = random.Random(seed)
    disagreements = []
    verdicts = []
    for _ in range(count):
        impl, spec = ioco_pair(rng)
        exact = ioco_check(impl, spec).holds
        verdicts.append(exact)
        if exact != oracles.ioco(impl, spec, depth):
            disagreements.append((impl, spec))
    return disagreements, verdicts


def fixture_triples():
    spec, env = fixture("vending_s"), fixture("vending_e")
    yield "drink_c", spec, env, fixture("drink_c")
    yield "drink_m completed", spec, env, input_complete(fixture("drink_m"))


def soundness_suite(runs: int = 100, max_steps: int = 200):
    """Fail verdicts and replay mismatches over the fixture triples."""
    fails, mismatches, triples = [], [], []
    for name, spec, env, comp in fixture_triples():
        assert ioco_check(_hidden(comp, spec, env), spec), name
        triples.append(name)
        tester = OnTheFlyTester(spec, env)
        for seed in range(runs):
            cfg = TestConfig(seed=seed, max_steps=max_steps, stop_prob=0.0)
            v = run_onthefly_test(spec, env, sut_from_model(comp, seed), cfg=cfg, tester=tester)
            if v.value == "Fail":
                fails.append((name, seed, v.log[-2]))
            replay = run_onthefly_test(spec, env, sut_from_model(comp, seed), cfg=cfg)
            if replay.text() != v.text():
                mismatches.append((name, seed))
    return fails, mismatches, triples
