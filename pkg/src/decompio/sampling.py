"""Seeded generators of small models for property suites."""

from __future__ import annotations

import itertools
import random
from typing import Iterator, Sequence

from .composition import check_shared_output_bounded
from .model import TAU, Iolts, check_input_enabled
from .onthefly import check_internal_choice
from .semantics import find_cycle, is_quiescent, tau_closure


def random_iolts(
    rng: random.Random,
    max_states: int = 6,
    inputs: Sequence[str] = ("a", "b"),
    outputs: Sequence[str] = ("x", "y"),
    max_transitions: int = 12,
    tau_weight: float = 0.15,
    name: str = "m",
) -> Iolts:
    """A random non-divergent IOLTS; tau edges closing a cycle are dropped."""
    n = rng.randint(1, max_states)
    states = [f"s{i}" for i in range(n)]
    labels = list(inputs) + list(outputs)
    transitions: set[tuple[str, str, str]] = set()
    taus: dict[str, set[str]] = {s: set() for s in states}
    for _ in range(rng.randint(0, max_transitions)):
        src, dst = rng.choice(states), rng.choice(states)
        if labels and rng.random() >= tau_weight:
            transitions.add((src, rng.choice(labels), dst))
            continue
        taus[src].add(dst)
        if find_cycle(states, lambda s: taus[s]):
            taus[src].discard(dst)
        else:
            transitions.add((src, TAU, dst))
    return _build(states, inputs, outputs, transitions, name)


def _build(states, inputs, outputs, transitions, name) -> Iolts:
    return Iolts(
        states=frozenset(states),
        inputs=frozenset(inputs),
        outputs=frozenset(outputs),
        transitions=frozenset(transitions),
        initial=states[0],
        name=name,
    )


def input_complete(m: Iolts, inputs: Sequence[str] | None = None) -> Iolts:
    """Add input self-loops wherever an input is not weakly enabled."""
    inputs = m.inputs if inputs is None else frozenset(inputs)
    extra = set()
    for s in m.states:
        closure = tau_closure(m, {s})
        for a in inputs:
            if not any(m.post(t, a) for t in closure):
                extra.add((s, a, s))
    if not extra:
        return m
    return m.replace(transitions=m.transitions | extra)


def random_iots(rng: random.Random, **kwargs) -> Iolts:
    return input_complete(random_iolts(rng, **kwargs))


def deterministic_components(
    n_states: int, inputs: Sequence[str], outputs: Sequence[str], max_outputs: int = 1
) -> Iterator[Iolts]:
    """Every deterministic, input-enabled, tau-free model with exactly ``n_states``
    reachable states, up to renaming.

    Each state has one target per input and at most ``max_outputs`` output
    edges; only models whose states are numbered in breadth-first order are
    produced, which removes renamings of the same model.
    """
    states = [f"c{i}" for i in range(n_states)]
    inputs, outputs = sorted(inputs), sorted(outputs)
    out_choices = [()]
    for k in range(1, max_outputs + 1):
        for labels in itertools.combinations(outputs, k):
            for targets in itertools.product(range(n_states), repeat=k):
                out_choices.append(tuple(zip(labels, targets)))
    in_choices = list(itertools.product(range(n_states), repeat=len(inputs)))
    per_state = list(itertools.product(in_choices, out_choices))
    for rows in itertools.product(per_state, repeat=n_states):
        if not _bfs_numbered(rows, inputs):
            continue
        transitions = set()
        for i, (ins, outs) in enumerate(rows):
            for a, t in zip(inputs, ins):
                transitions.add((states[i], a, states[t]))
            for x, t in outs:
                transitions.add((states[i], x, states[t]))
        yield _build(states, inputs, outputs, transitions, "c")


def _bfs_numbered(rows, inputs) -> bool:
    """States appear in breadth-first discovery order (so all are reachable)."""
    order = [0]
    seen = {0}
    i = 0
    while i < len(order):
        ins, outs = rows[order[i]]
        for t in list(ins) + [t for _, t in outs]:
            if t not in seen:
                seen.add(t)
                order.append(t)
        i += 1
    return order == list(range(len(rows)))


#: Alphabet shapes for (spec, env) pairs: spec inputs/outputs, env inputs/outputs.
#: ``u`` is produced by the component for the platform, ``w`` the other way round.
SHAPES = {
    "plain": ((("a",), ("x",)), (("a", "u"), ("w",))),
    "visible": ((("a",), ("x", "y")), (("a", "u"), ("w", "y"))),
}


def random_env(
    rng: random.Random, inputs, outputs, max_states: int = 3, internal_choice: bool = False
) -> Iolts | None:
    """A random input-enabled platform; ``None`` when the draw is rejected.

    With ``internal_choice`` inputs are kept only on quiescent states.
    """
    m = random_iolts(rng, max_states=max_states, inputs=inputs, outputs=outputs, max_transitions=6, name="e")
    if internal_choice:
        kept = frozenset(t for t in m.transitions if t[1] not in m.inputs or is_quiescent(m, t[0]))
        present = {(s, x) for s, x, _ in kept}
        extra = {(s, a, s) for s in m.states if is_quiescent(m, s) for a in m.inputs if (s, a) not in present}
        m = m.replace(transitions=kept | extra)
        if not check_internal_choice(m):
            return None
    else:
        m = input_complete(m)
    return m if check_input_enabled(m) else None


def random_pair(rng: random.Random, shape: str = "plain", internal_choice: bool = False, spec_states: int = 4):
    """A random (spec, env) pair of the given alphabet shape, or ``None``."""
    (si, so), (ei, eo) = SHAPES[shape]
    spec = random_iolts(rng, max_states=spec_states, inputs=si, outputs=so, max_transitions=8, name="s")
    env = random_env(rng, ei, eo, internal_choice=internal_choice)
    if env is None:
        return None
    hidden_out = env.outputs - spec.labels
    if not check_shared_output_bounded(env, hidden_out):
        return None
    return spec, env
