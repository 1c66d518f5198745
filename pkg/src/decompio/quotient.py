"""The execute operator, quotient automata and the decomposability verdict."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, NamedTuple

from .composition import check_shared_output_bounded
from .model import (
    DELTA,
    InterfaceSpec,
    Iolts,
    ModelError,
    SuspensionAutomaton,
    check_budget,
    check_input_enabled,
)
from .semantics import SaView, Violation, check_sa_valid, delta_transform

Pair = tuple[Hashable, Hashable]


class JointEngine:
    """Joint behaviour of a specification and a platform, state by state.

    ``spec`` and ``env`` are deterministic views (``step``/``out``) such as
    :class:`~decompio.semantics.SaView` or a lazy
    :class:`~decompio.semantics.Determinizer`.  Words taken jointly range
    over the labels the two alphabets share; labels of the hidden
    interface move the platform alone.
    """

    def __init__(self, spec, env, iface: InterfaceSpec):
        self.spec = spec
        self.env = env
        self.iface = iface
        self.joint = tuple(sorted(iface.spec_labels & iface.env_labels))
        self.hidden = iface.hidden
        self._sat: dict[frozenset, frozenset] = {}
        self._traced: dict[frozenset, tuple[frozenset, frozenset]] = {}
        self._exec: dict[tuple[frozenset, str], frozenset] = {}

    def _joint_moves(self, pair: Pair, with_delta: bool):
        s, e = pair
        labels = self.joint + (DELTA,) if with_delta else self.joint
        for x in labels:
            s2 = self.spec.step(s, x)
            if s2 is None:
                continue
            e2 = self.env.step(e, x)
            if e2 is not None:
                yield x, (s2, e2)

    def saturate(self, q: frozenset) -> frozenset:
        """Pairs reachable from ``q`` by joint words without ``delta``."""
        try:
            return self._sat[q]
        except KeyError:
            pass
        seen = set(q)
        stack = list(q)
        while stack:
            for _, nxt in self._joint_moves(stack.pop(), False):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        check_budget(len(seen))
        result = frozenset(seen)
        self._sat[q] = result
        return result

    def traced(self, q: frozenset) -> tuple[frozenset, frozenset]:
        """Pairs reachable from ``q`` by joint suspension words.

        Returns ``(all, open_)`` where ``open_`` holds the pairs reached by
        some word that does not end in ``delta`` (the empty word included).
        """
        try:
            return self._traced[q]
        except KeyError:
            pass
        seen = {(p, False) for p in q}
        stack = list(seen)
        while stack:
            pair, _ = stack.pop()
            for x, nxt in self._joint_moves(pair, True):
                node = (nxt, x == DELTA)
                if node not in seen:
                    seen.add(node)
                    stack.append(node)
        check_budget(len(seen))
        result = (frozenset(p for p, _ in seen), frozenset(p for p, d in seen if not d))
        self._traced[q] = result
        return result

    def execute(self, q: frozenset, x: str) -> frozenset:
        key = (q, x)
        try:
            return self._exec[key]
        except KeyError:
            pass
        result = set()
        for s, e in self.saturate(q):
            if x == DELTA:
                s2, e2 = self.spec.step(s, DELTA), self.env.step(e, DELTA)
            elif x in self.hidden:
                s2, e2 = s, self.env.step(e, x)
            else:
                s2, e2 = self.spec.step(s, x), e
            if s2 is not None and e2 is not None:
                result.add((s2, e2))
        out = frozenset(result)
        self._exec[key] = out
        return out

    def allows_output(self, q: frozenset, x: str) -> bool:
        """``x`` is in the spec's out-set after every joint word not ending in ``delta``."""
        _, open_ = self.traced(q)
        return all(x in self.spec.out(s) for s, _ in open_)

    def allows_delta(self, q: frozenset) -> bool:
        """The spec may be quiescent after every joint suspension word."""
        all_, _ = self.traced(q)
        return all(DELTA in self.spec.out(s) for s, _ in all_)

    def output_offender(self, q: frozenset, x: str) -> Pair | None:
        _, open_ = self.traced(q)
        return next((p for p in sorted(open_, key=repr) if x not in self.spec.out(p[0])), None)

    def delta_offender(self, q: frozenset) -> Pair | None:
        all_, _ = self.traced(q)
        return next((p for p in sorted(all_, key=repr) if DELTA not in self.spec.out(p[0])), None)


# -- quotient automaton ------------------------------------------------------


@dataclass(frozen=True)
class QuotientState:
    pairs: frozenset
    delta_flag: bool = False

    def __post_init__(self) -> None:
        if not self.pairs:
            raise ModelError("quotient states hold at least one pair")

    @property
    def base(self) -> "QuotientState":
        return QuotientState(self.pairs) if self.delta_flag else self

    @property
    def name(self) -> str:
        body = "[" + ",".join(f"({s}|{e})" for s, e in sorted(self.pairs)) + "]"
        return body + "@d" if self.delta_flag else body


class QuotientAutomaton(NamedTuple):
    automaton: SuspensionAutomaton
    states: dict[str, QuotientState]
    rules: dict[tuple[str, str], str]  # (state, label) -> rule name
    iface: InterfaceSpec
    spec_sa: SuspensionAutomaton
    env_sa: SuspensionAutomaton


def _check_iface(spec: Iolts, env: Iolts, iface: InterfaceSpec) -> None:
    if (spec.inputs, spec.outputs, env.inputs, env.outputs) != (
        iface.spec_inputs,
        iface.spec_outputs,
        iface.env_inputs,
        iface.env_outputs,
    ):
        raise ModelError("interface alphabets do not match the models")


def build_quotient(
    spec: Iolts, env: Iolts, iface: InterfaceSpec | None = None, name: str | None = None
) -> QuotientAutomaton:
    """Quotient of ``spec`` by ``env``, reachable part only."""
    iface = iface or InterfaceSpec.from_models(spec, env)
    _check_iface(spec, env, iface)
    spec_sa, env_sa = delta_transform(spec), delta_transform(env)
    engine = JointEngine(SaView(spec_sa), SaView(env_sa), iface)
    inputs = sorted(iface.quotient_inputs)
    shared_out = iface.component_outputs_v
    other_out = sorted(iface.quotient_outputs - shared_out)
    shared_out = sorted(shared_out)

    start = QuotientState(frozenset({(spec_sa.initial, env_sa.initial)}))
    states = {start.name: start}
    queue = deque([start])
    transitions = set()
    rules: dict[tuple[str, str], str] = {}

    def add(src: QuotientState, x: str, pairs: frozenset, rule: str, flag: bool = False) -> None:
        dst = QuotientState(pairs, flag)
        if dst.name not in states:
            states[dst.name] = dst
            check_budget(len(states))
            queue.append(dst)
        transitions.add((src.name, x, dst.name))
        rules[(src.name, x)] = rule

    while queue:
        q = queue.popleft()
        base = q.pairs
        for a in inputs:
            target = engine.execute(base, a)
            if target:
                add(q, a, target, "I1")
        if not q.delta_flag:
            for x in shared_out:
                target = engine.execute(base, x)
                if target:
                    add(q, x, target, "U1")
        for x in other_out:
            if engine.allows_output(base, x):
                target = engine.execute(base, x)
                if target:
                    add(q, x, target, "U2")
        if engine.allows_delta(base):
            target = engine.execute(base, DELTA)
            if target:
                add(q, DELTA, target, "delta1", flag=True)

    automaton = SuspensionAutomaton(
        states=frozenset(states),
        inputs=iface.quotient_inputs,
        outputs=iface.quotient_outputs,
        transitions=frozenset(transitions),
        initial=start.name,
        name=name or f"{spec.name}_by_{env.name}",
        origin=dict(states),
    )
    return QuotientAutomaton(automaton, states, rules, iface, spec_sa, env_sa)


# -- validity and verdicts ---------------------------------------------------


def check_quotient_valid(qa: QuotientAutomaton | SuspensionAutomaton, iface: InterfaceSpec):
    """Valid suspension automaton and strongly non-blocking."""
    a = qa.automaton if isinstance(qa, QuotientAutomaton) else qa
    report = check_sa_valid(a)
    violations = list(report.violations)
    visible = (a.outputs - iface.component_outputs_v) | {DELTA}
    for q in sorted(a.reachable):
        if not visible & a.succ[q].keys():
            offered = sorted(x for x in a.succ[q] if x in a.outputs)
            violations.append(
                Violation("SNB", q, f"only shared outputs {offered} offered" if offered else "no visible output")
            )
    return type(report)(not violations, violations)


class Decomposable(NamedTuple):
    witness: QuotientAutomaton

    def __bool__(self) -> bool:
        return True


class NotEstablished(NamedTuple):
    reasons: list[str]
    quotient: QuotientAutomaton | None = None

    def __bool__(self) -> bool:
        return False


def check_decomposable(spec: Iolts, env: Iolts, iface: InterfaceSpec | None = None):
    """Decomposable when the sufficient conditions hold; never claims the converse."""
    from .conformance import inclusion_check

    iface = iface or InterfaceSpec.from_models(spec, env)
    reasons = []
    enabled = check_input_enabled(env)
    if not enabled:
        reasons.append(f"platform not input-enabled at {', '.join(enabled.offending)}")
    else:
        verdict = inclusion_check(env, spec, iface)
        if not verdict.holds:
            sigma, x = verdict.counterexample
            reasons.append(f"platform behaviour not included: after {' '.join(sigma) or 'ε'} it may produce {x}")
    qa = build_quotient(spec, env, iface)
    validity = check_quotient_valid(qa, iface)
    for v in validity.violations:
        kind = "not strongly non-blocking" if v.rule == "SNB" else f"invalid suspension automaton ({v.rule})"
        reasons.append(f"quotient {kind} at {v.state}: {v.detail}")
    if reasons:
        return NotEstablished(reasons, qa)
    return Decomposable(qa)


def component_bounded(c: Iolts, iface: InterfaceSpec) -> bool:
    """Shared-output boundedness of a component over its hidden outputs."""
    return bool(check_shared_output_bounded(c, c.outputs & iface.component_outputs_v))
