"""Suspension-trace semantics and the quiescence-aware subset construction."""

from __future__ import annotations

from collections import deque
from typing import Iterable, NamedTuple, Sequence

from .model import (
    DELTA,
    TAU,
    Iolts,
    ModelError,
    SuspensionAutomaton,
    check_budget,
)

StateSet = frozenset


def tau_closure(m: Iolts, states: Iterable[str], silent: frozenset[str] = frozenset()) -> frozenset[str]:
    """States reachable through ``tau`` (and any ``silent`` label)."""
    seen = set(states)
    stack = list(seen)
    moves = {TAU} | silent
    while stack:
        s = stack.pop()
        for x, targets in m.succ[s].items():
            if x in moves:
                for t in targets:
                    if t not in seen:
                        seen.add(t)
                        stack.append(t)
    return frozenset(seen)


def is_quiescent(m: Iolts, state: str) -> bool:
    """``init(s)`` contains inputs only; for an SA, a ``delta`` edge leaves ``s``."""
    if m.is_sa:
        return DELTA in m.succ[state]
    return all(x in m.inputs for x in m.succ[state])


class Determinizer:
    """Lazy subset construction over an IOLTS.

    States are frozensets of the underlying model's states.  ``silent`` labels
    are treated as unobservable moves that, unlike ``tau``, do not spoil
    quiescence (used for inputs the model may receive from a hidden peer).
    """

    def __init__(self, m: Iolts, silent: Iterable[str] = ()):
        self.model = m
        self.silent = frozenset(silent)
        self.labels = (m.inputs | m.outputs) - self.silent
        self.initial = self.closure({m.initial})
        self._steps: dict[tuple[frozenset, str], frozenset | None] = {}
        self._outs: dict[frozenset, frozenset[str]] = {}
        self._quiet = {s: is_quiescent(m, s) for s in m.states}

    def closure(self, states: Iterable[str]) -> frozenset[str]:
        return tau_closure(self.model, states, self.silent)

    def quiescent(self, state: str) -> bool:
        return self._quiet[state]

    def step(self, q: frozenset, x: str) -> frozenset | None:
        key = (q, x)
        try:
            return self._steps[key]
        except KeyError:
            pass
        if x == DELTA:
            target = frozenset(s for s in q if self._quiet[s])
        elif x in self.labels:
            post: set[str] = set()
            for s in q:
                post.update(self.model.post(s, x))
            target = self.closure(post) if post else frozenset()
        else:
            raise ModelError(f"{x!r} is not in the alphabet of {self.model.name}")
        result = target or None
        self._steps[key] = result
        return result

    def out(self, q: frozenset) -> frozenset[str]:
        try:
            return self._outs[q]
        except KeyError:
            pass
        outs: set[str] = set()
        for s in q:
            for x in self.model.succ[s]:
                if x in self.model.outputs and x not in self.silent:
                    outs.add(x)
            if self._quiet[s]:
                outs.add(DELTA)
        result = frozenset(outs)
        self._outs[q] = result
        return result

    def enabled(self, q: frozenset) -> list[str]:
        """Labels (``delta`` included) with a non-empty successor, sorted."""
        return [x for x in sorted(self.labels | {DELTA}) if self.step(q, x) is not None]


class SaView:
    """Adapts a :class:`SuspensionAutomaton` to the :class:`Determinizer` interface."""

    def __init__(self, a: SuspensionAutomaton):
        self.model = a
        self.labels = a.inputs | a.outputs
        self.initial = a.initial

    def step(self, q: str, x: str) -> str | None:
        if x != DELTA and x not in self.labels:
            raise ModelError(f"{x!r} is not in the alphabet of {self.model.name}")
        return self.model.step(q, x)

    def out(self, q: str) -> frozenset[str]:
        return frozenset(x for x in self.model.succ[q] if x in self.model.outputs or x == DELTA)

    def enabled(self, q: str) -> list[str]:
        return sorted(self.model.succ[q])


def view(m: Iolts) -> Determinizer | SaView:
    return SaView(m) if m.is_sa else Determinizer(m)


def set_name(q: Iterable[str]) -> str:
    return "{" + ",".join(sorted(q)) + "}"


# -- after / out -----------------------------------------------------------


def weak_after(m: Iolts, q: Iterable[str], word: Sequence[str]) -> frozenset[str]:
    """``q after word`` over suspension words; empty when the word is not a trace."""
    if m.is_sa:
        current = set(q)
        for x in word:
            if x != DELTA and x not in m.labels:
                raise ModelError(f"{x!r} is not in the alphabet of {m.name}")
            current = {t for s in current for t in m.post(s, x)}
        return frozenset(current)
    det = Determinizer(m)
    current: frozenset | None = det.closure(q)
    for x in word:
        if not current:
            return frozenset()
        current = det.step(current, x)
    return current or frozenset()


def out_set(m: Iolts, q: Iterable[str]) -> frozenset[str]:
    """Weakly enabled outputs of ``q`` plus ``delta`` for quiescent members."""
    if m.is_sa:
        view_ = SaView(m)
        return frozenset().union(*(view_.out(s) for s in q))
    det = Determinizer(m)
    return det.out(det.closure(q))


# -- delta transformation --------------------------------------------------


def determinize(det: Determinizer, name: str | None = None) -> SuspensionAutomaton:
    """Materialise the reachable part of a lazy subset construction."""
    m = det.model
    names = {det.initial: set_name(det.initial)}
    queue = deque([det.initial])
    transitions = set()
    labels = sorted(det.labels | {DELTA})
    while queue:
        q = queue.popleft()
        for x in labels:
            target = det.step(q, x)
            if target is None:
                continue
            if target not in names:
                names[target] = set_name(target)
                check_budget(len(names))
                queue.append(target)
            transitions.add((names[q], x, names[target]))
    return SuspensionAutomaton(
        states=frozenset(names.values()),
        inputs=m.inputs - det.silent,
        outputs=m.outputs - det.silent,
        transitions=frozenset(transitions),
        initial=names[det.initial],
        name=name or f"delta_{m.name}",
        origin={v: k for k, v in names.items()},
    )


def delta_transform(m: Iolts) -> SuspensionAutomaton:
    """The suspension automaton of ``m`` (subset construction with explicit ``delta``)."""
    if m.is_sa:
        return m
    report = check_divergence(m)
    if report.divergent:
        raise ModelError(f"{m.name} is divergent: tau cycle through {' '.join(report.cycle)}")
    return determinize(Determinizer(m))


def bounded_straces(m: Iolts, k: int) -> set[tuple[str, ...]]:
    """All suspension traces of length at most ``k``.

    Runs are tracked state by state (no subset construction), so the result
    can serve as an oracle for :func:`delta_transform`.
    """
    if k < 0:
        raise ValueError("depth must be non-negative")
    if m.is_sa:
        moves = lambda s: sorted(m.transitions_from(s))  # noqa: E731
    else:
        moves = lambda s: _weak_moves(m, s)  # noqa: E731
    start = {m.initial} if m.is_sa else tau_closure(m, {m.initial})
    traces = {()}
    frontier = {((), s) for s in start}
    for _ in range(k):
        nxt = set()
        for word, s in frontier:
            for x, t in moves(s):
                nxt.add((word + (x,), t))
        frontier = nxt
        traces.update(w for w, _ in frontier)
        check_budget(len(frontier))
    return traces


def _weak_moves(m: Iolts, s: str):
    """(label, state) pairs with ``s =label=> state``, ``delta`` included."""
    moves = []
    if is_quiescent(m, s):
        moves.append((DELTA, s))
    for x, targets in m.succ[s].items():
        if x == TAU:
            continue
        for t in tau_closure(m, targets):
            moves.append((x, t))
    return moves


# -- divergence --------------------------------------------------------------


class DivergenceReport(NamedTuple):
    divergent: bool
    cycle: tuple[str, ...]  # witness states, first repeated at the end


def find_cycle(nodes: Iterable[str], edges) -> tuple[str, ...]:
    """Some cycle in the graph ``edges: node -> iterable of nodes``, or ``()``."""
    color: dict[str, int] = {}
    for root in sorted(nodes):
        if root in color:
            continue
        path = [root]
        color[root] = 1
        iters = [iter(sorted(edges(root)))]
        while iters:
            try:
                nxt = next(iters[-1])
            except StopIteration:
                color[path.pop()] = 2
                iters.pop()
                continue
            if color.get(nxt) == 1:
                i = path.index(nxt)
                return tuple(path[i:] + [nxt])
            if nxt not in color:
                color[nxt] = 1
                path.append(nxt)
                iters.append(iter(sorted(edges(nxt))))
    return ()


def check_divergence(m: Iolts) -> DivergenceReport:
    """Does a reachable ``tau`` cycle exist?"""
    if m.is_sa:
        return DivergenceReport(False, ())
    cycle = find_cycle(m.reachable, lambda s: m.post(s, TAU))
    return DivergenceReport(bool(cycle), cycle)


# -- validity of suspension automata -----------------------------------------


class Violation(NamedTuple):
    rule: str
    state: str
    detail: str


class ValidityReport(NamedTuple):
    valid: bool
    violations: list[Violation]

    def __bool__(self) -> bool:
        return self.valid


def _trace_included(a: SuspensionAutomaton, p: str, q: str) -> bool:
    """traces(p) is a subset of traces(q), both states of the deterministic ``a``."""
    seen = {(p, q)}
    stack = [(p, q)]
    while stack:
        x, y = stack.pop()
        for label in a.succ[x]:
            y2 = a.step(y, label)
            if y2 is None:
                return False
            pair = (a.step(x, label), y2)
            if pair not in seen:
                seen.add(pair)
                stack.append(pair)
    return True


def check_sa_valid(a: SuspensionAutomaton) -> ValidityReport:
    """Check the validity conditions over reachable states.

    V1 non-blocking, V2 anomaly-free (no output after quiescence until an
    input), V3 stable (a second ``delta`` changes nothing, up to traces) and
    V4 quiescence-reducible (behaviour after ``delta`` is behaviour before it).
    """
    violations: list[Violation] = []
    out = SaView(a).out
    for q in sorted(a.reachable):
        if not out(q):
            violations.append(Violation("V1", q, "no output and no quiescence"))
        q_d = a.step(q, DELTA)
        if q_d is None:
            continue
        # V2: states reached by delta+ may not offer outputs
        seen = {q_d}
        stack = [q_d]
        while stack:
            r = stack.pop()
            bad = sorted(x for x in a.succ[r] if x in a.outputs)
            if bad:
                violations.append(Violation("V2", q, f"output {bad[0]} after delta at {r}"))
                break
            nxt = a.step(r, DELTA)
            if nxt is not None and nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
        q_dd = a.step(q_d, DELTA)
        if q_dd is None:
            violations.append(Violation("V3", q, f"delta successor {q_d} is not quiescent"))
        elif not (_trace_included(a, q_d, q_dd) and _trace_included(a, q_dd, q_d)):
            violations.append(Violation("V3", q, f"second delta from {q_d} changes behaviour"))
        if not _trace_included(a, q_d, q):
            violations.append(Violation("V4", q, f"behaviour after delta at {q_d} not offered before"))
    return ValidityReport(not violations, violations)
