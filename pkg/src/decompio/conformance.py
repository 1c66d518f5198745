"""ioco and the behaviour-inclusion relation between a platform and a specification."""

from __future__ import annotations

from collections import deque
from typing import Iterable, NamedTuple, Sequence

from .composition import hide
from .model import DELTA, DELTA_E, InterfaceSpec, Iolts, ModelError, check_budget, check_input_enabled
from .semantics import Determinizer, SaView, check_divergence, out_set


class ConformanceVerdict(NamedTuple):
    holds: bool
    counterexample: tuple[tuple[str, ...], str] | None = None

    def __bool__(self) -> bool:
        return self.holds


def _require_convergent(*models: Iolts) -> None:
    for m in models:
        report = check_divergence(m)
        if report.divergent:
            raise ModelError(f"{m.name} is divergent: tau cycle through {' '.join(report.cycle)}")


def _view(m: Iolts):
    return SaView(m) if m.is_sa else Determinizer(m)


def ioco_check(impl: Iolts, spec: Iolts) -> ConformanceVerdict:
    """Decide ``impl ioco spec`` exactly; the counterexample is shortlex-minimal."""
    if impl.inputs != spec.inputs or impl.outputs != spec.outputs:
        raise ModelError(f"{impl.name} and {spec.name} have different alphabets")
    enabled = check_input_enabled(impl)
    if not enabled:
        raise ModelError(f"{impl.name} is not input-enabled at {', '.join(enabled.offending)}")
    _require_convergent(impl, spec)
    iv, sv = _view(impl), _view(spec)
    labels = sorted(spec.inputs | spec.outputs | {DELTA})
    start = (iv.initial, sv.initial)
    parent: dict = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        i, s = node
        extra = iv.out(i) - sv.out(s)
        if extra:
            return ConformanceVerdict(False, (_word(parent, node), min(extra)))
        for x in labels:
            s2 = sv.step(s, x)
            if s2 is None:
                continue
            i2 = iv.step(i, x)
            if i2 is None:
                continue
            nxt = (i2, s2)
            if nxt not in parent:
                parent[nxt] = (node, x)
                check_budget(len(parent))
                queue.append(nxt)
    return ConformanceVerdict(True)


def _word(parent: dict, node) -> tuple[str, ...]:
    word = []
    while parent[node] is not None:
        node, x = parent[node]
        word.append(x)
    return tuple(reversed(word))


# -- relative quiescence and projection --------------------------------------


def relative_quiescent(m: Iolts, state: str, alphabet: Iterable[str]) -> bool:
    """``state`` can produce no output of ``alphabet``, even after internal steps."""
    return not (out_set(m, {state}) & frozenset(alphabet))


def project(word: Sequence[str], alphabet: Iterable[str]) -> tuple[str, ...]:
    """Keep labels of ``alphabet``; both quiescence symbols become ``delta``."""
    alphabet = frozenset(alphabet)
    return tuple(DELTA if x in (DELTA, DELTA_E) else x for x in word if x in alphabet or x in (DELTA, DELTA_E))


class EnrichedSpec:
    """Subset construction of a specification with relative-quiescence steps.

    ``delta_e`` keeps the members that produce no output of ``alphabet``.
    """

    def __init__(self, m: Iolts, alphabet: Iterable[str]):
        self.det = Determinizer(m)
        self.model = m
        watched = frozenset(alphabet) & m.outputs
        self._calm = {s: not (out_set(m, {s}) & watched) for s in m.states}
        self.initial = self.det.initial

    def step(self, q: frozenset, x: str) -> frozenset | None:
        if x == DELTA_E:
            return frozenset(s for s in q if self._calm[s]) or None
        return self.det.step(q, x)

    def out(self, q: frozenset) -> frozenset[str]:
        out = self.det.out(q)
        if any(self._calm[s] for s in q):
            out |= {DELTA_E}
        return out


def hidden_platform(env: Iolts, iface: InterfaceSpec) -> Determinizer:
    """The platform as seen from outside: hidden outputs become internal steps
    and hidden inputs, which only the component can supply, are silent."""
    hidden_env = hide(env, env.outputs & iface.hidden)
    _require_convergent(hidden_env)
    return Determinizer(hidden_env, silent=env.inputs & iface.hidden)


def inclusion_check(env: Iolts, spec: Iolts, iface: InterfaceSpec | None = None) -> ConformanceVerdict:
    """Is the platform's visible behaviour included in the specification?

    For every enriched suspension word ``σ`` of ``spec`` the hidden platform,
    run along ``σ`` projected on its alphabet, may only produce outputs that
    ``spec`` allows after ``σ``.  A quiescent platform needs some relatively
    quiescent member of ``spec after σ``.
    """
    iface = iface or InterfaceSpec.from_models(spec, env)
    enabled = check_input_enabled(env)
    if not enabled:
        raise ModelError(f"{env.name} is not input-enabled at {', '.join(enabled.offending)}")
    _require_convergent(spec)
    ev = hidden_platform(env, iface)
    sv = EnrichedSpec(spec, iface.env_labels)
    env_alpha = iface.env_labels
    labels = sorted(spec.inputs | spec.outputs | {DELTA, DELTA_E})
    start = (sv.initial, ev.initial)
    parent: dict = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        s, e = node
        spec_out = sv.out(s)
        allowed = (spec_out - {DELTA_E}) | ({DELTA} if DELTA_E in spec_out else set())
        extra = ev.out(e) - allowed
        if extra:
            return ConformanceVerdict(False, (_word(parent, node), min(extra)))
        for x in labels:
            s2 = sv.step(s, x)
            if s2 is None:
                continue
            if x in (DELTA, DELTA_E):
                e2 = ev.step(e, DELTA)
            elif x in env_alpha:
                e2 = ev.step(e, x)
            else:
                e2 = e
            if e2 is None:
                continue
            nxt = (s2, e2)
            if nxt not in parent:
                parent[nxt] = (node, x)
                check_budget(len(parent))
                queue.append(nxt)
    return ConformanceVerdict(True)
