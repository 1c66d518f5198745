"""Input-output labelled transition systems and the textual model format.

A model document is line oriented::

    name vending
    inputs c
    outputs t r
    init s0
    trans s0 c s1
    trans s1 tau s2

``kind sa`` marks a suspension automaton, in which ``delta`` is a legal
label and ``tau`` is not.  ``states`` may list states explicitly; once it is
used, every transition endpoint must be declared.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple

TAU = "tau"
DELTA = "delta"
DELTA_E = "delta_e"
RESERVED = frozenset({TAU, DELTA, DELTA_E})

_TOKEN = re.compile(r"[A-Za-z0-9_]+")

#: Upper bound on the number of states any subset construction may create.
MAX_STATES = 10**6


class ModelError(ValueError):
    """Malformed model document or ill-formed model."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ResourceLimitError(RuntimeError):
    """A construction exceeded :data:`MAX_STATES`."""


def check_budget(count: int) -> None:
    if count > MAX_STATES:
        raise ResourceLimitError(
            f"construction exceeded {MAX_STATES} states; raise decompio.model.MAX_STATES"
        )


class ActionLabel(NamedTuple):
    name: str
    kind: str  # "input", "output", "internal" or "quiescence"


Transition = tuple[str, str, str]


@dataclass(frozen=True)
class Iolts:
    """An IOLTS ``<S, I, U, ->, s0>``.  Instances are immutable."""

    states: frozenset[str]
    inputs: frozenset[str]
    outputs: frozenset[str]
    transitions: frozenset[Transition]
    initial: str
    name: str = "m"

    def __post_init__(self) -> None:
        for attr in ("states", "inputs", "outputs", "transitions"):
            value = getattr(self, attr)
            if not isinstance(value, frozenset):
                object.__setattr__(self, attr, frozenset(value))
        self._validate()

    # -- validation -------------------------------------------------------

    def _allowed_labels(self) -> frozenset[str]:
        return self.inputs | self.outputs | {TAU}

    def _validate(self) -> None:
        overlap = self.inputs & self.outputs
        if overlap:
            raise ModelError(f"inputs and outputs overlap: {sorted(overlap)}")
        reserved = (self.inputs | self.outputs) & RESERVED
        if reserved:
            raise ModelError(f"reserved names declared as actions: {sorted(reserved)}")
        if self.initial not in self.states:
            raise ModelError(f"initial state {self.initial!r} is not a state")
        allowed = self._allowed_labels()
        for src, label, dst in self.transitions:
            if src not in self.states or dst not in self.states:
                raise ModelError(f"transition {src} {label} {dst} has an undeclared endpoint")
            if label not in allowed:
                raise ModelError(f"transition {src} {label} {dst} uses undeclared label {label!r}")

    # -- structure --------------------------------------------------------

    @property
    def is_sa(self) -> bool:
        return False

    @property
    def labels(self) -> frozenset[str]:
        return self.inputs | self.outputs

    def kind_of(self, label: str) -> ActionLabel:
        if label == TAU:
            return ActionLabel(label, "internal")
        if label == DELTA:
            return ActionLabel(label, "quiescence")
        if label in self.inputs:
            return ActionLabel(label, "input")
        if label in self.outputs:
            return ActionLabel(label, "output")
        raise ModelError(f"{label!r} is not in the alphabet of {self.name}")

    @cached_property
    def succ(self) -> Mapping[str, Mapping[str, frozenset[str]]]:
        table: dict[str, dict[str, set[str]]] = defaultdict(lambda: defaultdict(set))
        for src, label, dst in self.transitions:
            table[src][label].add(dst)
        return {
            s: {x: frozenset(ds) for x, ds in table[s].items()} for s in self.states
        }

    def post(self, state: str, label: str) -> frozenset[str]:
        return self.succ[state].get(label, frozenset())

    def transitions_from(self, state: str) -> list[tuple[str, str]]:
        return [(x, t) for x, ts in self.succ[state].items() for t in ts]

    def init(self, state: str) -> frozenset[str]:
        """Directly enabled labels, ``tau`` included."""
        return frozenset(self.succ[state])

    @cached_property
    def reachable(self) -> frozenset[str]:
        seen = {self.initial}
        stack = [self.initial]
        while stack:
            s = stack.pop()
            for targets in self.succ[s].values():
                for t in targets:
                    if t not in seen:
                        seen.add(t)
                        stack.append(t)
        return frozenset(seen)

    def restricted(self) -> "Iolts":
        """The reachable part of this model."""
        keep = self.reachable
        return self.replace(
            states=keep,
            transitions=frozenset(t for t in self.transitions if t[0] in keep),
        )

    def replace(self, **changes) -> "Iolts":
        fields = dict(
            states=self.states,
            inputs=self.inputs,
            outputs=self.outputs,
            transitions=self.transitions,
            initial=self.initial,
            name=self.name,
        )
        fields.update(changes)
        return type(self)(**fields)


@dataclass(frozen=True)
class SuspensionAutomaton(Iolts):
    """A deterministic, tau-free IOLTS whose outputs implicitly include ``delta``.

    ``origin`` optionally maps each state to the set of states it was built
    from (subset construction); it takes no part in equality.
    """

    origin: Mapping[str, frozenset] = field(default_factory=dict, compare=False, hash=False, repr=False)

    def _allowed_labels(self) -> frozenset[str]:
        return self.inputs | self.outputs | {DELTA}

    def _validate(self) -> None:
        super()._validate()
        seen: set[tuple[str, str]] = set()
        for src, label, _ in self.transitions:
            if (src, label) in seen:
                raise ModelError(f"suspension automaton is not deterministic at {src} on {label}")
            seen.add((src, label))

    @property
    def is_sa(self) -> bool:
        return True

    def step(self, state: str, label: str) -> str | None:
        targets = self.post(state, label)
        return next(iter(targets)) if targets else None

    def replace(self, **changes) -> "SuspensionAutomaton":
        changes.setdefault("origin", self.origin)
        return super().replace(**changes)


# -- input enabledness ---------------------------------------------------


class EnabledReport(NamedTuple):
    input_enabled: bool
    offending: dict[str, frozenset[str]]  # state -> missing inputs

    def __bool__(self) -> bool:
        return self.input_enabled


def check_input_enabled(m: Iolts, inputs: Iterable[str] | None = None) -> EnabledReport:
    """Is every reachable state weakly input-enabled?

    ``inputs`` restricts the check to a subset of the input alphabet.
    """
    from .semantics import tau_closure

    required = m.inputs if inputs is None else frozenset(inputs)
    offending: dict[str, frozenset[str]] = {}
    for s in sorted(m.reachable):
        enabled: set[str] = set()
        for u in tau_closure(m, {s}):
            enabled.update(m.succ[u])
        missing = required - enabled
        if missing:
            offending[s] = frozenset(missing)
    return EnabledReport(not offending, offending)


# -- text format ---------------------------------------------------------


def _tokens(words: list[str], lineno: int, what: str) -> list[str]:
    for w in words:
        if not _TOKEN.fullmatch(w):
            raise ModelError(f"bad {what} token {w!r}", lineno)
    return words


def _state_token(word: str, lineno: int) -> str:
    if "#" in word:
        raise ModelError(f"bad state token {word!r}", lineno)
    return word


def parse_iolts(text: str) -> Iolts:
    """Parse a model document into an :class:`Iolts` or :class:`SuspensionAutomaton`."""
    name = "m"
    kind = "iolts"
    inputs: list[str] = []
    outputs: list[str] = []
    declared: list[str] | None = None
    initial: str | None = None
    trans: list[tuple[str, str, str, int]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if head == "name":
            if len(rest) != 1:
                raise ModelError("name takes exactly one token", lineno)
            name = rest[0]
        elif head == "kind":
            if rest not in (["sa"], ["iolts"]):
                raise ModelError(f"unknown kind {' '.join(rest)!r}", lineno)
            kind = rest[0]
        elif head == "inputs":
            inputs.extend(_tokens(rest, lineno, "label"))
        elif head == "outputs":
            outputs.extend(_tokens(rest, lineno, "label"))
        elif head == "states":
            declared = (declared or []) + [_state_token(w, lineno) for w in rest]
        elif head == "init":
            if len(rest) != 1:
                raise ModelError("init takes exactly one state", lineno)
            if initial is not None:
                raise ModelError("duplicate init", lineno)
            initial = _state_token(rest[0], lineno)
        elif head == "trans":
            if len(rest) != 3:
                raise ModelError("trans takes <src> <label> <dst>", lineno)
            src, label, dst = rest
            trans.append((_state_token(src, lineno), label, _state_token(dst, lineno), lineno))
        else:
            raise ModelError(f"unknown directive {head!r}", lineno)

    if initial is None:
        raise ModelError("missing init")
    for label in inputs + outputs:
        if label in RESERVED:
            raise ModelError(f"reserved name {label!r} declared as an action")
    overlap = set(inputs) & set(outputs)
    if overlap:
        raise ModelError(f"inputs and outputs overlap: {sorted(overlap)}")

    alphabet = set(inputs) | set(outputs)
    alphabet.add(DELTA if kind == "sa" else TAU)
    states = set(declared) if declared is not None else {initial}
    if declared is not None and initial not in states:
        raise ModelError(f"init state {initial!r} is not declared")
    for src, label, dst, lineno in trans:
        if label not in alphabet:
            raise ModelError(f"undeclared label {label!r}", lineno)
        if declared is not None:
            for s in (src, dst):
                if s not in states:
                    raise ModelError(f"undeclared state {s!r}", lineno)
        else:
            states.update((src, dst))

    cls = SuspensionAutomaton if kind == "sa" else Iolts
    return cls(
        states=frozenset(states),
        inputs=frozenset(inputs),
        outputs=frozenset(outputs),
        transitions=frozenset((s, x, d) for s, x, d, _ in trans),
        initial=initial,
        name=name,
    )


def serialize_iolts(m: Iolts) -> str:
    """Canonically ordered model document; ``parse_iolts`` inverts it."""
    lines = [f"name {m.name}"]
    if m.is_sa:
        lines.append("kind sa")
    lines.append(" ".join(["inputs", *sorted(m.inputs)]))
    lines.append(" ".join(["outputs", *sorted(m.outputs)]))
    lines.append(f"init {m.initial}")
    lines.append(" ".join(["states", *sorted(m.states)]))
    for src, label, dst in sorted(m.transitions):
        lines.append(f"trans {src} {label} {dst}")
    return "\n".join(lines) + "\n"


def load(path) -> Iolts:
    with open(path, encoding="utf-8") as fh:
        return parse_iolts(fh.read())


# -- isomorphism ---------------------------------------------------------


def _refine(nodes, out_edges, in_edges, colors):
    while True:
        sigs = {
            v: (
                colors[v],
                tuple(sorted((x, colors[w]) for x, w in out_edges[v])),
                tuple(sorted((x, colors[w]) for x, w in in_edges[v])),
            )
            for v in nodes
        }
        rank = {sig: i for i, sig in enumerate(sorted(set(sigs.values())))}
        new = {v: rank[sigs[v]] for v in nodes}
        if len(set(new.values())) == len(set(colors.values())):
            return new
        colors = new


def canonical_form(m: Iolts, reachable_only: bool = True) -> tuple:
    """A hashable form equal for two models iff they are isomorphic.

    Colour refinement, then individualisation of the first ambiguous cell,
    keeping the lexicographically least edge list.
    """
    nodes = sorted(m.reachable if reachable_only else m.states)
    node_set = set(nodes)
    edges = [t for t in m.transitions if t[0] in node_set]
    out_edges: dict[str, list] = {v: [] for v in nodes}
    in_edges: dict[str, list] = {v: [] for v in nodes}
    for s, x, d in edges:
        out_edges[s].append((x, d))
        in_edges[d].append((x, s))
    colors = _refine(nodes, out_edges, in_edges, {v: int(v == m.initial) for v in nodes})

    best = None

    def search(colors):
        nonlocal best
        cells: dict[int, list[str]] = defaultdict(list)
        for v in nodes:
            cells[colors[v]].append(v)
        ambiguous = [c for c in sorted(cells) if len(cells[c]) > 1]
        if not ambiguous:
            form = (colors[m.initial], tuple(sorted((colors[s], x, colors[d]) for s, x, d in edges)))
            if best is None or form < best:
                best = form
            return
        fresh = len(nodes) + 1
        for v in cells[ambiguous[0]]:
            trial = dict(colors)
            trial[v] = fresh
            search(_refine(nodes, out_edges, in_edges, trial))

    search(colors)
    return (len(nodes), tuple(sorted(m.inputs)), tuple(sorted(m.outputs)), m.is_sa, best)


def isomorphic(a: Iolts, b: Iolts, reachable_only: bool = True) -> bool:
    return canonical_form(a, reachable_only) == canonical_form(b, reachable_only)


# -- interface alphabets -------------------------------------------------


@dataclass(frozen=True)
class InterfaceSpec:
    """Alphabets of a system spec, its platform, and the component in between.

    The hidden interface ``L_v = L_e - L_s`` splits by direction as seen from
    the component: ``component_inputs_v`` are platform outputs it receives,
    ``component_outputs_v`` are platform inputs it must produce.
    """

    spec_inputs: frozenset[str]
    spec_outputs: frozenset[str]
    env_inputs: frozenset[str]
    env_outputs: frozenset[str]

    def __post_init__(self) -> None:
        for attr in ("spec_inputs", "spec_outputs", "env_inputs", "env_outputs"):
            object.__setattr__(self, attr, frozenset(getattr(self, attr)))
        clash = self.quotient_inputs & self.quotient_outputs
        if clash:
            raise ModelError(f"quotient alphabet is not split cleanly: {sorted(clash)}")

    @classmethod
    def from_models(cls, spec: Iolts, env: Iolts) -> "InterfaceSpec":
        return cls(spec.inputs, spec.outputs, env.inputs, env.outputs)

    @property
    def spec_labels(self) -> frozenset[str]:
        return self.spec_inputs | self.spec_outputs

    @property
    def env_labels(self) -> frozenset[str]:
        return self.env_inputs | self.env_outputs

    @property
    def hidden(self) -> frozenset[str]:
        return self.env_labels - self.spec_labels

    @property
    def component_inputs_v(self) -> frozenset[str]:
        return self.env_outputs - self.spec_labels

    @property
    def component_outputs_v(self) -> frozenset[str]:
        return self.env_inputs - self.spec_labels

    @property
    def quotient_inputs(self) -> frozenset[str]:
        return (self.spec_inputs - self.env_inputs) | (self.env_outputs - self.spec_outputs)

    @property
    def quotient_outputs(self) -> frozenset[str]:
        """Proper outputs of the quotient; ``delta`` is implicit."""
        return (self.spec_outputs - self.env_outputs) | (self.env_inputs - self.spec_inputs)

    def check_shared(self, shared: Iterable[str]) -> None:
        """Raise unless ``shared`` is exactly the hidden interface."""
        shared = frozenset(shared)
        if shared != self.hidden:
            raise ModelError(
                f"declared hidden interface {sorted(shared)} differs from the alphabets' {sorted(self.hidden)}"
            )
