"""Parallel composition, hiding and shared-output boundedness."""

from __future__ import annotations

from collections import deque
from typing import Iterable, NamedTuple

from .model import TAU, Iolts, ModelError, check_budget

SEP = "‖"


def pair_name(left: str, right: str) -> str:
    return f"{left}{SEP}{right}"


def parallel(a: Iolts, b: Iolts, name: str | None = None) -> Iolts:
    """``a || b``: synchronise on shared labels, interleave the rest."""
    if a.inputs & b.inputs:
        raise ModelError(f"composed models share inputs {sorted(a.inputs & b.inputs)}")
    if a.outputs & b.outputs:
        raise ModelError(f"composed models share outputs {sorted(a.outputs & b.outputs)}")
    la, lb = a.labels, b.labels
    start = (a.initial, b.initial)
    seen = {start}
    queue = deque([start])
    transitions = set()
    while queue:
        sa, sb = queue.popleft()
        moves = []
        for x, targets in a.succ[sa].items():
            if x == TAU or x not in lb:
                moves.extend((x, (t, sb)) for t in targets)
            else:
                for tb in b.post(sb, x):
                    moves.extend((x, (t, tb)) for t in targets)
        for x, targets in b.succ[sb].items():
            if x == TAU or x not in la:
                moves.extend((x, (sa, t)) for t in targets)
        for x, dst in moves:
            transitions.add((pair_name(sa, sb), x, pair_name(*dst)))
            if dst not in seen:
                seen.add(dst)
                check_budget(len(seen))
                queue.append(dst)
    outputs = a.outputs | b.outputs
    return Iolts(
        states=frozenset(pair_name(*p) for p in seen),
        inputs=(a.inputs | b.inputs) - outputs,
        outputs=outputs,
        transitions=frozenset(transitions),
        initial=pair_name(*start),
        name=name or f"{a.name}_{b.name}",
    )


def hide(m: Iolts, hidden: Iterable[str]) -> Iolts:
    """Relabel the outputs in ``hidden`` to ``tau``."""
    hidden = frozenset(hidden)
    if not hidden <= m.outputs:
        raise ModelError(f"can only hide outputs; {sorted(hidden - m.outputs)} are not outputs of {m.name}")
    if not hidden:
        return m
    return m.replace(
        outputs=m.outputs - hidden,
        transitions=frozenset((s, TAU if x in hidden else x, d) for s, x, d in m.transitions),
    )


class BoundednessReport(NamedTuple):
    bounded: bool
    longest_run: int | None  # None when unbounded
    cycle: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.bounded


def check_shared_output_bounded(m: Iolts, shared: Iterable[str]) -> BoundednessReport:
    """Can ``m`` emit an unbounded uninterrupted run of shared outputs?

    ``tau`` steps do not interrupt a run; any other label does.
    """
    shared = frozenset(shared)
    if not shared <= m.outputs:
        raise ModelError(f"{sorted(shared - m.outputs)} are not outputs of {m.name}")
    moves = shared | {TAU}
    nodes = sorted(m.reachable)

    def succ(s):
        return [(x, t) for x, ts in m.succ[s].items() if x in moves for t in ts]

    # Tarjan's SCCs over the shared/tau subgraph
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    comp: dict[str, int] = {}
    stack: list[str] = []
    on_stack: set[str] = set()
    components: list[list[str]] = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for _, w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                members = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp[w] = len(components)
                    members.append(w)
                    if w == v:
                        break
                components.append(members)

    for members in components:
        inside = set(members)
        for s in members:
            for x, t in succ(s):
                if x in shared and t in inside:
                    return BoundednessReport(False, None, (s,) + _path(succ, inside, t, s))

    # components come out in reverse topological order
    longest = [0] * len(components)
    for ci, members in enumerate(components):
        best = 0
        for s in members:
            for x, t in succ(s):
                cj = comp[t]
                if cj != ci:
                    best = max(best, longest[cj] + (x in shared))
        longest[ci] = best
    check_budget(len(nodes))
    return BoundednessReport(True, max(longest, default=0), ())


def _path(succ, inside: set[str], src: str, dst: str) -> tuple[str, ...]:
    """States of a shortest path ``src ->* dst`` within ``inside``."""
    parent: dict[str, str | None] = {src: None}
    queue = deque([src])
    while queue and dst not in parent:
        u = queue.popleft()
        for _, w in sorted(succ(u)):
            if w in inside and w not in parent:
                parent[w] = u
                queue.append(w)
    path = [dst]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return tuple(reversed(path))
