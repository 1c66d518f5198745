"""Graphviz export."""

from __future__ import annotations

from .model import DELTA, TAU, Iolts


def _quote(s: str) -> str:
    return '"{}"'.format(s.replace("\\", "\\\\").replace('"', r"\""))


def edge_label(m: Iolts, x: str) -> str:
    if x == DELTA:
        return "δ"
    if x == TAU:
        return "τ"
    return ("?" if x in m.inputs else "!") + x


def to_dot(m: Iolts) -> str:
    """DOT text for ``m``; states and edges are emitted in sorted order."""
    lines = [f"digraph {_quote(m.name)} {{", "  rankdir=LR;", '  __start [shape=point, label=""];']
    for s in sorted(m.states):
        shape = "doublecircle" if s == m.initial else "circle"
        lines.append(f"  {_quote(s)} [shape={shape}];")
    lines.append(f"  __start -> {_quote(m.initial)};")
    for src, x, dst in sorted(m.transitions):
        lines.append(f"  {_quote(src)} -> {_quote(dst)} [label={_quote(edge_label(m, x))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
