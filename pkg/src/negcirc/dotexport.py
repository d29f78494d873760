"""Graphviz DOT rendering; output is byte-stable for a given input."""

from __future__ import annotations

from .dynamics import TransitionGraph
from .interaction import SignedDigraph


def _state_label(space, r: int) -> str:
    return "(" + ",".join(str(v) for v in space.unrank(r)) + ")"


def export_dot(graph) -> str:
    """Render a transition graph or a signed interaction graph.

    Transition-graph vertices are labeled with their state tuple; signed
    arcs carry a "+" or "-" label and negative arcs are dashed.
    """
    if isinstance(graph, TransitionGraph):
        space = graph.space
        lines = ["digraph stg {"]
        for r in range(space.size):
            lines.append(f'  "{_state_label(space, r)}";')
        for r in range(space.size):
            for t in graph.successors(r):
                lines.append(
                    f'  "{_state_label(space, r)}" -> "{_state_label(space, t)}";'
                )
        lines.append("}")
        return "\n".join(lines) + "\n"
    if isinstance(graph, SignedDigraph):
        lines = ["digraph interaction {"]
        for v in range(graph.n):
            lines.append(f'  "{v + 1}";')
        for j, s, i in graph.arcs:
            if s > 0:
                lines.append(f'  "{j + 1}" -> "{i + 1}" [label="+"];')
            else:
                lines.append(f'  "{j + 1}" -> "{i + 1}" [label="-", style=dashed];')
        lines.append("}")
        return "\n".join(lines) + "\n"
    raise TypeError(f"cannot render {type(graph).__name__} as DOT")
