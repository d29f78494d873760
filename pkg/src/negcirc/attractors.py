"""Attractors of a transition graph via strongly connected components.

An attractor is an inclusion-minimal trap domain.  These coincide with the
terminal components of the condensation: a terminal SCC is a trap domain,
and it is minimal because any trap domain D intersecting an SCC C must
contain all of C (every state of C is reachable from D inside C) together
with everything reachable from C, so a trap domain strictly inside a
terminal SCC is impossible; conversely a minimal trap domain D contains a
terminal SCC of the subgraph it induces, which is terminal in the whole
graph because no arc leaves D, and minimality forces equality.  The
exponential subset enumeration survives only as a test oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ContractError
from .dynamics import TransitionGraph
from .model import NetworkMap


def strongly_connected_components(graph: TransitionGraph) -> list[list[int]]:
    """Partition the vertices into maximal strongly connected sets.

    Iterative Tarjan, safe for state spaces far beyond the recursion
    limit.  Components are numbered by their smallest contained rank, and
    each component lists its ranks in increasing order.
    """
    return [sorted(c) for c in tarjan_scc(graph.vertex_count, graph.successors)]


def tarjan_scc(size, successors):
    """Strongly connected components of an arbitrary successor function.

    Iterative, ordered by smallest contained vertex; shared by the
    transition-graph and signed-digraph layers.
    """
    index = [-1] * size
    low = [0] * size
    on_stack = bytearray(size)
    stack: list[int] = []
    components: list[list[int]] = []
    counter = 0
    for root in range(size):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work.pop()
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = 1
            recurse = False
            succ = successors(v)
            for k in range(pi, len(succ)):
                w = succ[k]
                if index[w] == -1:
                    work.append((v, k + 1))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    if index[w] < low[v]:
                        low[v] = index[w]
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = 0
                    comp.append(w)
                    if w == v:
                        break
                components.append(comp)
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
    components.sort(key=min)
    return components


@dataclass(frozen=True)
class Attractor:
    """A minimal trap domain; ``cyclic`` iff it has at least two states."""

    states: frozenset[int]
    cyclic: bool

    def smallest_rank(self) -> int:
        return min(self.states)


@dataclass(frozen=True)
class AttractorSet:
    attractors: tuple[Attractor, ...]

    def __iter__(self):
        return iter(self.attractors)

    def __len__(self):
        return len(self.attractors)

    def __getitem__(self, k):
        return self.attractors[k]

    @property
    def cyclic(self) -> tuple[Attractor, ...]:
        return tuple(a for a in self.attractors if a.cyclic)

    @property
    def has_cyclic(self) -> bool:
        return any(a.cyclic for a in self.attractors)


def attractors(graph: TransitionGraph) -> AttractorSet:
    """All attractors, ordered by smallest member rank.

    Computed as the terminal SCCs of the graph; each one is re-checked to
    be a trap domain before being returned.
    """
    comps = strongly_connected_components(graph)
    comp_of = [0] * graph.vertex_count
    for k, comp in enumerate(comps):
        for r in comp:
            comp_of[r] = k
    found = []
    for k, comp in enumerate(comps):
        terminal = True
        for r in comp:
            for t in graph.successors(r):
                if comp_of[t] != k:
                    terminal = False
                    break
            if not terminal:
                break
        if not terminal:
            continue
        members = frozenset(comp)
        for r in comp:  # trap-domain sanity: terminal means no arc leaves
            for t in graph.successors(r):
                if t not in members:
                    raise ContractError("terminal SCC with an escaping arc")
        found.append(Attractor(members, len(members) >= 2))
    found.sort(key=lambda a: a.smallest_rank())
    return AttractorSet(tuple(found))


def fixed_points(net: NetworkMap) -> list[tuple[int, ...]]:
    """All states with F(x) = x, in rank order."""
    space = net.space
    return [space.unrank(r) for r, img in enumerate(net.table) if img == r]
