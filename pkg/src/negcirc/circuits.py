"""Circuits of signed digraphs: detection and enumeration.

Negative-circuit existence is decided exactly on a parity lift: double
every vertex into (v, even) / (v, odd), route each arc to the parity it
produces, and ask whether some vertex sees both of its copies in one
strongly connected component.  A closed walk of odd negative-arc count
decomposes into circuits of which one must be negative, so the answer is
exact for existence.  The same construction is wrong for positive
circuits, which are therefore decided only through elementary
enumeration.

Enumeration visits elementary circuits with a Johnson-style search over
vertex cycles and expands the sign choices of parallel arcs, so a pair of
opposite-sign arcs yields distinct circuits.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator

from .attractors import tarjan_scc
from .errors import DomainError
from .interaction import SignedDigraph

ENUMERATION_VERTEX_LIMIT = 24


@dataclass(frozen=True)
class SignedCircuit:
    """A circuit as a chained arc sequence; sign is the product of arc signs."""

    arcs: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if not self.arcs:
            raise DomainError("a circuit has at least one arc")
        for (_, _, i), (j2, _, _) in zip(self.arcs, self.arcs[1:]):
            if i != j2:
                raise DomainError("consecutive arcs do not chain")
        if self.arcs[-1][2] != self.arcs[0][0]:
            raise DomainError("arc sequence does not close")

    @property
    def sign(self) -> int:
        s = 1
        for _, a, _ in self.arcs:
            s *= a
        return s

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(j for j, _, _ in self.arcs)

    @property
    def elementary(self) -> bool:
        verts = self.vertices
        return len(set(verts)) == len(verts)

    def __len__(self):
        return len(self.arcs)


def _lift_successors(graph: SignedDigraph):
    adj: list[list[int]] = [[] for _ in range(2 * graph.n)]
    for j, s, i in graph.arcs:
        flip = 1 if s < 0 else 0
        adj[2 * j].append(2 * i + flip)
        adj[2 * j + 1].append(2 * i + (flip ^ 1))
    return adj


def has_negative_circuit(graph: SignedDigraph) -> bool:
    """True iff the graph contains a circuit of negative sign."""
    adj = _lift_successors(graph)
    comp_of = [0] * (2 * graph.n)
    for k, comp in enumerate(tarjan_scc(2 * graph.n, adj.__getitem__)):
        for v in comp:
            comp_of[v] = k
    return any(comp_of[2 * v] == comp_of[2 * v + 1] for v in range(graph.n))


def has_circuit(graph: SignedDigraph) -> bool:
    """True iff the graph contains any circuit, signs ignored."""
    adj: list[list[int]] = [[] for _ in range(graph.n)]
    loop = False
    for j, _, i in graph.arcs:
        if i == j:
            loop = True
        else:
            adj[j].append(i)
    if loop:
        return True
    return any(len(c) >= 2 for c in tarjan_scc(graph.n, adj.__getitem__))


def _vertex_cycles(graph: SignedDigraph) -> Iterator[tuple[int, ...]]:
    """Elementary vertex cycles, smallest vertex first, deterministic order."""
    n = graph.n
    succ: list[list[int]] = [[] for _ in range(n)]
    for j, i in sorted({(j, i) for j, _, i in graph.arcs}):
        succ[j].append(i)
    for start in range(n):
        if start in succ[start]:
            yield (start,)
        # restrict to the SCC of `start` within vertices >= start
        comp = None
        allowed = [v for v in range(n) if v >= start]
        sub = {v: [w for w in succ[v] if w >= start and w != v] for v in allowed}
        for c in tarjan_scc(n, lambda v: sub.get(v, [])):
            if start in c:
                comp = set(c)
                break
        if comp is None or len(comp) < 2:
            continue
        path = [start]
        blocked = {start}
        barred: dict[int, set[int]] = {v: set() for v in comp}
        stack = [iter(sorted(w for w in sub[start] if w in comp))]

        def unblock(v):
            todo = [v]
            while todo:
                u = todo.pop()
                if u in blocked:
                    blocked.discard(u)
                    todo.extend(barred[u])
                    barred[u].clear()

        closed = [False]
        while stack:
            advanced = False
            for w in stack[-1]:
                if w == start:
                    yield tuple(path)
                    closed[-1] = True
                elif w not in blocked:
                    path.append(w)
                    blocked.add(w)
                    closed.append(False)
                    stack.append(iter(sorted(u for u in sub[w] if u in comp)))
                    advanced = True
                    break
            if advanced:
                continue
            stack.pop()
            v = path.pop()
            if closed.pop():
                if closed:
                    closed[-1] = True
                unblock(v)
            else:
                for w in sub[v]:
                    if w in comp:
                        barred[w].add(v)


def iter_elementary_circuits(graph: SignedDigraph) -> Iterator[SignedCircuit]:
    """Lazily yield every elementary circuit with every sign assignment.

    Cycles appear rotated to start at their smallest vertex; for each
    vertex cycle, sign choices of parallel arcs are expanded with the
    positive variant first.
    """
    if graph.n > ENUMERATION_VERTEX_LIMIT:
        raise DomainError(
            f"enumeration limited to {ENUMERATION_VERTEX_LIMIT} vertices, got {graph.n}"
        )
    arc_set = graph.arc_set
    for cycle in _vertex_cycles(graph):
        k = len(cycle)
        options = []
        for q in range(k):
            u, w = cycle[q], cycle[(q + 1) % k]
            options.append([s for s in (1, -1) if (u, s, w) in arc_set])
        for signs in product(*options):
            arcs = tuple(
                (cycle[q], signs[q], cycle[(q + 1) % k]) for q in range(k)
            )
            yield SignedCircuit(arcs)


def elementary_circuits(graph: SignedDigraph) -> list[SignedCircuit]:
    """All elementary circuits with signs, in deterministic order."""
    return list(iter_elementary_circuits(graph))


def has_positive_circuit(graph: SignedDigraph) -> bool:
    """True iff some circuit has positive sign (decided by enumeration).

    A positive elementary circuit exists whenever any positive circuit
    does, so searching elementary ones is enough; the parity lift cannot
    be used here.
    """
    return any(c.sign > 0 for c in iter_elementary_circuits(graph))


def first_negative_circuit(graph: SignedDigraph):
    """An elementary negative circuit, or None; used as report evidence."""
    for c in iter_elementary_circuits(graph):
        if c.sign < 0:
            return c
    return None
