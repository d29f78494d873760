"""State transition graphs and reachability queries.

Three flavors over the same state set:

* ``async``: arcs x -> F_i(x) for every unstable component i, so the
  out-degree of x is the number of unstable components and fixed points
  are exactly the sinks.  No self-arcs; paths of length zero exist from
  every vertex to itself by convention.
* ``unitary``: the asynchronous graph of the unitary map, whose updates
  move one coordinate by exactly one unit toward its target.
* ``sync``: the deterministic graph with arcs x -> F(x) for x != F(x).
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Optional

from .errors import DomainError
from .model import NetworkMap, StateSpace

ASYNC = "async"
UNITARY = "unitary"
SYNC = "sync"
FLAVORS = (ASYNC, UNITARY, SYNC)


class TransitionGraph:
    """Directed graph on state ranks, stored forward-star.

    Successor lists follow increasing component order (async/unitary) so
    iteration order, and everything derived from it, is deterministic.
    Immutable after construction.
    """

    __slots__ = ("space", "flavor", "starts", "targets")

    def __init__(self, space: StateSpace, flavor: str, starts: list[int], targets: list[int]):
        self.space = space
        self.flavor = flavor
        self.starts = starts
        self.targets = targets

    @property
    def vertex_count(self) -> int:
        return self.space.size

    @property
    def arc_count(self) -> int:
        return len(self.targets)

    def successors(self, r: int) -> list[int]:
        return self.targets[self.starts[r] : self.starts[r + 1]]

    def out_degree(self, r: int) -> int:
        return self.starts[r + 1] - self.starts[r]

    def arcs(self):
        """All arcs (source, target) in source-rank order."""
        for r in range(self.space.size):
            for t in self.successors(r):
                yield (r, t)

    def __eq__(self, other):
        return (
            isinstance(other, TransitionGraph)
            and self.space == other.space
            and self.starts == other.starts
            and self.targets == other.targets
        )

    def __hash__(self):
        return hash((self.space, tuple(self.starts), tuple(self.targets)))


def _async_adjacency(net: NetworkMap) -> tuple[list[int], list[int]]:
    space = net.space
    digits = space.digit_table()
    weights = space.weights
    starts = [0] * (space.size + 1)
    targets = []
    for r, img in enumerate(net.table):
        if img != r:
            dr = digits[r]
            di = digits[img]
            for c in range(space.n):
                d = di[c] - dr[c]
                if d:
                    targets.append(r + d * weights[c])
        starts[r + 1] = len(targets)
    return starts, targets


def build_stg(net: NetworkMap, flavor: str = ASYNC) -> TransitionGraph:
    """Build the state transition graph of the requested flavor."""
    if flavor == ASYNC:
        starts, targets = _async_adjacency(net)
    elif flavor == UNITARY:
        starts, targets = _async_adjacency(net.unitary_map())
    elif flavor == SYNC:
        starts = [0] * (net.space.size + 1)
        targets = []
        for r, img in enumerate(net.table):
            if img != r:
                targets.append(img)
            starts[r + 1] = len(targets)
    else:
        raise DomainError(f"unknown flavor {flavor!r}; expected one of {FLAVORS}")
    return TransitionGraph(net.space, flavor, starts, targets)


def is_trap_domain(graph: TransitionGraph, domain: Iterable[int]) -> bool:
    """True iff no arc leaves ``domain`` (a non-empty set of state ranks)."""
    dom = set(domain)
    if not dom:
        raise DomainError("trap domains are non-empty by definition")
    for r in dom:
        if not 0 <= r < graph.vertex_count:
            raise DomainError(f"rank {r} out of range")
    return all(t in dom for r in dom for t in graph.successors(r))


def path_exists(graph: TransitionGraph, source: int, target: int) -> bool:
    """True iff a (possibly length-zero) path runs from source to target."""
    if source == target:
        return True
    seen = bytearray(graph.vertex_count)
    seen[source] = 1
    queue = deque((source,))
    while queue:
        r = queue.popleft()
        for t in graph.successors(r):
            if t == target:
                return True
            if not seen[t]:
                seen[t] = 1
                queue.append(t)
    return False


def shortest_path(graph: TransitionGraph, source: int, target: int) -> Optional[list[int]]:
    """A minimum-length path of ranks from source to target, or None.

    Minimum length makes the path elementary.  Among equally short paths
    the one stepping through the smallest successor rank at each hop is
    returned, so results are reproducible.
    """
    if source == target:
        return [source]
    size = graph.vertex_count
    # distance-to-target via reverse breadth-first search
    preds: list[list[int]] = [[] for _ in range(size)]
    for r in range(size):
        for t in graph.successors(r):
            preds[t].append(r)
    dist = [-1] * size
    dist[target] = 0
    queue = deque((target,))
    while queue:
        r = queue.popleft()
        for p in preds[r]:
            if dist[p] < 0:
                dist[p] = dist[r] + 1
                queue.append(p)
    if dist[source] < 0:
        return None
    path = [source]
    cur = source
    while cur != target:
        nxt = min(t for t in graph.successors(cur) if dist[t] == dist[cur] - 1)
        path.append(nxt)
        cur = nxt
    return path
