"""Signed interaction graphs derived from a network map.

Four derived graphs on the component set:

* ``global_ig``: arc (j, s, i) when some unit increase of component j
  changes f_i with sign s, anywhere in the space.
* ``unitary_ig``: the restriction of the global graph to influences that
  the unitary dynamics can express, via threshold conditions around x_i.
* ``local_ig``: finite differences taken only at a given state (forward
  and, where defined, backward).
* ``dynamic_local_ig``: influences visible in one asynchronous step,
  comparing change directions before and after updating one component.

A graph may carry a positive and a negative arc between the same ordered
pair of vertices.  Arc sets are canonically sorted for deterministic
iteration.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DomainError
from .model import NetworkMap, StateSpace


@dataclass(frozen=True)
class SignedDigraph:
    """Signed digraph on vertices 0..n-1 with arcs (source, sign, target)."""

    n: int
    arcs: tuple[tuple[int, int, int], ...]

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int, int]]) -> "SignedDigraph":
        canon = set()
        for j, s, i in arcs:
            if s not in (-1, 1):
                raise DomainError(f"arc sign must be -1 or +1, got {s}")
            if not (0 <= j < n and 0 <= i < n):
                raise DomainError(f"arc ({j}, {s}, {i}) outside vertices 0..{n - 1}")
            canon.add((j, s, i))
        return cls(n, tuple(sorted(canon)))

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "SignedDigraph":
        arcs = []
        for j in range(n):
            for i in range(n):
                base = (j * n + i) << 1
                if (mask >> base) & 1:
                    arcs.append((j, 1, i))
                if (mask >> (base + 1)) & 1:
                    arcs.append((j, -1, i))
        return cls(n, tuple(sorted(arcs)))

    def to_mask(self) -> int:
        mask = 0
        for j, s, i in self.arcs:
            mask |= 1 << arc_bit(self.n, j, s, i)
        return mask

    @property
    def arc_set(self) -> frozenset[tuple[int, int, int]]:
        return frozenset(self.arcs)

    def has_arc(self, j: int, s: int, i: int) -> bool:
        return (j, s, i) in self.arc_set

    def successors(self, j: int) -> list[tuple[int, int]]:
        """(sign, target) pairs leaving vertex j, in canonical order."""
        return [(s, i) for jj, s, i in self.arcs if jj == j]


def arc_bit(n: int, j: int, s: int, i: int) -> int:
    """Bit position of arc (j, s, i) in the 2*n*n-bit arc mask."""
    return ((j * n + i) << 1) | (1 if s < 0 else 0)


def graph_union(graphs: Sequence[SignedDigraph]) -> SignedDigraph:
    """Signed digraph whose arc set is the union of the inputs' arc sets."""
    if not graphs:
        raise DomainError("union of no graphs is undefined")
    n = graphs[0].n
    arcs = set()
    for g in graphs:
        if g.n != n:
            raise DomainError(f"vertex count mismatch: {g.n} != {n}")
        arcs.update(g.arcs)
    return SignedDigraph(n, tuple(sorted(arcs)))


def is_subgraph(a: SignedDigraph, b: SignedDigraph) -> bool:
    """True iff every arc of ``a`` is an arc of ``b``."""
    if a.n != b.n:
        raise DomainError(f"vertex count mismatch: {a.n} != {b.n}")
    return a.arc_set <= b.arc_set


def _increment_pairs(space: StateSpace, j: int):
    """Ranks r with digit j below its maximum, paired with r + e_j."""
    w = space.weights[j]
    s = space.sizes[j]
    for r in range(space.size):
        if (r // w) % s < s - 1:
            yield r, r + w


def global_ig_mask(net: NetworkMap) -> int:
    space = net.space
    n = space.n
    digits = space.digit_table()
    table = net.table
    mask = 0
    for j in range(n):
        for r, r2 in _increment_pairs(space, j):
            lo_img = digits[table[r]]
            hi_img = digits[table[r2]]
            for i in range(n):
                d = hi_img[i] - lo_img[i]
                if d > 0:
                    mask |= 1 << arc_bit(n, j, 1, i)
                elif d < 0:
                    mask |= 1 << arc_bit(n, j, -1, i)
    return mask


def global_ig(net: NetworkMap) -> SignedDigraph:
    """Arc (j, s, i) iff f_i(x + e_j) - f_i(x) has sign s for some x."""
    return SignedDigraph.from_mask(net.space.n, global_ig_mask(net))


def unitary_ig_mask(net: NetworkMap) -> int:
    space = net.space
    n = space.n
    digits = space.digit_table()
    table = net.table
    mask = 0
    for j in range(n):
        for r, r2 in _increment_pairs(space, j):
            x = digits[r]
            lo_img = digits[table[r]]
            hi_img = digits[table[r2]]
            for i in range(n):
                xi = x[i]
                zi = xi + 1 if i == j else xi
                lo = lo_img[i]
                hi = hi_img[i]
                if (lo <= xi < hi) or (lo < zi <= hi):
                    mask |= 1 << arc_bit(n, j, 1, i)
                if (lo > xi >= hi) or (lo >= zi > hi):
                    mask |= 1 << arc_bit(n, j, -1, i)
    return mask


def unitary_ig(net: NetworkMap) -> SignedDigraph:
    """Influences the unitary dynamics can express.

    For a pair x, z = x + e_j, there is a positive arc (j, +, i) when the
    change tendency of component i shifts upward across rest: either
    f_i(x) <= x_i < f_i(z) or f_i(x) < z_i <= f_i(z); negative arcs take
    the mirrored downward conditions.  Equivalently, in terms of change
    directions: upward needs sign(f_i(x) - x_i) <= 0 <= sign(f_i(z) - z_i)
    with at least one strict when i != j.  The result is a subgraph of
    the global graph and coincides with it on Boolean spaces.
    """
    return SignedDigraph.from_mask(net.space.n, unitary_ig_mask(net))


def local_ig_mask(net: NetworkMap, r: int) -> int:
    space = net.space
    n = space.n
    digits = space.digit_table()
    table = net.table
    x = digits[r]
    mask = 0
    for j in range(n):
        w = space.weights[j]
        top = space.sizes[j] - 1
        dj = x[j]
        # forward difference at x, and backward difference written as the
        # forward difference of the state one step below
        for base in ((r, dj < top), (r - w, dj > 0)):
            br, ok = base
            if not ok:
                continue
            lo_img = digits[table[br]]
            hi_img = digits[table[br + w]]
            for i in range(n):
                d = hi_img[i] - lo_img[i]
                if d > 0:
                    mask |= 1 << arc_bit(n, j, 1, i)
                elif d < 0:
                    mask |= 1 << arc_bit(n, j, -1, i)
    return mask


def local_ig(net: NetworkMap, state: Sequence[int]) -> SignedDigraph:
    """Finite-difference interaction graph evaluated at one state."""
    r = net.space.rank(state)
    return SignedDigraph.from_mask(net.space.n, local_ig_mask(net, r))


def dynamic_local_ig_mask(net: NetworkMap, r: int) -> int:
    space = net.space
    n = space.n
    signs = net.sign_table()
    digits = space.digit_table()
    weights = space.weights
    fx = signs[r]
    img = digits[net.table[r]]
    x = digits[r]
    mask = 0
    for j in range(n):
        if fx[j] == 0:
            continue  # stable j: the updated state is x itself, no change
        rj = r + (img[j] - x[j]) * weights[j]
        fy = signs[rj]
        for i in range(n):
            if fx[i] != fy[i]:
                s = fx[j] * fy[i]
                if s > 0:
                    mask |= 1 << arc_bit(n, j, 1, i)
                elif s < 0:
                    mask |= 1 << arc_bit(n, j, -1, i)
    return mask


def dynamic_local_ig(net: NetworkMap, state: Sequence[int]) -> SignedDigraph:
    """Influences visible in one asynchronous step from ``state``.

    Arc (j, s, i) when updating component j flips the change direction of
    component i, with s the product of the two directions involved.  When
    that product is zero no arc is emitted.
    """
    r = net.space.rank(state)
    return SignedDigraph.from_mask(net.space.n, dynamic_local_ig_mask(net, r))


def depends_on(net: NetworkMap, i: int, j: int) -> bool:
    """True iff f_i is not constant in x_j (direct scan, test oracle ally)."""
    space = net.space
    digits = space.digit_table()
    for r, r2 in _increment_pairs(space, j):
        if digits[net.table[r]][i] != digits[net.table[r2]][i]:
            return True
    return False
