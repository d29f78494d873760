"""Shared generators and brute-force oracles for the test suite."""

from __future__ import annotations

import random

from negcirc import NetworkMap, StateSpace, TransitionGraph

SMALL_SPACES = [
    StateSpace([(0, 1)]),
    StateSpace([(0, 2)]),
    StateSpace([(0, 1), (0, 1)]),
    StateSpace([(0, 2), (0, 1)]),
    StateSpace([(0, 2), (0, 2)]),
    StateSpace([(-1, 1), (2, 3)]),
    StateSpace([(0, 1), (0, 1), (0, 1)]),
    StateSpace([(0, 3), (0, 2)]),
]


def random_network(space: StateSpace, rng: random.Random) -> NetworkMap:
    return NetworkMap(
        space, [rng.randrange(space.size) for _ in range(space.size)]
    )


def brute_force_attractors(graph: TransitionGraph) -> set[frozenset[int]]:
    """Inclusion-minimal trap domains by exhaustive subset enumeration.

    Works on vertex-set bitmasks; every trap domain contains a minimal
    one, so scanning subsets in increasing size lets the minimal list
    prune everything above it.
    """
    size = graph.vertex_count
    succ_mask = [0] * size
    for r in range(size):
        for t in graph.successors(r):
            succ_mask[r] |= 1 << t
    subsets = sorted(range(1, 1 << size), key=lambda m: bin(m).count("1"))
    minimal: list[int] = []
    result: set[frozenset[int]] = set()
    for mask in subsets:
        if any(m & mask == m for m in minimal):
            continue  # a smaller trap domain sits inside
        trap = True
        probe = mask
        while probe:
            low = probe & -probe
            r = low.bit_length() - 1
            if succ_mask[r] & ~mask:
                trap = False
                break
            probe ^= low
        if trap:
            minimal.append(mask)
            result.add(
                frozenset(r for r in range(size) if (mask >> r) & 1)
            )
    return result


def depends_on_oracle(net: NetworkMap, i: int, j: int) -> bool:
    """True iff f_i is non-constant in x_j: vary x_j over its full range."""
    space = net.space
    lo, hi = space.intervals[j]
    for x in space.states():
        seen = set()
        for v in range(lo, hi + 1):
            y = list(x)
            y[j] = v
            seen.add(net.image(y)[i])
        if len(seen) > 1:
            return True
    return False
