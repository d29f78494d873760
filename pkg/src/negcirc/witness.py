"""Constructive extraction of a negative circuit from a cyclic attractor.

The extraction mirrors the inductive argument behind the oscillation
results.  Given a cyclic attractor A of the asynchronous graph:

* If some state of A has exactly one unstable component i, follow one
  update of i and walk back to the start along a shortest elementary
  path inside A.  The change direction of i must flip somewhere along
  the walk; contracting the walk step by step yields a signed path of
  step-local influence arcs from i back to i whose sign is the product
  of the opposite directions, hence -1.
* Otherwise pin one unstable component of one state of A to its current
  value.  The modified map keeps A closed, owns a strictly smaller
  cyclic attractor inside A, and its step-local influence arcs are a
  subset of the original map's, so recursing preserves every recorded
  arc.

All nondeterministic choices are fixed (smallest state rank, smallest
component index, shortest path with smallest-rank tie-breaks) so
witnesses are reproducible.  Verification recomputes every recorded arc
from scratch with the public step-local builder.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .attractors import tarjan_scc
from .circuits import SignedCircuit
from .dynamics import ASYNC, build_stg, is_trap_domain, shortest_path
from .errors import ContractError, DomainError
from .interaction import dynamic_local_ig
from .model import NetworkMap


@dataclass(frozen=True)
class WitnessTrace:
    """A negative circuit together with everything needed to re-check it.

    ``support`` pairs each arc of ``circuit`` with the rank of a state
    whose step-local influence graph contains the arc; every such state
    lies inside the certified attractor.  ``frozen`` lists the components
    pinned on the way down, innermost last; the arcs belong to the
    step-local graphs of the fully pinned map and therefore also to those
    of the original map.
    """

    circuit: SignedCircuit
    support: tuple[int, ...]
    frozen: tuple[int, ...]
    attractor: frozenset[int]

    def __post_init__(self):
        if len(self.support) != len(self.circuit.arcs):
            raise ContractError("support states do not match circuit arcs")


def signed_influence_path(
    net: NetworkMap, path: Sequence[int], target: int
) -> tuple[int, list[tuple[tuple[int, int, int], int]]]:
    """Contract an asynchronous walk into a signed influence path.

    ``path`` is an elementary path of state ranks in the asynchronous
    graph, of length >= 1; ``target`` is a component unstable at the last
    state whose change direction differs from its direction at every
    earlier state.  Returns a component j unstable at the first state and
    a chained list of (arc, supporting state rank) pairs leading from j to
    ``target``, each arc contained in the step-local influence graph of
    its supporting state.  The total sign equals the product of the change
    directions of j at the start and of ``target`` at the end.
    """
    if len(path) < 2:
        raise DomainError("need a path of length at least one")
    signs = net.sign_table()
    digits = net.space.digit_table()
    end = path[-1]
    if signs[end][target] == 0:
        raise DomainError("target component is stable at the end of the path")
    for r in path[:-1]:
        if signs[r][target] == signs[end][target]:
            raise DomainError("target direction repeats inside the path")

    def step_component(a: int, b: int) -> int:
        da, db = digits[a], digits[b]
        changed = [c for c in range(net.space.n) if da[c] != db[c]]
        if len(changed) != 1:
            raise DomainError("consecutive states differ in more than one component")
        c = changed[0]
        if db[c] != digits[net.table[a]][c]:
            raise DomainError("step is not an asynchronous update of the map")
        return c

    collected: list[tuple[tuple[int, int, int], int]] = []
    hi = len(path) - 1  # work on the prefix path[0..hi], shrinking hi
    comp = target
    while True:
        prev = path[hi - 1]
        k = step_component(prev, path[hi])
        if signs[prev][comp] == signs[path[hi]][comp]:
            raise ContractError("step did not flip the tracked component")
        s = signs[prev][k] * signs[path[hi]][comp]
        if s == 0:
            raise ContractError("influence sign vanished on a flipping step")
        collected.append(((k, s, comp), prev))
        # earliest state where k already moves the way it does at `prev`
        p = next(
            q for q in range(hi) if signs[path[q]][k] == signs[prev][k]
        )
        if p == 0:
            collected.reverse()
            first = collected[0][0][0]
            total = 1
            for (_, arc_sign, _), _ in collected:
                total *= arc_sign
            if total != signs[path[0]][first] * signs[end][target]:
                raise ContractError("path sign disagrees with endpoint directions")
            return first, collected
        comp = k
        hi = p


def extract_negative_circuit(
    net: NetworkMap, attractor_states: Iterable[int]
) -> WitnessTrace:
    """Extract a negative circuit certified inside a cyclic attractor.

    ``attractor_states`` must be a cyclic attractor of the asynchronous
    graph of ``net`` (given as state ranks); anything else is rejected.
    The returned trace records, for every arc, a supporting state of the
    attractor whose step-local influence graph contains it.
    """
    states = frozenset(attractor_states)
    graph = build_stg(net, ASYNC)
    if len(states) < 2:
        raise DomainError("a cyclic attractor has at least two states")
    if not is_trap_domain(graph, states):
        raise DomainError("the given set is not closed under transitions")
    if not _strongly_connected_within(graph, states):
        raise DomainError("the given set is not a single strongly connected piece")
    return _extract(net, states, states, [])


def _strongly_connected_within(graph, states: frozenset[int]) -> bool:
    start = min(states)
    seen = {start}
    stack = [start]
    while stack:
        r = stack.pop()
        for t in graph.successors(r):
            if t in states and t not in seen:
                seen.add(t)
                stack.append(t)
    if seen != states:
        return False
    # reverse reachability inside the set
    preds: dict[int, list[int]] = {r: [] for r in states}
    for r in states:
        for t in graph.successors(r):
            if t in states:
                preds[t].append(r)
    seen = {start}
    stack = [start]
    while stack:
        r = stack.pop()
        for t in preds[r]:
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return seen == states


def _extract(
    net: NetworkMap,
    current: frozenset[int],
    original: frozenset[int],
    frozen: list[int],
) -> WitnessTrace:
    signs = net.sign_table()
    lone = [r for r in sorted(current) if _unstable_count(signs[r]) == 1]
    if lone:
        arcs_and_support = _single_driver_circuit(net, lone[0], current)
        circuit = SignedCircuit(tuple(a for a, _ in arcs_and_support))
        if circuit.sign != -1:
            raise ContractError("extracted circuit is not negative")
        support = tuple(r for _, r in arcs_and_support)
        if any(r not in original for r in support):
            raise ContractError("supporting state escaped the attractor")
        return WitnessTrace(circuit, support, tuple(frozen), original)

    # every state has two or more unstable components: pin one and recurse
    y = min(current)
    c = min(i for i, s in enumerate(signs[y]) if s != 0)
    pinned = net.freeze_component(c)
    sub = _attractor_within(pinned, current)
    if not sub < current:
        raise ContractError("pinning a component failed to shrink the attractor")
    if len(sub) < 2:
        raise ContractError("pinned map lost the oscillation")
    return _extract(pinned, sub, original, frozen + [c])


def _unstable_count(sign_vector) -> int:
    return sum(1 for s in sign_vector if s != 0)


def _single_driver_circuit(net: NetworkMap, start: int, states: frozenset[int]):
    """Negative circuit seeded at a state with a single unstable component."""
    signs = net.sign_table()
    space = net.space
    i = next(c for c, s in enumerate(signs[start]) if s != 0)
    direction = signs[start][i]
    digits = space.digit_table()
    img = digits[net.table[start]]
    first = start + (img[i] - digits[start][i]) * space.weights[i]
    graph = build_stg(net, ASYNC)
    back = shortest_path(graph, first, start)
    if back is None:
        raise ContractError("attractor states are not mutually reachable")
    walk = [start] + back  # returns to `start`, so the flip below must exist
    p = next(
        (q for q in range(1, len(walk) - 1) if signs[walk[q]][i] == -direction),
        None,
    )
    if p is None:
        raise ContractError("driver component never reverses inside the attractor")
    comp, collected = signed_influence_path(net, walk[: p + 1], i)
    if comp != i:
        raise ContractError("influence path does not start at the driver component")
    if any(r not in states for _, r in collected):
        raise ContractError("supporting state escaped the current attractor")
    return collected


def _attractor_within(net: NetworkMap, states: frozenset[int]) -> frozenset[int]:
    """Smallest-rank attractor of the subgraph induced on ``states``.

    ``states`` is closed under the map's transitions, so attractors of the
    induced subgraph are attractors of the full graph.
    """
    members = sorted(states)
    pos = {r: k for k, r in enumerate(members)}
    signs = net.sign_table()
    digits = net.space.digit_table()
    weights = net.space.weights

    def successors(k: int) -> list[int]:
        r = members[k]
        img = digits[net.table[r]]
        cur = digits[r]
        out = []
        for c, s in enumerate(signs[r]):
            if s != 0:
                t = r + (img[c] - cur[c]) * weights[c]
                if t not in pos:
                    raise ContractError("restricted set is not closed")
                out.append(pos[t])
        return out

    comps = tarjan_scc(len(members), successors)
    comp_of = [0] * len(members)
    for k, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = k
    for comp in comps:  # already ordered by smallest contained vertex
        if all(comp_of[t] == comp_of[comp[0]] for v in comp for t in successors(v)):
            return frozenset(members[v] for v in comp)
    raise ContractError("no terminal component in a finite graph")


def verify_witness(net: NetworkMap, trace: WitnessTrace) -> bool:
    """Re-check a trace against an independent recomputation.

    Confirms the circuit chains and multiplies to sign -1, that every
    supporting state belongs to the certified attractor, and that every
    arc lies in the step-local influence graph of its supporting state,
    rebuilt from scratch for the original map.
    """
    circuit = trace.circuit
    if circuit.sign != -1:
        return False
    space = net.space
    for arc, r in zip(circuit.arcs, trace.support):
        if r not in trace.attractor:
            return False
        fresh = dynamic_local_ig(net, space.unrank(r))
        if arc not in fresh.arc_set:
            return False
    return True
