"""Six bundled example networks with pinned expected behavior.

Each example isolates one phenomenon:

1. two attractors on {0,1,2}^2: a stable state next to a six-state
   sustained oscillation;
2. an oscillation only the asynchronous dynamics shows (the unitary
   graph converges), with an arcless unitary interaction graph;
3. the mirror image: only the unitary dynamics oscillates;
4. a Boolean rotation whose graph has directed cycles but no cyclic
   attractor and no negative circuit;
5. a Boolean swap whose synchronous dynamics cycles although the
   interaction graph has no negative circuit;
6. a two-component map on {0..3}^2 that oscillates (both dynamics)
   while every per-state local interaction graph is negative-circuit
   free: a counterexample showing the union over an attractor cannot be
   replaced by a single local graph.

``run_corpus`` recomputes everything and diffs against the pins; it is
wired to the ``examples`` CLI command.
"""

from __future__ import annotations

from .attractors import attractors, fixed_points, strongly_connected_components
from .circuits import elementary_circuits, has_negative_circuit
from .dynamics import ASYNC, SYNC, build_stg
from .errors import DomainError
from .interaction import global_ig, local_ig, unitary_ig
from .model import NetworkMap, StateSpace
from .rules import compile_network, parse_rule

EXAMPLE_NUMBERS = (1, 2, 3, 4, 5, 6)

EXAMPLE_RULE_TEXTS = {
    6: (
        "if x2 == 3 or (x2 > 0 and x1 >= 2) then 3 else 0",
        "if x1 == 0 or (x1 < 3 and x2 >= 2) then 3 else 0",
    ),
}


def example_network(number: int) -> NetworkMap:
    """One of the six bundled networks."""
    if number == 1:
        space = StateSpace([(0, 2), (0, 2)])
        images = [
            (2, 0), (1, 0), (0, 2),
            (2, 0), (0, 0), (0, 1),
            (2, 1), (0, 1), (0, 1),
        ]
        return NetworkMap.from_images(space, images)
    if number == 2:
        return NetworkMap.from_images(StateSpace([(0, 2)]), [(2,), (1,), (0,)])
    if number == 3:
        return NetworkMap.from_images(StateSpace([(0, 2)]), [(0,), (2,), (0,)])
    if number == 4:
        space = StateSpace([(0, 1)] * 3)
        return NetworkMap.from_function(space, lambda x: (x[2], x[0], x[1]))
    if number == 5:
        space = StateSpace([(0, 1)] * 2)
        return NetworkMap.from_function(space, lambda x: (x[1], x[0]))
    if number == 6:
        space = StateSpace([(0, 3), (0, 3)])
        rules = [parse_rule(text) for text in EXAMPLE_RULE_TEXTS[6]]
        return compile_network(space, rules)
    raise DomainError(f"no bundled example {number}; choose from {EXAMPLE_NUMBERS}")


def _attractor_state_sets(net: NetworkMap, flavor: str):
    graph = build_stg(net, flavor)
    out = []
    for a in attractors(graph):
        out.append(
            (frozenset(net.space.unrank(r) for r in a.states), a.cyclic)
        )
    return out


def _grid(pairs) -> frozenset:
    return frozenset(pairs)


# The border ring the unitary dynamics of example 6 walks, clockwise.
EXAMPLE6_UNITARY_RING = _grid(
    [
        (0, 0), (0, 1), (0, 2), (0, 3),
        (1, 3), (2, 3), (3, 3),
        (3, 2), (3, 1), (3, 0),
        (2, 0), (1, 0),
    ]
)
EXAMPLE6_ASYNC_CORNERS = _grid([(0, 0), (0, 3), (3, 3), (3, 0)])


def check_example(number: int) -> list[tuple[str, bool, str]]:
    """Recompute one example and diff against its pinned expectations.

    Returns (label, passed, detail) triples; details are filled on
    mismatch only.
    """
    net = example_network(number)
    results = []

    def expect(label, actual, wanted):
        ok = actual == wanted
        results.append(
            (label, ok, "" if ok else f"got {actual!r}, wanted {wanted!r}")
        )

    if number == 1:
        expect(
            "async attractors",
            set(_attractor_state_sets(net, ASYNC)),
            {
                (_grid([(0, 2)]), False),
                (_grid([(a, b) for a in (0, 1, 2) for b in (0, 1)]), True),
            },
        )
        circuits = elementary_circuits(global_ig(net))
        expect("positive elementary circuits", sum(c.sign > 0 for c in circuits), 2)
        expect("negative elementary circuits", sum(c.sign < 0 for c in circuits), 2)
    elif number == 2:
        expect(
            "async attractors",
            set(_attractor_state_sets(net, ASYNC)),
            {(_grid([(1,)]), False), (_grid([(0,), (2,)]), True)},
        )
        expect(
            "unitary attractors",
            set(_attractor_state_sets(net.unitary_map(), ASYNC)),
            {(_grid([(1,)]), False)},
        )
        expect("global graph arcs", global_ig(net).arcs, ((0, -1, 0),))
        expect("unitary graph arcs", unitary_ig(net).arcs, ())
    elif number == 3:
        expect(
            "async attractors",
            set(_attractor_state_sets(net, ASYNC)),
            {(_grid([(0,)]), False)},
        )
        expect(
            "unitary attractors",
            set(_attractor_state_sets(net.unitary_map(), ASYNC)),
            {(_grid([(0,)]), False), (_grid([(1,), (2,)]), True)},
        )
        expect("global graph arcs", global_ig(net).arcs, ((0, -1, 0), (0, 1, 0)))
        expect("graphs coincide", unitary_ig(net).arcs, global_ig(net).arcs)
    elif number == 4:
        expect(
            "fixed points", fixed_points(net), [(0, 0, 0), (1, 1, 1)]
        )
        expect(
            "async attractors",
            set(_attractor_state_sets(net, ASYNC)),
            {(_grid([(0, 0, 0)]), False), (_grid([(1, 1, 1)]), False)},
        )
        graph = build_stg(net, ASYNC)
        expect(
            "a directed cycle exists",
            any(len(c) >= 2 for c in strongly_connected_components(graph)),
            True,
        )
        expect(
            "global graph arcs",
            global_ig(net).arcs,
            ((0, 1, 1), (1, 1, 2), (2, 1, 0)),
        )
        expect("negative circuit", has_negative_circuit(global_ig(net)), False)
        circuits = elementary_circuits(global_ig(net))
        expect("circuit count", len(circuits), 1)
        expect("lone circuit sign", circuits[0].sign, 1)
    elif number == 5:
        sync = build_stg(net, SYNC)
        expect(
            "synchronous arcs",
            sorted(
                (net.space.unrank(a), net.space.unrank(b)) for a, b in sync.arcs()
            ),
            [((0, 1), (1, 0)), ((1, 0), (0, 1))],
        )
        expect(
            "synchronous cyclic attractor",
            {s for s, cyc in _attractor_state_sets(net, SYNC) if cyc},
            {_grid([(0, 1), (1, 0)])},
        )
        expect("global graph arcs", global_ig(net).arcs, ((0, 1, 1), (1, 1, 0)))
        expect("negative circuit", has_negative_circuit(global_ig(net)), False)
    elif number == 6:
        expect("image of (0,0)", net.image((0, 0)), (0, 3))
        expect(
            "async attractors",
            set(_attractor_state_sets(net, ASYNC)),
            {(EXAMPLE6_ASYNC_CORNERS, True)},
        )
        expect(
            "unitary attractors",
            set(_attractor_state_sets(net.unitary_map(), ASYNC)),
            {(EXAMPLE6_UNITARY_RING, True)},
        )
        expect("graphs coincide", unitary_ig(net).arcs, global_ig(net).arcs)
        expect("negative circuit", has_negative_circuit(global_ig(net)), True)
        expect(
            "all local graphs negative-circuit free",
            all(
                not has_negative_circuit(local_ig(net, x))
                for x in net.space.states()
            ),
            True,
        )
    else:
        raise DomainError(f"no bundled example {number}")
    return results


def run_corpus(numbers=EXAMPLE_NUMBERS) -> dict[int, list[tuple[str, bool, str]]]:
    """Diff the requested examples against their pins."""
    return {k: check_example(k) for k in numbers}
