"""Attractor computation against brute-force oracles."""

import random

from negcirc import (
    ASYNC,
    SYNC,
    UNITARY,
    StateSpace,
    attractors,
    build_stg,
    fixed_points,
    is_trap_domain,
    path_exists,
    strongly_connected_components,
)
from negcirc.corpus import example_network

from helpers import SMALL_SPACES, brute_force_attractors, random_network


def test_scc_of_example_5_synchronous():
    net = example_network(5)
    graph = build_stg(net, SYNC)
    comps = strongly_connected_components(graph)
    space = net.space
    as_states = {frozenset(space.unrank(r) for r in c) for c in comps}
    assert as_states == {
        frozenset({(0, 1), (1, 0)}),
        frozenset({(0, 0)}),
        frozenset({(1, 1)}),
    }


def test_scc_arcless_graph_is_all_singletons():
    space = StateSpace([(0, 2)])
    ident = [0, 1, 2]
    from negcirc import NetworkMap

    graph = build_stg(NetworkMap(space, ident), ASYNC)
    assert strongly_connected_components(graph) == [[0], [1], [2]]


def test_example_1_oscillating_states_share_a_component():
    net = example_network(1)
    graph = build_stg(net, ASYNC)
    space = net.space
    ring = {space.rank((a, b)) for a in (0, 1, 2) for b in (0, 1)}
    comps = strongly_connected_components(graph)
    owner = [set(c) for c in comps if ring & set(c)]
    assert len(owner) == 1 and ring <= owner[0]


def test_attractors_of_examples():
    net1 = example_network(1)
    space = net1.space
    aset = attractors(build_stg(net1, ASYNC))
    summary = {(frozenset(a.states), a.cyclic) for a in aset}
    assert summary == {
        (frozenset({space.rank((0, 2))}), False),
        (frozenset(space.rank((a, b)) for a in (0, 1, 2) for b in (0, 1)), True),
    }

    net2 = example_network(2)
    aset2 = attractors(build_stg(net2, ASYNC))
    assert {(frozenset(a.states), a.cyclic) for a in aset2} == {
        (frozenset({1}), False),
        (frozenset({0, 2}), True),
    }

    net6 = example_network(6)
    aset6 = attractors(build_stg(net6, ASYNC))
    corners = frozenset(
        net6.space.rank(x) for x in [(0, 0), (0, 3), (3, 3), (3, 0)]
    )
    assert [(a.states, a.cyclic) for a in aset6] == [(corners, True)]


def test_fixed_points():
    assert fixed_points(example_network(1)) == [(0, 2)]
    assert fixed_points(example_network(4)) == [(0, 0, 0), (1, 1, 1)]
    space = StateSpace([(0, 1), (0, 2)])
    from negcirc import NetworkMap

    ident = NetworkMap.from_function(space, lambda x: x)
    assert fixed_points(ident) == list(space.states())


def test_attractor_ordering_is_by_smallest_rank():
    rng = random.Random(53)
    for space in SMALL_SPACES:
        net = random_network(space, rng)
        aset = attractors(build_stg(net, ASYNC))
        smallest = [a.smallest_rank() for a in aset]
        assert smallest == sorted(smallest)


def test_attractor_properties_on_random_networks():
    rng = random.Random(59)
    for space in SMALL_SPACES:
        for _ in range(6):
            net = random_network(space, rng)
            for flavor in (ASYNC, UNITARY, SYNC):
                graph = build_stg(net, flavor)
                aset = attractors(graph)
                seen = set()
                for a in aset:
                    assert is_trap_domain(graph, a.states)
                    assert a.cyclic == (len(a.states) >= 2)
                    assert not (a.states & seen)  # pairwise disjoint
                    seen |= a.states
                    for r in a.states:
                        if a.cyclic:
                            assert graph.out_degree(r) >= 1
                        for t in a.states:
                            assert path_exists(graph, r, t)
                # every state walks into some attractor
                for r in range(space.size):
                    assert any(
                        path_exists(graph, r, next(iter(a.states))) for a in aset
                    )
                if flavor == ASYNC:
                    singles = {
                        next(iter(a.states)) for a in aset if not a.cyclic
                    }
                    assert singles == {
                        net.space.rank(x) for x in fixed_points(net)
                    }


def test_attractors_match_brute_force_on_small_graphs():
    rng = random.Random(61)
    for space in SMALL_SPACES:
        if space.size > 12:
            continue
        for _ in range(10):
            net = random_network(space, rng)
            for flavor in (ASYNC, UNITARY, SYNC):
                graph = build_stg(net, flavor)
                expected = brute_force_attractors(graph)
                got = {a.states for a in attractors(graph)}
                assert got == expected


def test_removing_any_state_breaks_a_cyclic_attractor():
    for k in (1, 2, 6):
        net = example_network(k)
        graph = build_stg(net, ASYNC)
        for a in attractors(graph).cyclic:
            if len(a.states) > 12:
                continue
            for r in a.states:
                rest = a.states - {r}
                broken = not is_trap_domain(graph, rest) or not all(
                    path_exists(graph, u, v) for u in rest for v in rest
                )
                assert broken
