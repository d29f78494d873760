"""State space ranking and network map derivations."""

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from negcirc import DomainError, NetworkMap, StateSpace
from negcirc.corpus import example_network

from helpers import SMALL_SPACES, random_network


def test_rank_corners():
    space = StateSpace([(0, 2), (0, 2)])
    assert space.rank((0, 0)) == 0
    assert space.rank((2, 2)) == 8


def test_rank_matches_lexicographic_enumeration():
    space = StateSpace([(0, 2), (0, 2)])
    ordered = sorted(itertools.product(range(3), repeat=2))
    assert ordered.index((1, 2)) == 5
    for k, state in enumerate(ordered):
        assert space.rank(state) == k
        assert space.unrank(k) == state


@st.composite
def spaces(draw):
    n = draw(st.integers(1, 4))
    intervals = []
    for _ in range(n):
        lo = draw(st.integers(-5, 5))
        hi = lo + draw(st.integers(1, 4))
        intervals.append((lo, hi))
    return StateSpace(intervals)


@settings(max_examples=100, deadline=None)
@given(spaces(), st.randoms(use_true_random=False))
def test_rank_unrank_roundtrip(space, rng):
    for r in range(space.size):
        assert space.rank(space.unrank(r)) == r
    x = tuple(rng.randint(lo, hi) for lo, hi in space.intervals)
    assert space.unrank(space.rank(x)) == x


def test_space_validation():
    with pytest.raises(DomainError):
        StateSpace([])
    with pytest.raises(DomainError):
        StateSpace([(0, 0)])  # single-valued component
    with pytest.raises(DomainError):
        StateSpace([(3, 1)])


def test_state_cap(monkeypatch):
    monkeypatch.setenv("NEGCIRC_STATE_CAP", "8")
    with pytest.raises(DomainError):
        StateSpace([(0, 2), (0, 2)])
    StateSpace([(0, 1), (0, 1)])


def test_rank_domain_errors():
    space = StateSpace([(0, 2)])
    with pytest.raises(DomainError):
        space.rank((3,))
    with pytest.raises(DomainError):
        space.unrank(3)
    with pytest.raises(DomainError):
        space.unrank(-1)


def test_async_update_on_example_1():
    net = example_network(1)
    assert net.async_update((1, 1), 0) == (0, 1)
    assert net.async_update((0, 2), 0) == (0, 2)


def test_async_update_identity_map():
    space = StateSpace([(0, 2), (0, 1)])
    ident = NetworkMap.from_function(space, lambda x: x)
    for x in space.states():
        for i in range(space.n):
            assert ident.async_update(x, i) == x


def test_async_update_changes_only_one_coordinate():
    rng = random.Random(11)
    for space in SMALL_SPACES:
        net = random_network(space, rng)
        for x in space.states():
            for i in range(space.n):
                y = net.async_update(x, i)
                assert all(y[k] == x[k] for k in range(space.n) if k != i)
                assert y[i] == net.image(x)[i]


def test_delta_sign_examples():
    net1 = example_network(1)
    assert net1.delta_sign((0, 0)) == (1, 0)
    assert net1.delta_sign((0, 2)) == (0, 0)
    net2 = example_network(2)
    assert net2.delta_sign((0,)) == (1,)


def test_unstable_set():
    net = example_network(1)
    assert net.unstable_set((0, 0)) == {0}
    assert net.unstable_set((1, 1)) == {0, 1}
    assert net.unstable_set((0, 2)) == set()


def test_unitary_map_single_component_cases():
    space = StateSpace([(0, 2)])
    falls = NetworkMap.from_images(space, [(2,), (1,), (0,)])
    assert falls.unitary_map().table == (1, 1, 1)
    spikes = NetworkMap.from_images(space, [(0,), (2,), (0,)])
    assert spikes.unitary_map().table == (0, 2, 1)


def test_unitary_map_is_identity_on_boolean_maps():
    rng = random.Random(5)
    space = StateSpace([(0, 1), (0, 1), (0, 1)])
    for _ in range(25):
        net = random_network(space, rng)
        assert net.unitary_map() == net


def test_unitary_map_properties():
    rng = random.Random(17)
    for space in SMALL_SPACES:
        net = random_network(space, rng)
        unit = net.unitary_map()
        for r in range(space.size):
            x = space.unrank(r)
            y = unit.image(x)
            assert all(abs(a - b) <= 1 for a, b in zip(x, y))
            assert unit.delta_sign(x) == net.delta_sign(x)


def test_freeze_component():
    rng = random.Random(23)
    space = StateSpace([(0, 2), (0, 1)])
    net = random_network(space, rng)
    pinned = net.freeze_component(0)
    for x in space.states():
        img = pinned.image(x)
        assert img[0] == x[0]
        assert img[1] == net.image(x)[1]


def test_network_table_validation():
    space = StateSpace([(0, 1)])
    with pytest.raises(DomainError):
        NetworkMap(space, [0])  # not total
    with pytest.raises(DomainError):
        NetworkMap(space, [0, 2])  # image outside the space
