"""Acceptance criteria, one test per criterion, each printing a verdict line.

Expensive sweeps are computed once and shared between criteria through
cached getters, so the module runs every criterion at its stated budget
regardless of test execution order.
"""

import random
import time
from functools import lru_cache

from negcirc import (
    StateSpace,
    attractors,
    build_stg,
    has_negative_circuit,
    iter_elementary_circuits,
    sweep,
)
from negcirc.circuits import SignedDigraph
from negcirc.corpus import example_network, run_corpus
from negcirc.dynamics import ASYNC, SYNC, UNITARY
from negcirc.sweep import SweepSummary
from negcirc.verifier import (
    ALL_CHECKS,
    CORE_CHECKS,
    CYCLIC_NEG,
    DYN_WITHIN_GLOBAL,
    NEGFREE_FIXED,
    Q_NO_FIXED_POINT,
    Q_OSCILLATION,
    UNITARY_DYN_WITHIN,
)

from helpers import brute_force_attractors, random_network


def _announce(criterion: str, detail: str) -> None:
    print(f"[PASS] {criterion}: {detail}", flush=True)


def _assert_clean(summary: SweepSummary) -> None:
    assert summary.violations == [], summary.violations[:3]
    w = summary.witnesses
    assert w["failures"] == []
    assert w["attempted"] == w["verified"]


@lru_cache(maxsize=None)
def _boolean_sweep(n: int) -> tuple[SweepSummary, float]:
    space = StateSpace([(0, 1)] * n)
    checks = (CYCLIC_NEG, NEGFREE_FIXED) if n == 3 else ALL_CHECKS
    started = time.perf_counter()
    summary = sweep(space, mode="exhaustive", checks=checks)
    return summary, time.perf_counter() - started


@lru_cache(maxsize=None)
def _boolean3_sample() -> tuple[SweepSummary, float]:
    space = StateSpace([(0, 1)] * 3)
    started = time.perf_counter()
    summary = sweep(
        space,
        mode="sample",
        count=1_000_000,
        seed=90125,
        checks=(CYCLIC_NEG, NEGFREE_FIXED),
    )
    return summary, time.perf_counter() - started


@lru_cache(maxsize=None)
def _multivalued_sample(top: int) -> tuple[SweepSummary, float]:
    space = StateSpace([(0, top), (0, top)])
    checks = CORE_CHECKS + (DYN_WITHIN_GLOBAL, UNITARY_DYN_WITHIN)
    started = time.perf_counter()
    summary = sweep(
        space,
        mode="sample",
        count=100_000,
        seed=1234 + top,
        checks=checks,
        questions=False,
    )
    return summary, time.perf_counter() - started


def test_criterion_1_bundled_example_corpus():
    started = time.perf_counter()
    outcome = run_corpus()
    elapsed = time.perf_counter() - started
    mismatches = [
        (k, label, detail)
        for k, rows in outcome.items()
        for label, ok, detail in rows
        if not ok
    ]
    assert mismatches == []
    # cross-flavor spot checks stated alongside the corpus pins
    net4 = example_network(4)
    assert not attractors(build_stg(net4, ASYNC)).has_cyclic
    net5 = example_network(5)
    assert attractors(build_stg(net5, SYNC)).has_cyclic
    net6 = example_network(6)
    assert attractors(build_stg(net6, UNITARY)).has_cyclic
    assert elapsed < 1.0, f"golden corpus took {elapsed:.2f}s"
    checked = sum(len(rows) for rows in outcome.values())
    _announce(
        "criterion 1 (example corpus)",
        f"{checked} pinned facts matched in {elapsed:.2f}s",
    )


def test_criterion_2_boolean_two_component_exhaustive():
    summary, elapsed = _boolean_sweep(2)
    assert summary.analyzed == 256
    assert set(summary.checks) == set(ALL_CHECKS)
    _assert_clean(summary)
    assert elapsed < 1.0, f"256-map sweep took {elapsed:.2f}s"
    _announce(
        "criterion 2 (Boolean n=2 exhaustive)",
        f"256 maps, 10 checks, 0 violations in {elapsed:.2f}s",
    )


def test_criterion_3_boolean_three_component_exhaustive_and_sample():
    summary, elapsed = _boolean_sweep(3)
    assert summary.analyzed == 16_777_216
    _assert_clean(summary)
    assert elapsed <= 900.0, f"exhaustive sweep took {elapsed:.1f}s"

    sampled, sample_elapsed = _boolean3_sample()
    assert sampled.analyzed == 1_000_000
    _assert_clean(sampled)
    assert sample_elapsed <= 60.0, f"sample sweep took {sample_elapsed:.1f}s"
    _announce(
        "criterion 3 (Boolean n=3)",
        f"16,777,216 maps exhaustively in {elapsed:.1f}s and 1,000,000 samples "
        f"in {sample_elapsed:.1f}s, 0 violations",
    )


def test_criterion_4_multivalued_sample_sweeps():
    total = 0.0
    for top in (2, 3):
        summary, elapsed = _multivalued_sample(top)
        assert summary.analyzed == 100_000
        _assert_clean(summary)
        total += elapsed
    assert total <= 300.0, f"multivalued sweeps took {total:.1f}s"
    _announce(
        "criterion 4 (multivalued samples)",
        f"2 x 100,000 maps, 6 checks each, 0 violations in {total:.1f}s",
    )


def test_criterion_5_witness_soundness_across_sweeps():
    attempted = 0
    for summary in (
        _boolean_sweep(2)[0],
        _boolean_sweep(3)[0],
        _multivalued_sample(2)[0],
        _multivalued_sample(3)[0],
    ):
        w = summary.witnesses
        assert w["cap"] == 10_000
        assert w["attempted"] == w["verified"], w["failures"][:3]
        assert w["failures"] == []
        attempted += w["attempted"]
    assert attempted >= 10_000
    _announce(
        "criterion 5 (witness soundness)",
        f"{attempted} cyclic attractors witnessed, 100% independently verified",
    )


def test_criterion_6_negative_circuit_detector_cross_validation():
    rng = random.Random(424242)
    cases = 10_000
    started = time.perf_counter()
    for _ in range(cases):
        n = rng.randint(1, 8)
        everything = [
            (j, s, i) for j in range(n) for i in range(n) for s in (1, -1)
        ]
        m = rng.randint(0, len(everything))
        graph = SignedDigraph.from_arcs(n, rng.sample(everything, m))
        by_lift = has_negative_circuit(graph)
        by_enumeration = any(
            c.sign < 0 for c in iter_elementary_circuits(graph)
        )
        assert by_lift == by_enumeration, graph.arcs
    elapsed = time.perf_counter() - started
    _announce(
        "criterion 6 (detector cross-validation)",
        f"{cases} signed digraphs up to full density, 100% agreement "
        f"in {elapsed:.1f}s",
    )


def test_criterion_7_attractor_oracle_equivalence():
    rng = random.Random(777)
    spaces = [
        StateSpace([(0, 1), (0, 1)]),
        StateSpace([(0, 2)]),
        StateSpace([(0, 5)]),
        StateSpace([(0, 2), (0, 2)]),
        StateSpace([(0, 1), (0, 1), (0, 1)]),
        StateSpace([(0, 2), (0, 3)]),
        StateSpace([(0, 1), (0, 4)]),
    ]
    flavors = (ASYNC, UNITARY, SYNC)
    cases = 1_000
    started = time.perf_counter()
    for k in range(cases):
        space = spaces[k % len(spaces)]
        net = random_network(space, rng)
        graph = build_stg(net, flavors[k % 3])
        expected = brute_force_attractors(graph)
        got = {a.states for a in attractors(graph)}
        assert got == expected, (space, net.table)
    elapsed = time.perf_counter() - started
    _announce(
        "criterion 7 (attractor oracle)",
        f"{cases} graphs with at most 12 states, terminal components equal "
        f"exhaustive minimal trap domains in {elapsed:.1f}s",
    )


def test_criterion_8_question_search_and_control():
    for n in (1, 2, 3):
        summary = _boolean_sweep(n)[0]
        for kind in (Q_OSCILLATION, Q_NO_FIXED_POINT):
            assert summary.question_candidates[kind] == [], (n, kind)

    control = example_network(6)
    space = control.space
    injected = sweep(
        space,
        mode="sample",
        count=50,
        seed=606,
        include=[control],
        witness_cap=500,
    )
    _assert_clean(injected)
    for kind in (Q_OSCILLATION, Q_NO_FIXED_POINT):
        hits = [
            rec
            for rec in injected.question_candidates[kind]
            if rec["source"] == "injected"
        ]
        assert hits, f"control not flagged for {kind}"
    _announce(
        "criterion 8 (open-question search)",
        "0 Boolean candidates for n <= 3; injected multivalued control "
        "flagged for both questions",
    )
