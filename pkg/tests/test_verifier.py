"""Per-instance checking, enumeration/sampling, sweeps and the fast engine."""

import numpy as np
import pytest

from negcirc import (
    ALL_CHECKS,
    DomainError,
    NetworkMap,
    StateSpace,
    check_instance,
    enumerate_networks,
    replay_record,
    sample_networks,
    sweep,
)
from negcirc.boolfast import analyze_batch, circuit_tables, decode_tables
from negcirc.circuits import (
    has_circuit,
    has_negative_circuit,
    has_positive_circuit,
)
from negcirc.corpus import example_network
from negcirc.interaction import SignedDigraph
from negcirc.sweep import map_count, sample_tables, table_from_index
from negcirc.verifier import (
    CYCLIC_NEG,
    Q_NO_FIXED_POINT,
    Q_OSCILLATION,
    UNITARY_CYCLIC_NEG,
    compute_facts,
    evaluate_checks,
    question_flags,
)



def test_example_1_report():
    report = check_instance(example_network(1))
    t1 = report.checks[CYCLIC_NEG]
    assert (t1["hypothesis"], t1["conclusion"], t1["holds"]) == (True, True, True)
    assert report.violations == []
    assert report.circuit_facts["global_negative"]
    assert any(w["graph"] == "asynchronous" for w in report.witnesses)
    assert all(w["verified"] for w in report.witnesses)


def test_example_2_report():
    report = check_instance(example_network(2))
    assert report.checks[CYCLIC_NEG]["hypothesis"] is True
    assert report.checks[CYCLIC_NEG]["holds"] is True
    assert report.checks[UNITARY_CYCLIC_NEG]["hypothesis"] is False
    assert report.unitary_graph.arcs == ()
    assert report.violations == []


def test_example_6_report_flags_both_questions():
    report = check_instance(example_network(6))
    assert report.checks[CYCLIC_NEG]["hypothesis"] is True
    assert report.checks[UNITARY_CYCLIC_NEG]["hypothesis"] is True
    assert report.violations == []
    assert report.questions[Q_OSCILLATION] is True
    assert report.questions[Q_NO_FIXED_POINT] is True
    assert report.fixed == []


def test_checks_carry_recheckable_evidence():
    report = check_instance(example_network(1))
    t1 = report.checks[CYCLIC_NEG]
    ev = t1["evidence"]
    assert len(ev["cyclic_attractor"]) == 6
    circuit = ev["negative_circuit"]
    assert circuit is not None
    signs = [arc[1] for arc in circuit]
    assert signs.count("-") % 2 == 1
    c1 = report.checks["negative_circuit_free_implies_fixed_point"]
    assert c1["evidence"]["fixed_point"] == [0, 2]
    l1 = report.checks["step_influences_within_global_graph"]
    assert l1["evidence"]["escaping_influence"] is None
    r12 = report.checks["local_graphs_union_is_global_graph"]
    assert r12["evidence"]["arc_difference"] == []
    t3 = report.checks["multiple_attractors_imply_local_positive_circuit"]
    assert t3["evidence"]["attractor_count"] == 2
    assert t3["evidence"]["state_with_positive_local_circuit"] is not None


def test_report_dict_shape():
    d = check_instance(example_network(2)).to_dict()
    assert d["schema"] == "negcirc.report.v1"
    assert d["space"] == [[0, 2]]
    assert d["table"] == [[2], [1], [0]]
    assert d["interaction"]["global"]["arcs"] == [[1, "-", 1]]
    # ordering is by smallest member rank: the {0,2} oscillation comes first
    assert d["attractors"]["asynchronous"][0]["cyclic"] is True
    assert d["attractors"]["asynchronous"][1]["cyclic"] is False
    assert d["witnesses"][0]["sign"] == -1


def test_report_field_names_are_frozen():
    report = check_instance(example_network(2)).to_dict()
    assert set(report) == {
        "schema",
        "space",
        "table",
        "fixed_points",
        "attractors",
        "interaction",
        "circuits",
        "checks",
        "question_candidates",
        "witnesses",
        "violations",
    }
    assert set(report["attractors"]) == {"asynchronous", "unitary"}
    for verdict in report["checks"].values():
        assert {"hypothesis", "conclusion", "holds", "evidence"} <= set(verdict)
    summary = sweep(StateSpace([(0, 1)]), mode="exhaustive").to_dict()
    assert set(summary) == {
        "schema",
        "space",
        "mode",
        "count",
        "seed",
        "checks",
        "engine",
        "jobs",
        "analyzed",
        "counts",
        "violations",
        "question_candidates",
        "witnesses",
        "elapsed_seconds",
    }
    assert set(summary["witnesses"]) == {"attempted", "verified", "cap", "failures"}


def test_enumeration_counts_and_canonical_order():
    space2 = StateSpace([(0, 1), (0, 1)])
    nets = list(enumerate_networks(space2))
    assert len(nets) == 256
    assert len({n.table for n in nets}) == 256
    assert nets[0].table == (0, 0, 0, 0)
    assert nets[-1].table == (3, 3, 3, 3)
    for k in (0, 1, 37, 255):
        assert list(nets[k].table) == table_from_index(space2, k)

    space1 = StateSpace([(0, 2)])
    assert len(list(enumerate_networks(space1))) == 27
    assert map_count(StateSpace([(0, 1)] * 3)) == 16_777_216


def test_enumeration_guard():
    with pytest.raises(DomainError):
        list(enumerate_networks(StateSpace([(0, 3), (0, 3)])))


def test_decode_tables_matches_generic_indexing():
    space = StateSpace([(0, 1)] * 3)
    idx = np.array([0, 1, 8, 16_777_215, 123_456], dtype=np.int64)
    rows = decode_tables(3, idx)
    for k, index in enumerate(idx):
        assert rows[k].tolist() == table_from_index(space, int(index))


def test_sampling_determinism():
    space = StateSpace([(0, 2), (0, 2)])
    a = [n.table for n in sample_networks(space, 3, seed=42)]
    b = [n.table for n in sample_networks(space, 3, seed=42)]
    assert a == b
    c = [n.table for n in sample_networks(space, 3, seed=43)]
    assert a != c
    assert list(sample_networks(space, 0, seed=1)) == []


def test_sampling_is_roughly_uniform():
    space = StateSpace([(0, 1), (0, 1)])
    count = 100_000
    tables = sample_tables(space, count, seed=99)
    weights = 4 ** np.arange(3, -1, -1, dtype=np.int64)
    indices = tables @ weights
    histogram = np.bincount(indices, minlength=256)
    p = 1 / 256
    sigma = (count * p * (1 - p)) ** 0.5
    low, high = count * p - 5 * sigma, count * p + 5 * sigma
    assert histogram.min() >= low and histogram.max() <= high


def _facts_tuple(net):
    facts = compute_facts(net, ALL_CHECKS, questions=True)
    verdicts = evaluate_checks(facts, ALL_CHECKS)
    return (
        bool(facts.async_cyclic),
        bool(facts.unitary_cyclic),
        int(facts.unitary_attractor_count),
        bool(facts.has_fixed),
        int(facts.fixed_count),
        bool(facts.global_neg),
        bool(facts.unitary_neg),
        bool(facts.locals_neg_free),
        bool(facts.locals_pos_any),
        bool(facts.locals_all_acyclic),
        bool(facts.locals_union_is_global),
        bool(facts.dyn_within_global),
        bool(facts.unitary_dyn_within),
        tuple(verdicts[c]["holds"] for c in ALL_CHECKS),
        tuple(question_flags(facts).values()),
    )


def _engine_tuple(batch_facts, k, verdict_arrays, q1, q2):
    return (
        bool(batch_facts.has_cyclic[k]),
        bool(batch_facts.has_cyclic[k]),
        int(batch_facts.attractor_count[k]),
        bool(batch_facts.has_fixed[k]),
        int(batch_facts.fixed_count[k]),
        bool(batch_facts.global_neg[k]),
        bool(batch_facts.unitary_neg[k]),
        bool(batch_facts.locals_neg_free[k]),
        bool(batch_facts.locals_pos_any[k]),
        bool(batch_facts.locals_all_acyclic[k]),
        bool(batch_facts.locals_union_is_global[k]),
        bool(batch_facts.dyn_within_global[k]),
        bool(batch_facts.unitary_dyn_within[k]),
        tuple(bool(arr[k]) for arr in verdict_arrays),
        (bool(q1[k]), bool(q2[k])),
    )


def _engine_verdicts(facts):
    return [
        facts.has_cyclic <= facts.global_neg,
        facts.has_cyclic <= facts.unitary_neg,
        np.logical_or(facts.global_neg, facts.has_fixed),
        np.logical_or(facts.unitary_neg, facts.has_fixed),
        facts.dyn_within_global,
        facts.unitary_dyn_within,
        facts.locals_union_is_global,
        np.logical_or(facts.global_any, facts.converges),
        np.logical_or(facts.attractor_count < 2, facts.locals_pos_any),
        np.logical_or(~facts.locals_all_acyclic, facts.converges),
    ]


@pytest.mark.parametrize("n", [1, 2])
def test_engine_matches_reference_exhaustively(n):
    space = StateSpace([(0, 1)] * n)
    total = map_count(space)
    tables = decode_tables(n, np.arange(total, dtype=np.int64))
    facts = analyze_batch(n, tables)
    verdicts = _engine_verdicts(facts)
    q1 = facts.has_cyclic & facts.locals_neg_free
    q2 = facts.locals_neg_free & ~facts.has_fixed
    for k in range(total):
        net = NetworkMap(space, tables[k].tolist())
        assert _facts_tuple(net) == _engine_tuple(facts, k, verdicts, q1, q2)


def test_engine_matches_reference_on_sampled_three_component_maps():
    space = StateSpace([(0, 1)] * 3)
    rng = np.random.default_rng(7)
    idx = rng.integers(0, map_count(space), size=400, dtype=np.int64)
    tables = decode_tables(3, idx)
    facts = analyze_batch(3, tables)
    verdicts = _engine_verdicts(facts)
    q1 = facts.has_cyclic & facts.locals_neg_free
    q2 = facts.locals_neg_free & ~facts.has_fixed
    for k in range(len(idx)):
        net = NetworkMap(space, tables[k].tolist())
        assert _facts_tuple(net) == _engine_tuple(facts, k, verdicts, q1, q2)


def test_circuit_tables_match_exact_detectors():
    # exhaustive over every arc mask the tables can ever be asked about
    for n in (1, 2, 3):
        neg, pos, anyc = circuit_tables(n)
        for mask in range(1 << (2 * n * n)):
            g = SignedDigraph.from_mask(n, mask)
            assert bool(neg[mask]) == has_negative_circuit(g)
            assert bool(pos[mask]) == has_positive_circuit(g)
            assert bool(anyc[mask]) == has_circuit(g)


def test_sweep_summary_shape_and_determinism():
    space = StateSpace([(0, 2)])
    one = sweep(space, mode="exhaustive")
    two = sweep(space, mode="exhaustive")
    d1, d2 = one.to_dict(), two.to_dict()
    d1.pop("elapsed_seconds")
    d2.pop("elapsed_seconds")
    assert d1 == d2
    assert one.analyzed == 27
    assert not one.violations
    assert one.witnesses["verified"] == one.witnesses["attempted"] > 0


def test_sweep_jobs_do_not_change_results():
    space = StateSpace([(0, 2), (0, 1)])
    serial = sweep(space, mode="sample", count=300, seed=5, jobs=1)
    parallel = sweep(space, mode="sample", count=300, seed=5, jobs=2)
    a, b = serial.to_dict(), parallel.to_dict()
    for d in (a, b):
        d.pop("elapsed_seconds")
        d.pop("jobs")
    assert a == b


def test_sweep_injection_flags_example_6():
    space = StateSpace([(0, 3), (0, 3)])
    control = example_network(6)
    summary = sweep(
        space, mode="sample", count=50, seed=11, include=[control], witness_cap=200
    )
    assert not summary.violations
    q1 = summary.question_candidates[Q_OSCILLATION]
    q2 = summary.question_candidates[Q_NO_FIXED_POINT]
    assert any(rec["source"] == "injected" for rec in q1)
    assert any(rec["source"] == "injected" for rec in q2)
    for rec in q1 + q2:
        assert replay_record(space, rec)


def test_sweep_input_validation():
    space = StateSpace([(0, 1)])
    with pytest.raises(DomainError):
        sweep(space, mode="sample")  # needs count and seed
    with pytest.raises(DomainError):
        sweep(space, mode="everything")
    with pytest.raises(DomainError):
        sweep(space, checks=("no_such_check",))
    with pytest.raises(DomainError):
        sweep(StateSpace([(0, 3), (0, 3)]), mode="exhaustive")
    with pytest.raises(DomainError):
        sweep(space, include=[example_network(2)])


def test_violation_records_replay():
    # fabricate a record for a map that genuinely flags a question
    space = StateSpace([(0, 3), (0, 3)])
    net = example_network(6)
    rec = {
        "source": "stream",
        "index": 0,
        "table": [list(space.unrank(img)) for img in net.table],
        "kind": Q_OSCILLATION,
    }
    assert replay_record(space, rec)
    rec_false = dict(rec, table=[[0, 0]] * 16, kind=Q_NO_FIXED_POINT)
    assert not replay_record(space, rec_false)
