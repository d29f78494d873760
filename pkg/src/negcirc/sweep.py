"""Family-level sweeps: exhaustive or sampled scans over maps of a space.

A sweep evaluates the selected implication checks on every network of the
stream, aggregates counters, records every violation (expected never) and
every candidate counterexample to the open questions with its full table
for replay, and extracts + verifies a negative-circuit witness for the
first ``witness_cap`` cyclic attractors encountered.

Two engines produce identical results:

* ``bitset``: the vectorized engine for Boolean spaces with n <= 3, which
  makes the 16.7M-map exhaustive scan of three-component Boolean networks
  feasible on a desktop;
* ``per_map``: the reference path through :mod:`negcirc.verifier`, usable
  on any space and parallelizable over index chunks with ``jobs``.

Results are independent of ``jobs`` and of engine internals: chunks merge
in canonical stream order.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .attractors import attractors
from .boolfast import MAX_COMPONENTS, analyze_batch, decode_tables
from .dynamics import ASYNC, build_stg
from .errors import ContractError, DomainError
from .model import NetworkMap, StateSpace
from .verifier import (
    ALL_CHECKS,
    ACYCLIC_LOCALS_CONVERGENCE,
    CIRCUIT_FREE_CONVERGENCE,
    CYCLIC_NEG,
    DYN_WITHIN_GLOBAL,
    LOCAL_UNION_GLOBAL,
    MULTI_ATTRACTOR_POSITIVE,
    NEGFREE_FIXED,
    Q_NO_FIXED_POINT,
    Q_OSCILLATION,
    UNITARY_CYCLIC_NEG,
    UNITARY_DYN_WITHIN,
    UNITARY_NEGFREE_FIXED,
    compute_facts,
    evaluate_checks,
    question_flags,
)
from .witness import extract_negative_circuit, verify_witness

ENUMERATION_LIMIT = 1 << 31
DEFAULT_WITNESS_CAP = 10_000
_BATCH = 1 << 15

_COUNTER_FIELDS = (
    ("asynchronous_cyclic", "async_cyclic", True),
    ("unitary_cyclic", "unitary_cyclic", True),
    ("fixed_point_free", "has_fixed", False),
    ("global_negative_circuit", "global_neg", True),
    ("unitary_negative_circuit", "unitary_neg", True),
    ("local_negative_free", "locals_neg_free", True),
)


def map_count(space: StateSpace) -> int:
    """Number of maps from the space to itself."""
    return space.size ** space.size


def table_from_index(space: StateSpace, index: int) -> list[int]:
    """Canonical table of map ``index``: digits of a base-|X| counter with
    the rank-0 entry most significant."""
    size = space.size
    if not 0 <= index < map_count(space):
        raise DomainError(f"map index {index} out of range")
    table = [0] * size
    for r in range(size - 1, -1, -1):
        index, table[r] = divmod(index, size)
    return table


def enumerate_networks(space: StateSpace) -> Iterator[NetworkMap]:
    """Every map of the space exactly once, in canonical index order."""
    total = map_count(space)
    if total > ENUMERATION_LIMIT:
        raise DomainError(
            f"{total} maps exceed the enumeration limit of {ENUMERATION_LIMIT}; "
            "use sampling instead"
        )
    size = space.size
    table = [0] * size
    for _ in range(total):
        yield NetworkMap(space, list(table))
        # increment the base-|X| counter, least significant entry last
        r = size - 1
        while r >= 0:
            table[r] += 1
            if table[r] < size:
                break
            table[r] = 0
            r -= 1


def sample_tables(space: StateSpace, count: int, seed: int) -> np.ndarray:
    """Uniform i.i.d. image-rank tables, (count, |X|); same seed, same stream."""
    if count < 0:
        raise DomainError("count must be non-negative")
    rng = np.random.default_rng(seed)
    return rng.integers(0, space.size, size=(count, space.size), dtype=np.int64)


def sample_networks(space: StateSpace, count: int, seed: int) -> Iterator[NetworkMap]:
    """Seeded uniform map stream as NetworkMap objects."""
    for row in sample_tables(space, count, seed):
        yield NetworkMap(space, row.tolist())


@dataclass
class SweepSummary:
    space: StateSpace
    mode: str
    count: int
    seed: Optional[int]
    checks: tuple[str, ...]
    engine: str
    jobs: int
    analyzed: int = 0
    counts: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    question_candidates: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def violation_free(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "schema": "negcirc.sweep.v1",
            "space": [list(iv) for iv in self.space.intervals],
            "mode": self.mode,
            "count": self.count,
            "seed": self.seed,
            "checks": list(self.checks),
            "engine": self.engine,
            "jobs": self.jobs,
            "analyzed": self.analyzed,
            "counts": dict(self.counts),
            "violations": list(self.violations),
            "question_candidates": {
                k: list(v) for k, v in self.question_candidates.items()
            },
            "witnesses": dict(self.witnesses),
            "elapsed_seconds": self.elapsed,
        }


def _record(space: StateSpace, source: str, index: int, table: Sequence[int]) -> dict:
    return {
        "source": source,
        "index": int(index),
        "table": [list(space.unrank(int(img))) for img in table],
    }


def replay_record(space: StateSpace, record: dict) -> bool:
    """Re-verify a violation or candidate record from its serialized table."""
    net = NetworkMap.from_images(space, record["table"])
    if "check" in record:
        check = record["check"]
        facts = compute_facts(net, [check], questions=False)
        return not evaluate_checks(facts, [check])[check]["holds"]
    kind = record["kind"]
    facts = compute_facts(net, (), questions=True)
    return question_flags(facts)[kind]


class _Partial:
    """Scan results for one chunk, mergeable in stream order."""

    def __init__(self):
        self.analyzed = 0
        self.counts: dict[str, int] = {}
        self.violations: list[dict] = []
        self.candidates: dict[str, list[dict]] = {
            Q_OSCILLATION: [],
            Q_NO_FIXED_POINT: [],
        }
        self.cyclic_refs: list[tuple[str, int, tuple[int, ...]]] = []


def _scan_per_map(
    space: StateSpace,
    rows: Iterable[tuple[str, int, Sequence[int]]],
    checks: Sequence[str],
    questions: bool,
    ref_cap: int,
) -> _Partial:
    part = _Partial()
    for source, index, table in rows:
        net = NetworkMap(space, table)
        facts = compute_facts(net, checks, questions=questions)
        part.analyzed += 1
        for name, attr, direct in _COUNTER_FIELDS:
            value = getattr(facts, attr)
            if value is not None:
                hit = bool(value) if direct else not value
                part.counts[name] = part.counts.get(name, 0) + int(hit)
        verdicts = evaluate_checks(facts, checks)
        for check, verdict in verdicts.items():
            if not verdict["holds"]:
                rec = _record(space, source, index, net.table)
                rec["check"] = check
                part.violations.append(rec)
        if questions:
            flags = question_flags(facts)
            for kind, flag in flags.items():
                if flag:
                    rec = _record(space, source, index, net.table)
                    rec["kind"] = kind
                    part.candidates[kind].append(rec)
        if len(part.cyclic_refs) < ref_cap and (
            facts.async_cyclic or facts.unitary_cyclic
        ):
            part.cyclic_refs.append((source, index, tuple(net.table)))
    return part


def _per_map_worker(args) -> _Partial:
    intervals, kind, start, payload, checks, questions, ref_cap = args
    space = StateSpace(intervals)
    if kind == "range":
        rows = (
            ("stream", k, table_from_index(space, k)) for k in range(start, payload)
        )
    else:
        rows = (
            ("stream", start + k, [int(v) for v in row])
            for k, row in enumerate(payload)
        )
    return _scan_per_map(space, rows, checks, questions, ref_cap)


def _needs(checks: set[str], questions: bool) -> dict[str, bool]:
    return {
        "dyn": bool(checks & {DYN_WITHIN_GLOBAL, UNITARY_DYN_WITHIN}),
        "locals": questions
        or bool(
            checks
            & {LOCAL_UNION_GLOBAL, MULTI_ATTRACTOR_POSITIVE, ACYCLIC_LOCALS_CONVERGENCE}
        ),
        "unitary_mask": bool(
            checks & {UNITARY_CYCLIC_NEG, UNITARY_NEGFREE_FIXED, UNITARY_DYN_WITHIN}
        ),
    }


def _scan_bitset(
    space: StateSpace,
    batches: Iterable[tuple[int, np.ndarray]],
    checks: Sequence[str],
    questions: bool,
    ref_cap: int,
) -> _Partial:
    n = space.n
    check_set = set(checks)
    need = _needs(check_set, questions)
    part = _Partial()
    for start, tables in batches:
        facts = analyze_batch(
            n,
            tables,
            need_dyn=need["dyn"],
            need_locals=need["locals"],
            need_unitary_mask=need["unitary_mask"],
        )
        size = tables.shape[0]
        part.analyzed += size

        available = {
            "asynchronous_cyclic": facts.has_cyclic,
            "unitary_cyclic": facts.has_cyclic,
            "fixed_point_free": ~facts.has_fixed,
            "global_negative_circuit": facts.global_neg,
            "unitary_negative_circuit": facts.unitary_neg,
            "local_negative_free": facts.locals_neg_free,
        }
        for name, arr in available.items():
            if arr is not None:
                part.counts[name] = part.counts.get(name, 0) + int(arr.sum())

        failures = {}
        for check in checks:
            if check == CYCLIC_NEG:
                bad = facts.has_cyclic & ~facts.global_neg
            elif check == UNITARY_CYCLIC_NEG:
                bad = facts.has_cyclic & ~facts.unitary_neg
            elif check == NEGFREE_FIXED:
                bad = ~facts.global_neg & ~facts.has_fixed
            elif check == UNITARY_NEGFREE_FIXED:
                bad = ~facts.unitary_neg & ~facts.has_fixed
            elif check == DYN_WITHIN_GLOBAL:
                bad = ~facts.dyn_within_global
            elif check == UNITARY_DYN_WITHIN:
                bad = ~facts.unitary_dyn_within
            elif check == LOCAL_UNION_GLOBAL:
                bad = ~facts.locals_union_is_global
            elif check == CIRCUIT_FREE_CONVERGENCE:
                bad = ~facts.global_any & ~facts.converges
            elif check == MULTI_ATTRACTOR_POSITIVE:
                bad = (facts.attractor_count >= 2) & ~facts.locals_pos_any
            elif check == ACYCLIC_LOCALS_CONVERGENCE:
                bad = facts.locals_all_acyclic & ~facts.converges
            else:
                raise DomainError(f"unknown check {check!r}")
            failures[check] = bad
        for check, bad in failures.items():
            for k in np.nonzero(bad)[0]:
                rec = _record(space, "stream", start + int(k), tables[k])
                rec["check"] = check
                part.violations.append(rec)
        if questions:
            q1 = facts.has_cyclic & facts.locals_neg_free
            q2 = facts.locals_neg_free & ~facts.has_fixed
            for kind, flags in ((Q_OSCILLATION, q1), (Q_NO_FIXED_POINT, q2)):
                for k in np.nonzero(flags)[0]:
                    rec = _record(space, "stream", start + int(k), tables[k])
                    rec["kind"] = kind
                    part.candidates[kind].append(rec)
        if len(part.cyclic_refs) < ref_cap:
            for k in np.nonzero(facts.has_cyclic)[0]:
                if len(part.cyclic_refs) >= ref_cap:
                    break
                part.cyclic_refs.append(
                    ("stream", start + int(k), tuple(int(v) for v in tables[k]))
                )
    return part


def _witness_pass(
    space: StateSpace,
    refs: Sequence[tuple[str, int, tuple[int, ...]]],
    cap: int,
) -> dict:
    attempted = 0
    verified = 0
    failures = []
    for source, index, table in refs:
        if attempted >= cap:
            break
        net = NetworkMap(space, table)
        seen_cyclic = False
        for kind, base in (("asynchronous", net), ("unitary", net.unitary_map())):
            aset = attractors(build_stg(base, ASYNC))
            for a in aset.cyclic:
                seen_cyclic = True
                if attempted >= cap:
                    break
                attempted += 1
                trace = extract_negative_circuit(base, a.states)
                if verify_witness(base, trace):
                    verified += 1
                else:
                    rec = _record(space, source, index, table)
                    rec["graph"] = kind
                    failures.append(rec)
        if not seen_cyclic:
            raise ContractError(
                "engine flagged a cyclic attractor the reference path cannot find"
            )
    return {
        "attempted": attempted,
        "verified": verified,
        "cap": cap,
        "failures": failures,
    }


def _merge(parts: Sequence[_Partial], ref_cap: int) -> _Partial:
    merged = _Partial()
    for part in parts:
        merged.analyzed += part.analyzed
        for key, v in part.counts.items():
            merged.counts[key] = merged.counts.get(key, 0) + v
        merged.violations.extend(part.violations)
        for kind, recs in part.candidates.items():
            merged.candidates[kind].extend(recs)
        room = ref_cap - len(merged.cyclic_refs)
        if room > 0:
            merged.cyclic_refs.extend(part.cyclic_refs[:room])
    return merged


def sweep(
    space: StateSpace,
    mode: str = "exhaustive",
    count: Optional[int] = None,
    seed: Optional[int] = None,
    checks: Sequence[str] = ALL_CHECKS,
    questions: bool = True,
    jobs: int = 1,
    witness_cap: int = DEFAULT_WITNESS_CAP,
    include: Sequence[NetworkMap] = (),
) -> SweepSummary:
    """Scan a family of networks and aggregate verdicts.

    ``include`` networks are analyzed first (source "injected"), then the
    stream: every map of the space in canonical order for ``exhaustive``,
    or ``count`` seeded uniform samples for ``sample``.  Output does not
    depend on ``jobs``.
    """
    checks = tuple(checks)
    for c in checks:
        if c not in ALL_CHECKS:
            raise DomainError(f"unknown check {c!r}")
    if mode not in ("exhaustive", "sample"):
        raise DomainError(f"unknown mode {mode!r}")
    if mode == "sample":
        if count is None or seed is None:
            raise DomainError("sample mode needs count and seed")
        stream_total = count
    else:
        stream_total = map_count(space)
        if stream_total > ENUMERATION_LIMIT:
            raise DomainError(
                f"{stream_total} maps exceed the enumeration limit; use sample mode"
            )
    for net in include:
        if net.space != space:
            raise DomainError("included network lives on a different space")

    use_bitset = space.is_boolean and space.n <= MAX_COMPONENTS
    started = time.perf_counter()
    parts = []

    if include:
        rows = (
            ("injected", k, list(net.table)) for k, net in enumerate(include)
        )
        parts.append(_scan_per_map(space, rows, checks, questions, witness_cap))

    if use_bitset:
        engine = "bitset"

        def batches():
            if mode == "exhaustive":
                for a in range(0, stream_total, _BATCH):
                    b = min(a + _BATCH, stream_total)
                    yield a, decode_tables(space.n, np.arange(a, b, dtype=np.int64))
            else:
                all_tables = sample_tables(space, count, seed).astype(np.uint8)
                for a in range(0, stream_total, _BATCH):
                    yield a, all_tables[a : a + _BATCH]

        parts.append(_scan_bitset(space, batches(), checks, questions, witness_cap))
    else:
        engine = "per_map"
        sampled = sample_tables(space, count, seed) if mode == "sample" else None
        if jobs <= 1 or stream_total < 2:
            if mode == "exhaustive":
                rows = (
                    ("stream", k, net.table)
                    for k, net in enumerate(enumerate_networks(space))
                )
            else:
                rows = (
                    ("stream", k, row.tolist()) for k, row in enumerate(sampled)
                )
            parts.append(_scan_per_map(space, rows, checks, questions, witness_cap))
        else:
            chunk = max(1, (stream_total + jobs * 4 - 1) // (jobs * 4))
            work = []
            for a in range(0, stream_total, chunk):
                b = min(a + chunk, stream_total)
                if mode == "exhaustive":
                    work.append(
                        (space.intervals, "range", a, b, checks, questions, witness_cap)
                    )
                else:
                    work.append(
                        (
                            space.intervals,
                            "rows",
                            a,
                            sampled[a:b].tolist(),
                            checks,
                            questions,
                            witness_cap,
                        )
                    )
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                parts.extend(pool.map(_per_map_worker, work))

    merged = _merge(parts, witness_cap)
    witness_report = _witness_pass(space, merged.cyclic_refs, witness_cap)

    summary = SweepSummary(
        space=space,
        mode=mode,
        count=stream_total,
        seed=seed,
        checks=checks,
        engine=engine,
        jobs=jobs,
        analyzed=merged.analyzed,
        counts=merged.counts,
        violations=merged.violations,
        question_candidates=merged.candidates,
        witnesses=witness_report,
        elapsed=time.perf_counter() - started,
    )
    return summary
