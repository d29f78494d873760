"""Per-network fact extraction and implication checking.

Every check is an implication evaluated on one network; it fails only
when its hypothesis holds and its conclusion does not.  The first eight
are established results, so a failure always means an implementation
bug; the two question flags mark candidate counterexamples to open
questions rather than violations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .attractors import AttractorSet, attractors, fixed_points
from .circuits import (
    first_negative_circuit,
    has_circuit,
    has_negative_circuit,
    has_positive_circuit,
)
from .dynamics import ASYNC, UNITARY, build_stg
from .errors import ContractError, DomainError
from .interaction import (
    SignedDigraph,
    dynamic_local_ig_mask,
    global_ig_mask,
    local_ig_mask,
    unitary_ig_mask,
)
from .model import NetworkMap
from .witness import WitnessTrace, extract_negative_circuit, verify_witness

# Implication checks, named by what they assert.
CYCLIC_NEG = "cyclic_attractor_implies_negative_circuit"
UNITARY_CYCLIC_NEG = "unitary_cyclic_attractor_implies_negative_circuit"
NEGFREE_FIXED = "negative_circuit_free_implies_fixed_point"
UNITARY_NEGFREE_FIXED = "unitary_negative_circuit_free_implies_fixed_point"
DYN_WITHIN_GLOBAL = "step_influences_within_global_graph"
UNITARY_DYN_WITHIN = "unitary_step_influences_within_unitary_graph"
LOCAL_UNION_GLOBAL = "local_graphs_union_is_global_graph"
CIRCUIT_FREE_CONVERGENCE = "circuit_free_implies_global_convergence"
MULTI_ATTRACTOR_POSITIVE = "multiple_attractors_imply_local_positive_circuit"
ACYCLIC_LOCALS_CONVERGENCE = "acyclic_locals_imply_unique_fixed_point"

ALL_CHECKS = (
    CYCLIC_NEG,
    UNITARY_CYCLIC_NEG,
    NEGFREE_FIXED,
    UNITARY_NEGFREE_FIXED,
    DYN_WITHIN_GLOBAL,
    UNITARY_DYN_WITHIN,
    LOCAL_UNION_GLOBAL,
    CIRCUIT_FREE_CONVERGENCE,
    MULTI_ATTRACTOR_POSITIVE,
    ACYCLIC_LOCALS_CONVERGENCE,
)
CORE_CHECKS = (CYCLIC_NEG, UNITARY_CYCLIC_NEG, NEGFREE_FIXED, UNITARY_NEGFREE_FIXED)

# Candidate kinds for the open questions.
Q_OSCILLATION = "oscillation_without_local_negative_circuit"
Q_NO_FIXED_POINT = "fixed_point_free_without_local_negative_circuit"
QUESTION_KINDS = (Q_OSCILLATION, Q_NO_FIXED_POINT)


def _mask_circuit_fns(n: int):
    """(has_negative, has_positive, has_any) over arc masks.

    Table lookups for n <= 3 keep sweeps fast; larger graphs fall back
    to the exact detectors on materialized digraphs.
    """
    if n <= 3:
        from .boolfast import circuit_tables

        neg, pos, anyc = circuit_tables(n)
        return (
            lambda m: bool(neg[m]),
            lambda m: bool(pos[m]),
            lambda m: bool(anyc[m]),
        )

    def _graph(m: int) -> SignedDigraph:
        return SignedDigraph.from_mask(n, m)

    return (
        lambda m: has_negative_circuit(_graph(m)),
        lambda m: has_positive_circuit(_graph(m)),
        lambda m: has_circuit(_graph(m)),
    )


@dataclass
class InstanceFacts:
    """Boolean facts about one network, shared by all checks.

    Only the fields needed by the requested checks are filled; the rest
    stay None.  ``unitary_net`` is kept so callers can reuse it.
    """

    net: NetworkMap
    async_cyclic: Optional[bool] = None
    unitary_cyclic: Optional[bool] = None
    unitary_attractor_count: Optional[int] = None
    has_fixed: Optional[bool] = None
    fixed_count: Optional[int] = None
    global_neg: Optional[bool] = None
    unitary_neg: Optional[bool] = None
    global_any_circuit: Optional[bool] = None
    dyn_within_global: Optional[bool] = None
    unitary_dyn_within: Optional[bool] = None
    locals_union_is_global: Optional[bool] = None
    locals_neg_free: Optional[bool] = None
    locals_pos_any: Optional[bool] = None
    locals_all_acyclic: Optional[bool] = None
    async_converges: Optional[bool] = None
    unitary_converges: Optional[bool] = None
    async_attractors: Optional[AttractorSet] = None
    unitary_attractors: Optional[AttractorSet] = None
    unitary_net: Optional[NetworkMap] = None
    global_mask: Optional[int] = None
    unitary_mask: Optional[int] = None


def _reaches_everywhere(graph, target: int) -> bool:
    """True iff every vertex has a path to ``target``."""
    size = graph.vertex_count
    preds = [[] for _ in range(size)]
    for r in range(size):
        for t in graph.successors(r):
            preds[t].append(r)
    seen = bytearray(size)
    seen[target] = 1
    stack = [target]
    count = 1
    while stack:
        r = stack.pop()
        for p in preds[r]:
            if not seen[p]:
                seen[p] = 1
                count += 1
                stack.append(p)
    return count == size


def compute_facts(
    net: NetworkMap,
    checks: Sequence[str] = ALL_CHECKS,
    questions: bool = True,
    keep_attractors: bool = False,
) -> InstanceFacts:
    """Fill exactly the facts the requested checks and questions need."""
    for c in checks:
        if c not in ALL_CHECKS:
            raise DomainError(f"unknown check {c!r}")
    checks = set(checks)
    facts = InstanceFacts(net)
    space = net.space
    n = space.n

    need_async = bool(
        checks & {CYCLIC_NEG, CIRCUIT_FREE_CONVERGENCE}
    ) or questions or keep_attractors
    need_unitary_graph = bool(
        checks
        & {UNITARY_CYCLIC_NEG, MULTI_ATTRACTOR_POSITIVE, ACYCLIC_LOCALS_CONVERGENCE}
    ) or questions or keep_attractors
    need_unitary_net = need_unitary_graph or UNITARY_DYN_WITHIN in checks
    need_global_mask = bool(
        checks
        & {CYCLIC_NEG, NEGFREE_FIXED, DYN_WITHIN_GLOBAL, LOCAL_UNION_GLOBAL,
           CIRCUIT_FREE_CONVERGENCE}
    )
    need_unitary_mask = bool(
        checks & {UNITARY_CYCLIC_NEG, UNITARY_NEGFREE_FIXED, UNITARY_DYN_WITHIN}
    )
    need_locals = bool(
        checks
        & {LOCAL_UNION_GLOBAL, MULTI_ATTRACTOR_POSITIVE, ACYCLIC_LOCALS_CONVERGENCE}
    ) or questions
    need_fixed = bool(
        checks
        & {NEGFREE_FIXED, UNITARY_NEGFREE_FIXED, CIRCUIT_FREE_CONVERGENCE,
           ACYCLIC_LOCALS_CONVERGENCE}
    ) or questions

    has_neg, has_pos, has_any = _mask_circuit_fns(n)

    if need_fixed:
        fixed_ranks = [r for r, img in enumerate(net.table) if img == r]
        facts.fixed_count = len(fixed_ranks)
        facts.has_fixed = bool(fixed_ranks)

    async_graph = None
    if need_async:
        async_graph = build_stg(net, ASYNC)
        aset = attractors(async_graph)
        facts.async_cyclic = aset.has_cyclic
        if keep_attractors:
            facts.async_attractors = aset

    if need_unitary_net:
        facts.unitary_net = net.unitary_map()
    if need_unitary_graph:
        ugraph = build_stg(facts.unitary_net, ASYNC)
        uset = attractors(ugraph)
        facts.unitary_cyclic = uset.has_cyclic
        facts.unitary_attractor_count = len(uset)
        if keep_attractors:
            facts.unitary_attractors = uset
    else:
        ugraph = None

    if need_global_mask:
        facts.global_mask = global_ig_mask(net)
        facts.global_neg = has_neg(facts.global_mask)
    if need_unitary_mask:
        facts.unitary_mask = unitary_ig_mask(net)
        facts.unitary_neg = has_neg(facts.unitary_mask)

    if DYN_WITHIN_GLOBAL in checks:
        gmask = facts.global_mask
        facts.dyn_within_global = all(
            dynamic_local_ig_mask(net, r) & ~gmask == 0 for r in range(space.size)
        )
    if UNITARY_DYN_WITHIN in checks:
        umask = facts.unitary_mask
        unet = facts.unitary_net
        facts.unitary_dyn_within = all(
            dynamic_local_ig_mask(unet, r) & ~umask == 0 for r in range(space.size)
        )

    if need_locals:
        union = 0
        neg_any = False
        pos_any = False
        acyclic = True
        for r in range(space.size):
            lm = local_ig_mask(net, r)
            union |= lm
            if not neg_any and has_neg(lm):
                neg_any = True
            if not pos_any and has_pos(lm):
                pos_any = True
            if acyclic and has_any(lm):
                acyclic = False
        facts.locals_neg_free = not neg_any
        facts.locals_pos_any = pos_any
        facts.locals_all_acyclic = acyclic
        if LOCAL_UNION_GLOBAL in checks:
            facts.locals_union_is_global = union == facts.global_mask

    if CIRCUIT_FREE_CONVERGENCE in checks:
        facts.global_any_circuit = has_any(facts.global_mask)
        if not facts.global_any_circuit:
            if facts.fixed_count == 1:
                xi = next(r for r, img in enumerate(net.table) if img == r)
                facts.async_converges = _reaches_everywhere(async_graph, xi)
            else:
                facts.async_converges = False
    if ACYCLIC_LOCALS_CONVERGENCE in checks and facts.locals_all_acyclic:
        if facts.fixed_count == 1:
            xi = next(r for r, img in enumerate(net.table) if img == r)
            facts.unitary_converges = _reaches_everywhere(ugraph, xi)
        else:
            facts.unitary_converges = False

    return facts


def evaluate_checks(
    facts: InstanceFacts, checks: Sequence[str] = ALL_CHECKS
) -> dict[str, dict]:
    """hypothesis / conclusion / holds for each requested check."""
    out = {}

    def record(check, hyp, concl):
        out[check] = {
            "hypothesis": bool(hyp),
            "conclusion": None if concl is None else bool(concl),
            "holds": (not hyp) or bool(concl),
        }

    for check in checks:
        if check == CYCLIC_NEG:
            record(check, facts.async_cyclic, facts.global_neg)
        elif check == UNITARY_CYCLIC_NEG:
            record(check, facts.unitary_cyclic, facts.unitary_neg)
        elif check == NEGFREE_FIXED:
            record(check, not facts.global_neg, facts.has_fixed)
        elif check == UNITARY_NEGFREE_FIXED:
            record(check, not facts.unitary_neg, facts.has_fixed)
        elif check == DYN_WITHIN_GLOBAL:
            record(check, True, facts.dyn_within_global)
        elif check == UNITARY_DYN_WITHIN:
            record(check, True, facts.unitary_dyn_within)
        elif check == LOCAL_UNION_GLOBAL:
            record(check, True, facts.locals_union_is_global)
        elif check == CIRCUIT_FREE_CONVERGENCE:
            hyp = not facts.global_any_circuit
            record(check, hyp, facts.async_converges if hyp else None)
        elif check == MULTI_ATTRACTOR_POSITIVE:
            hyp = facts.unitary_attractor_count >= 2
            record(check, hyp, facts.locals_pos_any if hyp else None)
        elif check == ACYCLIC_LOCALS_CONVERGENCE:
            hyp = facts.locals_all_acyclic
            record(check, hyp, facts.unitary_converges if hyp else None)
        else:
            raise DomainError(f"unknown check {check!r}")
    return out


def question_flags(facts: InstanceFacts) -> dict[str, bool]:
    """Candidate-counterexample flags for the two open questions."""
    oscillating = bool(facts.async_cyclic) or bool(facts.unitary_cyclic)
    return {
        Q_OSCILLATION: oscillating and bool(facts.locals_neg_free),
        Q_NO_FIXED_POINT: bool(facts.locals_neg_free) and not facts.has_fixed,
    }


@dataclass
class AnalysisReport:
    """Everything check_instance learned about one network."""

    net: NetworkMap
    fixed: list[tuple[int, ...]]
    async_attractors: AttractorSet
    unitary_attractors: AttractorSet
    global_graph: SignedDigraph
    unitary_graph: SignedDigraph
    circuit_facts: dict[str, bool]
    checks: dict[str, dict]
    questions: dict[str, bool]
    witnesses: list[dict] = field(default_factory=list)

    @property
    def violations(self) -> list[str]:
        return [c for c, v in self.checks.items() if not v["holds"]]

    def to_dict(self) -> dict:
        space = self.net.space
        unrank = space.unrank

        def states(ranks):
            return [list(unrank(r)) for r in sorted(ranks)]

        def arcs(graph):
            return [[j + 1, "+" if s > 0 else "-", i + 1] for j, s, i in graph.arcs]

        return {
            "schema": "negcirc.report.v1",
            "space": [list(iv) for iv in space.intervals],
            "table": [list(unrank(img)) for img in self.net.table],
            "fixed_points": [list(x) for x in self.fixed],
            "attractors": {
                "asynchronous": [
                    {"states": states(a.states), "cyclic": a.cyclic}
                    for a in self.async_attractors
                ],
                "unitary": [
                    {"states": states(a.states), "cyclic": a.cyclic}
                    for a in self.unitary_attractors
                ],
            },
            "interaction": {
                "global": {"arcs": arcs(self.global_graph)},
                "unitary": {"arcs": arcs(self.unitary_graph)},
            },
            "circuits": dict(self.circuit_facts),
            "checks": self.checks,
            "question_candidates": self.questions,
            "witnesses": self.witnesses,
            "violations": self.violations,
        }


def _attach_evidence(report: "AnalysisReport", facts: InstanceFacts) -> None:
    """Add to each verdict the objects needed to re-check it by hand."""
    net = report.net
    space = net.space
    unrank = space.unrank

    def states(ranks):
        return [list(unrank(r)) for r in sorted(ranks)]

    def arcs(circuit):
        if circuit is None:
            return None
        return [[j + 1, "+" if s > 0 else "-", i + 1] for j, s, i in circuit.arcs]

    def first_cyclic(aset):
        for a in aset.cyclic:
            return states(a.states)
        return None

    def first_fixed():
        return list(report.fixed[0]) if report.fixed else None

    def dyn_escape(base, graph):
        mask = graph.to_mask()
        for r in range(space.size):
            stray = dynamic_local_ig_mask(base, r) & ~mask
            if stray:
                arc = SignedDigraph.from_mask(space.n, stray).arcs[0]
                return {
                    "state": list(unrank(r)),
                    "arc": [arc[0] + 1, "+" if arc[1] > 0 else "-", arc[2] + 1],
                }
        return None

    def unreached(graph):
        if report.fixed and len(report.fixed) == 1:
            target = space.rank(report.fixed[0])
            if not _reaches_everywhere(graph, target):
                seen = {target}
                preds = [[] for _ in range(space.size)]
                for r in range(space.size):
                    for t in graph.successors(r):
                        preds[t].append(r)
                stack = [target]
                while stack:
                    for p in preds[stack.pop()]:
                        if p not in seen:
                            seen.add(p)
                            stack.append(p)
                missing = next(r for r in range(space.size) if r not in seen)
                return list(unrank(missing))
        return None

    for check, verdict in report.checks.items():
        if check == CYCLIC_NEG:
            verdict["evidence"] = {
                "cyclic_attractor": first_cyclic(report.async_attractors),
                "negative_circuit": arcs(first_negative_circuit(report.global_graph)),
            }
        elif check == UNITARY_CYCLIC_NEG:
            verdict["evidence"] = {
                "cyclic_attractor": first_cyclic(report.unitary_attractors),
                "negative_circuit": arcs(first_negative_circuit(report.unitary_graph)),
            }
        elif check in (NEGFREE_FIXED, UNITARY_NEGFREE_FIXED):
            verdict["evidence"] = {"fixed_point": first_fixed()}
        elif check == DYN_WITHIN_GLOBAL:
            verdict["evidence"] = {"escaping_influence": dyn_escape(net, report.global_graph)}
        elif check == UNITARY_DYN_WITHIN:
            verdict["evidence"] = {
                "escaping_influence": dyn_escape(facts.unitary_net, report.unitary_graph)
            }
        elif check == LOCAL_UNION_GLOBAL:
            union = 0
            for r in range(space.size):
                union |= local_ig_mask(net, r)
            diff = union ^ report.global_graph.to_mask()
            verdict["evidence"] = {
                "arc_difference": [
                    [j + 1, "+" if s > 0 else "-", i + 1]
                    for j, s, i in SignedDigraph.from_mask(space.n, diff).arcs
                ]
            }
        elif check == CIRCUIT_FREE_CONVERGENCE:
            ev = {"fixed_points": [list(x) for x in report.fixed]}
            if verdict["hypothesis"]:
                ev["unreached_state"] = unreached(build_stg(net, ASYNC))
            verdict["evidence"] = ev
        elif check == MULTI_ATTRACTOR_POSITIVE:
            state = None
            if verdict["hypothesis"]:
                _, has_pos, _ = _mask_circuit_fns(space.n)
                for r in range(space.size):
                    if has_pos(local_ig_mask(net, r)):
                        state = list(unrank(r))
                        break
            verdict["evidence"] = {
                "attractor_count": facts.unitary_attractor_count,
                "state_with_positive_local_circuit": state,
            }
        elif check == ACYCLIC_LOCALS_CONVERGENCE:
            ev = {"fixed_points": [list(x) for x in report.fixed]}
            if verdict["hypothesis"]:
                ev["unreached_state"] = unreached(
                    build_stg(facts.unitary_net, ASYNC)
                )
            verdict["evidence"] = ev


def _witness_dict(net: NetworkMap, graph_kind: str, trace: WitnessTrace, ok: bool) -> dict:
    unrank = net.space.unrank
    return {
        "graph": graph_kind,
        "attractor": [list(unrank(r)) for r in sorted(trace.attractor)],
        "circuit": [
            [j + 1, "+" if s > 0 else "-", i + 1] for j, s, i in trace.circuit.arcs
        ],
        "sign": trace.circuit.sign,
        "support": [
            {
                "arc": [a[0] + 1, "+" if a[1] > 0 else "-", a[2] + 1],
                "state": list(unrank(r)),
            }
            for a, r in zip(trace.circuit.arcs, trace.support)
        ],
        "pinned_components": [c + 1 for c in trace.frozen],
        "verified": ok,
    }


def check_instance(
    net: NetworkMap,
    checks: Sequence[str] = ALL_CHECKS,
    with_witnesses: bool = True,
) -> AnalysisReport:
    """Full per-network report: facts, implication verdicts, witnesses.

    Witnesses are extracted for every cyclic attractor of the
    asynchronous graph (against the map itself) and of the unitary graph
    (against the unitary map), then re-verified independently.
    """
    facts = compute_facts(net, checks, questions=True, keep_attractors=True)
    space = net.space
    if facts.global_mask is None:
        facts.global_mask = global_ig_mask(net)
    if facts.unitary_mask is None:
        facts.unitary_mask = unitary_ig_mask(net)
    has_neg, has_pos, has_any = _mask_circuit_fns(space.n)
    if facts.global_neg is None:
        facts.global_neg = has_neg(facts.global_mask)
    if facts.unitary_neg is None:
        facts.unitary_neg = has_neg(facts.unitary_mask)
    if facts.has_fixed is None:
        fixed_ranks = [r for r, img in enumerate(net.table) if img == r]
        facts.fixed_count = len(fixed_ranks)
        facts.has_fixed = bool(fixed_ranks)

    global_graph = SignedDigraph.from_mask(space.n, facts.global_mask)
    unitary_graph = SignedDigraph.from_mask(space.n, facts.unitary_mask)
    circuit_facts = {
        "global_negative": bool(facts.global_neg),
        "global_positive": has_pos(facts.global_mask),
        "global_any": has_any(facts.global_mask),
        "unitary_negative": bool(facts.unitary_neg),
        "local_negative_free": bool(facts.locals_neg_free),
        "local_all_acyclic": bool(facts.locals_all_acyclic),
    }

    report = AnalysisReport(
        net=net,
        fixed=fixed_points(net),
        async_attractors=facts.async_attractors,
        unitary_attractors=facts.unitary_attractors,
        global_graph=global_graph,
        unitary_graph=unitary_graph,
        circuit_facts=circuit_facts,
        checks=evaluate_checks(facts, checks),
        questions=question_flags(facts),
    )
    _attach_evidence(report, facts)

    if with_witnesses:
        for kind, base, aset in (
            ("asynchronous", net, facts.async_attractors),
            ("unitary", facts.unitary_net, facts.unitary_attractors),
        ):
            for a in aset.cyclic:
                trace = extract_negative_circuit(base, a.states)
                ok = verify_witness(base, trace)
                report.witnesses.append(_witness_dict(base, kind, trace, ok))
                if not ok:
                    raise ContractError("witness failed independent verification")
    return report
