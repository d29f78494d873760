"""Command-line surface.

Commands: analyze, stg, ig, witness, sweep, examples.  Exit codes:
0 success, 1 usage or parse error, 2 theorem violation detected by a
sweep, 3 internal contract failure or corpus mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys

from .attractors import attractors
from .corpus import EXAMPLE_NUMBERS, example_network, run_corpus
from .dotexport import export_dot
from .dynamics import ASYNC, SYNC, UNITARY, build_stg
from .errors import ContractError, NegcircError
from .interaction import dynamic_local_ig, global_ig, local_ig, unitary_ig
from .model import NetworkMap
from .netfile import parse_network_file, parse_space_spec, serialize_network
from .sweep import DEFAULT_WITNESS_CAP, sweep
from .verifier import ALL_CHECKS, CORE_CHECKS, check_instance

USAGE_ERROR = 1
VIOLATION = 2
CONTRACT_FAILURE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _load_network(path: str) -> NetworkMap:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_network_file(handle.read())


def _arc_text(arc) -> str:
    j, s, i = arc
    return f"{j + 1} -> {i + 1} [{'+' if s > 0 else '-'}]"


def _state_text(space, ranks) -> str:
    return "{" + ", ".join(str(space.unrank(r)) for r in sorted(ranks)) + "}"


def _print_report(report) -> None:
    space = report.net.space
    print(f"space: {space!r}  ({space.size} states)")
    print(f"fixed points: {report.fixed if report.fixed else 'none'}")
    for kind, aset in (
        ("asynchronous", report.async_attractors),
        ("unitary", report.unitary_attractors),
    ):
        print(f"{kind} attractors:")
        for a in aset:
            tag = "cyclic" if a.cyclic else "stable"
            print(f"  [{tag}] {_state_text(space, a.states)}")
    for name, graph in (
        ("global", report.global_graph),
        ("unitary", report.unitary_graph),
    ):
        arcs = ", ".join(_arc_text(a) for a in graph.arcs) or "none"
        print(f"{name} interaction graph: {arcs}")
    for key, value in report.circuit_facts.items():
        print(f"{key}: {value}")
    print("checks:")
    for check, verdict in report.checks.items():
        status = "ok" if verdict["holds"] else "VIOLATED"
        print(
            f"  {check}: {status} (hypothesis={verdict['hypothesis']}, "
            f"conclusion={verdict['conclusion']})"
        )
    for kind, flag in report.questions.items():
        if flag:
            print(f"candidate counterexample: {kind}")
    for w in report.witnesses:
        arcs = ", ".join(
            f"{a[0]} -> {a[2]} [{a[1]}]" for a in w["circuit"]
        )
        print(
            f"witness ({w['graph']}): sign {w['sign']} circuit {arcs}; "
            f"verified={w['verified']}"
        )


def _cmd_analyze(args) -> int:
    report = check_instance(_load_network(args.file))
    if args.json:
        print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    else:
        _print_report(report)
    return 0


def _cmd_stg(args) -> int:
    net = _load_network(args.file)
    graph = build_stg(net, args.flavor)
    text = export_dot(graph)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_ig(args) -> int:
    net = _load_network(args.file)
    kind = args.kind
    if kind == "global":
        graph = global_ig(net)
    elif kind == "unitary":
        graph = unitary_ig(net)
    elif kind.startswith("local="):
        state = tuple(int(v) for v in kind[len("local="):].split(","))
        graph = local_ig(net, state)
    elif kind.startswith("dynamic="):
        state = tuple(int(v) for v in kind[len("dynamic="):].split(","))
        graph = dynamic_local_ig(net, state)
    else:
        raise NegcircError(
            f"unknown interaction graph kind {kind!r}; expected global, unitary, "
            "local=<state> or dynamic=<state>"
        )
    text = export_dot(graph)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_witness(args) -> int:
    from .witness import extract_negative_circuit, verify_witness

    net = _load_network(args.file)
    aset = attractors(build_stg(net, ASYNC))
    if args.attractor is not None:
        if not 0 <= args.attractor < len(aset):
            raise NegcircError(
                f"attractor index {args.attractor} out of range 0..{len(aset) - 1}"
            )
        chosen = [aset[args.attractor]]
        if not chosen[0].cyclic:
            raise NegcircError(f"attractor {args.attractor} is a stable state")
    else:
        chosen = list(aset.cyclic)
        if not chosen:
            print("no cyclic attractor in the asynchronous graph")
            return 0
    space = net.space
    for a in chosen:
        trace = extract_negative_circuit(net, a.states)
        ok = verify_witness(net, trace)
        if not ok:
            raise ContractError("extracted witness failed verification")
        arcs = ", ".join(_arc_text(arc) for arc in trace.circuit.arcs)
        supports = ", ".join(str(space.unrank(r)) for r in trace.support)
        print(f"attractor {_state_text(space, a.states)}")
        print(f"  negative circuit: {arcs}")
        print(f"  supporting states: {supports}")
        if trace.frozen:
            print(
                "  pinned components: "
                + ", ".join(str(c + 1) for c in trace.frozen)
            )
        print("  verified: true")
    return 0


def _cmd_sweep(args) -> int:
    space = parse_space_spec(args.space)
    checks = CORE_CHECKS if args.checks == "core" else ALL_CHECKS
    summary = sweep(
        space,
        mode=args.mode,
        count=args.count,
        seed=args.seed,
        checks=checks,
        jobs=args.jobs,
        witness_cap=args.witness_cap,
    )
    if args.json:
        print(json.dumps(summary.to_dict(), indent=2, sort_keys=True))
    else:
        print(
            f"analyzed {summary.analyzed} maps on {space!r} "
            f"({summary.engine} engine, {summary.elapsed:.2f}s)"
        )
        for key, value in sorted(summary.counts.items()):
            print(f"  {key}: {value}")
        print(f"  violations: {len(summary.violations)}")
        for kind, recs in summary.question_candidates.items():
            print(f"  {kind}: {len(recs)} candidate(s)")
        w = summary.witnesses
        print(f"  witnesses verified: {w['verified']}/{w['attempted']}")
        if w["failures"]:
            print(f"  witness failures: {len(w['failures'])}")
    if summary.violations or summary.witnesses["failures"]:
        return VIOLATION
    return 0


def _cmd_examples(args) -> int:
    numbers = (args.number,) if args.number else EXAMPLE_NUMBERS
    outcome = run_corpus(numbers)
    all_ok = True
    for number, rows in outcome.items():
        for label, ok, detail in rows:
            status = "ok" if ok else "MISMATCH"
            suffix = f" ({detail})" if detail else ""
            print(f"example {number}: {label}: {status}{suffix}")
            all_ok &= ok
    if args.serialize:
        net = example_network(args.number) if args.number else None
        if net is not None:
            sys.stdout.write(serialize_network(net))
    return 0 if all_ok else CONTRACT_FAILURE


def build_parser() -> _Parser:
    parser = _Parser(prog="negcirc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full report for one network file")
    p.add_argument("file")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.set_defaults(fn=_cmd_analyze)

    p = sub.add_parser("stg", help="export a state transition graph as DOT")
    p.add_argument("file")
    p.add_argument("--flavor", choices=(ASYNC, UNITARY, SYNC), default=ASYNC)
    p.add_argument("--dot", metavar="OUT", help="write DOT here instead of stdout")
    p.set_defaults(fn=_cmd_stg)

    p = sub.add_parser("ig", help="export an interaction graph as DOT")
    p.add_argument("file")
    p.add_argument(
        "--kind",
        default="global",
        help="global | unitary | local=<v1,v2,...> | dynamic=<v1,v2,...>",
    )
    p.add_argument("--dot", metavar="OUT", help="write DOT here instead of stdout")
    p.set_defaults(fn=_cmd_ig)

    p = sub.add_parser("witness", help="extract negative circuits from cyclic attractors")
    p.add_argument("file")
    p.add_argument("--attractor", type=int, help="index into the attractor list")
    p.set_defaults(fn=_cmd_witness)

    p = sub.add_parser("sweep", help="scan a family of maps for violations")
    p.add_argument("--space", required=True, help="e.g. 0..1^3 or 0..2,0..2")
    p.add_argument("--mode", choices=("exhaustive", "sample"), default="exhaustive")
    p.add_argument("--count", type=int, help="sample size (sample mode)")
    p.add_argument("--seed", type=int, help="sample seed (sample mode)")
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p.add_argument("--checks", choices=("all", "core"), default="all")
    p.add_argument("--witness-cap", type=int, default=DEFAULT_WITNESS_CAP)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("examples", help="run the bundled example corpus")
    p.add_argument("number", nargs="?", type=int, choices=EXAMPLE_NUMBERS)
    p.add_argument(
        "--serialize", action="store_true", help="also print the network file"
    )
    p.set_defaults(fn=_cmd_examples)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ContractError as exc:
        print(f"internal contract failure: {exc}", file=sys.stderr)
        return CONTRACT_FAILURE
    except NegcircError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
