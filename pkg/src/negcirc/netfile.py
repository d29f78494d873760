"""The network file format.

A file is a header plus one body::

    # comments and blank lines are skipped
    intervals: 0..2 0..2
    table:
    0 0 -> 2 0
    0 1 -> 1 0
    ...                     # one row per state, any order, total

or, with per-component update rules instead of an explicit table::

    intervals: 0..3 0..3
    rule f1: if x2 == 3 or (x2 > 0 and x1 >= 2) then 3 else 0
    rule f2: if x1 == 0 or (x1 < 3 and x2 >= 2) then 3 else 0

Mixing ``table:`` rows and ``rule`` lines is rejected.  The serializer
always emits canonical table form, rows in rank order.
"""

from __future__ import annotations

import re

from .errors import NetworkFileError, NegcircError
from .model import NetworkMap, StateSpace
from .rules import compile_network, parse_rule

_INTERVAL_RE = re.compile(r"(-?\d+)\s*\.\.\s*(-?\d+)$")
_RULE_RE = re.compile(r"rule\s+f(\d+)\s*:\s*(.*)$")


def _parse_intervals(payload: str, lineno: int) -> StateSpace:
    parts = [p for p in re.split(r"[,\s]+", payload.strip()) if p]
    if not parts:
        raise NetworkFileError("empty interval list", lineno)
    intervals = []
    for part in parts:
        m = _INTERVAL_RE.match(part)
        if not m:
            raise NetworkFileError(f"bad interval {part!r}, expected lo..hi", lineno)
        intervals.append((int(m.group(1)), int(m.group(2))))
    try:
        return StateSpace(intervals)
    except NegcircError as exc:
        raise NetworkFileError(str(exc), lineno) from exc


def _parse_row(space: StateSpace, payload: str, lineno: int) -> tuple[int, int]:
    halves = payload.split("->")
    if len(halves) != 2:
        raise NetworkFileError("table row needs exactly one '->'", lineno)
    try:
        left = [int(v) for v in halves[0].split()]
        right = [int(v) for v in halves[1].split()]
    except ValueError:
        raise NetworkFileError("table row entries must be integers", lineno)
    if len(left) != space.n or len(right) != space.n:
        raise NetworkFileError(
            f"table row needs {space.n} values on each side of '->'", lineno
        )
    try:
        return space.rank(left), space.rank(right)
    except NegcircError as exc:
        raise NetworkFileError(str(exc), lineno) from exc


def parse_network_file(text: str) -> NetworkMap:
    """Parse a network file into a map; errors carry the offending line."""
    space = None
    rows: dict[int, int] = {}
    row_lines: dict[int, int] = {}
    rules: dict[int, object] = {}
    in_table = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if space is None:
            if not line.startswith("intervals:"):
                raise NetworkFileError("the file must start with 'intervals:'", lineno)
            space = _parse_intervals(line[len("intervals:") :], lineno)
            continue
        if line == "table:":
            if rules:
                raise NetworkFileError("cannot mix rules with a table body", lineno)
            in_table = True
            continue
        if line.startswith("rule"):
            if in_table:
                raise NetworkFileError("cannot mix a table body with rules", lineno)
            m = _RULE_RE.match(line)
            if not m:
                raise NetworkFileError("bad rule line, expected 'rule f<i>: <expr>'", lineno)
            idx = int(m.group(1))
            if not 1 <= idx <= space.n:
                raise NetworkFileError(
                    f"rule component f{idx} out of range 1..{space.n}", lineno
                )
            if idx in rules:
                raise NetworkFileError(f"duplicate rule for f{idx}", lineno)
            try:
                rules[idx] = parse_rule(m.group(2))
            except NegcircError as exc:
                raise NetworkFileError(str(exc), lineno) from exc
            continue
        if in_table:
            r, img = _parse_row(space, line, lineno)
            if r in rows:
                raise NetworkFileError(
                    f"duplicate table row for state {space.unrank(r)}", lineno
                )
            rows[r] = img
            row_lines[r] = lineno
            continue
        raise NetworkFileError(f"unrecognized line {line!r}", lineno)

    if space is None:
        raise NetworkFileError("empty network file")
    if in_table:
        if len(rows) != space.size:
            missing = next(r for r in range(space.size) if r not in rows)
            raise NetworkFileError(
                f"table is missing state {space.unrank(missing)} "
                f"({space.size - len(rows)} of {space.size} rows absent)"
            )
        return NetworkMap(space, [rows[r] for r in range(space.size)])
    if rules:
        if len(rules) != space.n:
            missing = next(i for i in range(1, space.n + 1) if i not in rules)
            raise NetworkFileError(f"missing rule for f{missing}")
        try:
            return compile_network(space, [rules[i] for i in range(1, space.n + 1)])
        except NegcircError as exc:
            raise NetworkFileError(str(exc)) from exc
    raise NetworkFileError("file has neither a table body nor rules")


def serialize_network(net: NetworkMap) -> str:
    """Canonical table form; parsing it back yields an equal map."""
    space = net.space
    lines = [
        "intervals: " + " ".join(f"{lo}..{hi}" for lo, hi in space.intervals),
        "table:",
    ]
    for r, img in enumerate(net.table):
        x = " ".join(str(v) for v in space.unrank(r))
        y = " ".join(str(v) for v in space.unrank(img))
        lines.append(f"{x} -> {y}")
    return "\n".join(lines) + "\n"


def parse_space_spec(text: str) -> StateSpace:
    """Space spec for the command line: 'lo..hi,lo..hi' with '^k' repeats.

    ``0..1^3`` expands to three Boolean components.
    """
    intervals = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            raise NetworkFileError(f"empty component in space spec {text!r}")
        repeat = 1
        if "^" in part:
            part, _, count = part.partition("^")
            try:
                repeat = int(count)
            except ValueError:
                raise NetworkFileError(f"bad repeat in space spec {text!r}")
            if repeat < 1:
                raise NetworkFileError(f"repeat must be positive in {text!r}")
        m = _INTERVAL_RE.match(part.strip())
        if not m:
            raise NetworkFileError(f"bad interval {part!r} in space spec")
        intervals.extend([(int(m.group(1)), int(m.group(2)))] * repeat)
    try:
        return StateSpace(intervals)
    except NegcircError as exc:
        raise NetworkFileError(str(exc)) from exc
