"""Update-rule expression language.

One rule per component, integer valued.  Grammar, loosest binding first:

    expr   := 'if' expr 'then' expr 'else' expr | disj
    disj   := conj ('or' conj)*
    conj   := cmp ('and' cmp)*
    cmp    := negation (('=='|'!='|'<'|'<='|'>'|'>=') negation)?
    negation := 'not' negation | arith
    arith  := unary (('+'|'-') unary)*
    unary  := '-' unary | INT | VAR | '(' expr ')'

Variables are written x1..xn (1-based, matching component numbering).
Booleans exist only inside guards and comparisons; a separate typing pass
rejects e.g. ``not x1 > 2``, which parses as ``(not x1) > 2``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence, Union

from .errors import DomainError, RangeViolation, RuleSyntaxError, RuleTypeError
from .model import NetworkMap, StateSpace


@dataclass(frozen=True)
class IntLit:
    value: int
    pos: tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class Var:
    index: int  # 1-based, as written
    pos: tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class Arith:
    op: str  # '+' or '-'
    left: "RuleExpr"
    right: "RuleExpr"
    pos: tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class Neg:
    operand: "RuleExpr"
    pos: tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class Compare:
    op: str  # '==', '!=', '<', '<=', '>', '>='
    left: "RuleExpr"
    right: "RuleExpr"
    pos: tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class Not:
    operand: "RuleExpr"
    pos: tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class BoolOp:
    op: str  # 'and' or 'or'
    left: "RuleExpr"
    right: "RuleExpr"
    pos: tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class IfThenElse:
    guard: "RuleExpr"
    then: "RuleExpr"
    other: "RuleExpr"
    pos: tuple[int, int] = (0, 0)


RuleExpr = Union[IntLit, Var, Arith, Neg, Compare, Not, BoolOp, IfThenElse]

_KEYWORDS = {"if", "then", "else", "and", "or", "not"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>==|!=|<=|>=|<|>|\+|-|\(|\))
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # 'int', 'var', keyword text, operator text, 'eof'
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line = 1
    line_start = 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            col = pos - line_start + 1
            raise RuleSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        col = pos - line_start + 1
        if m.lastgroup == "ws":
            chunk = m.group()
            newlines = chunk.count("\n")
            if newlines:
                line += newlines
                line_start = pos + chunk.rindex("\n") + 1
        elif m.lastgroup == "int":
            tokens.append(_Token("int", m.group(), line, col))
        elif m.lastgroup == "ident":
            word = m.group()
            if word in _KEYWORDS:
                tokens.append(_Token(word, word, line, col))
            elif re.fullmatch(r"x[1-9][0-9]*", word):
                tokens.append(_Token("var", word, line, col))
            else:
                raise RuleSyntaxError(f"unknown identifier {word!r}", line, col)
        else:
            tokens.append(_Token(m.group(), m.group(), line, col))
        pos = m.end()
    tokens.append(_Token("eof", "", line, len(text) - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            shown = tok.text if tok.kind != "eof" else "end of input"
            raise RuleSyntaxError(f"expected {kind!r}, found {shown!r}", tok.line, tok.column)
        return self.next()

    def parse_expr(self) -> RuleExpr:
        tok = self.peek()
        if tok.kind == "if":
            self.next()
            guard = self.parse_expr()
            self.expect("then")
            then = self.parse_expr()
            self.expect("else")
            other = self.parse_expr()
            return IfThenElse(guard, then, other, (tok.line, tok.column))
        return self.parse_disj()

    def parse_disj(self) -> RuleExpr:
        node = self.parse_conj()
        while self.peek().kind == "or":
            tok = self.next()
            node = BoolOp("or", node, self.parse_conj(), (tok.line, tok.column))
        return node

    def parse_conj(self) -> RuleExpr:
        node = self.parse_cmp()
        while self.peek().kind == "and":
            tok = self.next()
            node = BoolOp("and", node, self.parse_cmp(), (tok.line, tok.column))
        return node

    def parse_cmp(self) -> RuleExpr:
        node = self.parse_negation()
        tok = self.peek()
        if tok.kind in ("==", "!=", "<", "<=", ">", ">="):
            self.next()
            node = Compare(tok.kind, node, self.parse_negation(), (tok.line, tok.column))
        return node

    def parse_negation(self) -> RuleExpr:
        tok = self.peek()
        if tok.kind == "not":
            self.next()
            return Not(self.parse_negation(), (tok.line, tok.column))
        return self.parse_arith()

    def parse_arith(self) -> RuleExpr:
        node = self.parse_unary()
        while self.peek().kind in ("+", "-"):
            tok = self.next()
            node = Arith(tok.kind, node, self.parse_unary(), (tok.line, tok.column))
        return node

    def parse_unary(self) -> RuleExpr:
        tok = self.peek()
        if tok.kind == "-":
            self.next()
            return Neg(self.parse_unary(), (tok.line, tok.column))
        if tok.kind == "int":
            self.next()
            return IntLit(int(tok.text), (tok.line, tok.column))
        if tok.kind == "var":
            self.next()
            return Var(int(tok.text[1:]), (tok.line, tok.column))
        if tok.kind == "(":
            self.next()
            node = self.parse_expr()
            self.expect(")")
            return node
        shown = tok.text if tok.kind != "eof" else "end of input"
        raise RuleSyntaxError(f"unexpected {shown!r}", tok.line, tok.column)


def _infer_type(node: RuleExpr) -> str:
    """'int' or 'bool'; raises RuleTypeError on a mismatch."""
    if isinstance(node, (IntLit, Var)):
        return "int"
    if isinstance(node, Neg):
        if _infer_type(node.operand) != "int":
            raise RuleTypeError("unary '-' needs an integer operand", *node.pos)
        return "int"
    if isinstance(node, Arith):
        for side in (node.left, node.right):
            if _infer_type(side) != "int":
                raise RuleTypeError(f"'{node.op}' needs integer operands", *node.pos)
        return "int"
    if isinstance(node, Compare):
        for side in (node.left, node.right):
            if _infer_type(side) != "int":
                raise RuleTypeError(f"'{node.op}' compares integers", *node.pos)
        return "bool"
    if isinstance(node, Not):
        if _infer_type(node.operand) != "bool":
            raise RuleTypeError("'not' needs a boolean operand", *node.pos)
        return "bool"
    if isinstance(node, BoolOp):
        for side in (node.left, node.right):
            if _infer_type(side) != "bool":
                raise RuleTypeError(f"'{node.op}' needs boolean operands", *node.pos)
        return "bool"
    if isinstance(node, IfThenElse):
        if _infer_type(node.guard) != "bool":
            raise RuleTypeError("'if' guard must be boolean", *node.pos)
        if _infer_type(node.then) != "int" or _infer_type(node.other) != "int":
            raise RuleTypeError("'then'/'else' branches must be integers", *node.pos)
        return "int"
    raise TypeError(f"unknown node {node!r}")


def parse_rule(text: str) -> RuleExpr:
    """Parse one integer-valued rule; raises RuleSyntaxError/RuleTypeError."""
    parser = _Parser(_tokenize(text))
    node = parser.parse_expr()
    trailing = parser.peek()
    if trailing.kind != "eof":
        raise RuleSyntaxError(
            f"unexpected trailing {trailing.text!r}", trailing.line, trailing.column
        )
    if _infer_type(node) != "int":
        raise RuleTypeError("a rule must be integer-valued", 1, 1)
    return node


def max_var_index(node: RuleExpr) -> int:
    """Largest variable number used, 0 if none."""
    if isinstance(node, IntLit):
        return 0
    if isinstance(node, Var):
        return node.index
    if isinstance(node, (Neg, Not)):
        return max_var_index(node.operand)
    if isinstance(node, (Arith, Compare, BoolOp)):
        return max(max_var_index(node.left), max_var_index(node.right))
    if isinstance(node, IfThenElse):
        return max(
            max_var_index(node.guard), max_var_index(node.then), max_var_index(node.other)
        )
    raise TypeError(f"unknown node {node!r}")


def evaluate(node: RuleExpr, state: Sequence[int]) -> int:
    """Evaluate an integer rule at a state (coords in component order)."""
    if isinstance(node, IntLit):
        return node.value
    if isinstance(node, Var):
        return state[node.index - 1]
    if isinstance(node, Neg):
        return -evaluate(node.operand, state)
    if isinstance(node, Arith):
        a = evaluate(node.left, state)
        b = evaluate(node.right, state)
        return a + b if node.op == "+" else a - b
    if isinstance(node, IfThenElse):
        branch = node.then if _evaluate_bool(node.guard, state) else node.other
        return evaluate(branch, state)
    raise TypeError(f"not an integer expression: {node!r}")


def _evaluate_bool(node: RuleExpr, state: Sequence[int]) -> bool:
    if isinstance(node, Compare):
        a = evaluate(node.left, state)
        b = evaluate(node.right, state)
        return {
            "==": a == b,
            "!=": a != b,
            "<": a < b,
            "<=": a <= b,
            ">": a > b,
            ">=": a >= b,
        }[node.op]
    if isinstance(node, Not):
        return not _evaluate_bool(node.operand, state)
    if isinstance(node, BoolOp):
        a = _evaluate_bool(node.left, state)
        if node.op == "and":
            return a and _evaluate_bool(node.right, state)
        return a or _evaluate_bool(node.right, state)
    raise TypeError(f"not a boolean expression: {node!r}")


# Binding strength used by the pretty-printer; higher binds tighter.
_LEVEL = {
    IfThenElse: 0,
    BoolOp: None,  # 'or' -> 1, 'and' -> 2
    Compare: 3,
    Not: 4,
    Arith: 5,
    Neg: 6,
    IntLit: 7,
    Var: 7,
}


def _level(node: RuleExpr) -> int:
    if isinstance(node, BoolOp):
        return 1 if node.op == "or" else 2
    return _LEVEL[type(node)]


def _fmt(node: RuleExpr, parent_level: int) -> str:
    lvl = _level(node)
    if isinstance(node, IntLit):
        text = str(node.value)
    elif isinstance(node, Var):
        text = f"x{node.index}"
    elif isinstance(node, Neg):
        text = f"-{_fmt(node.operand, lvl)}"
    elif isinstance(node, Arith):
        # left-associative: the right operand needs one level more
        text = f"{_fmt(node.left, lvl)} {node.op} {_fmt(node.right, lvl + 1)}"
    elif isinstance(node, Compare):
        text = f"{_fmt(node.left, lvl + 1)} {node.op} {_fmt(node.right, lvl + 1)}"
    elif isinstance(node, Not):
        text = f"not {_fmt(node.operand, lvl)}"
    elif isinstance(node, BoolOp):
        text = f"{_fmt(node.left, lvl)} {node.op} {_fmt(node.right, lvl + 1)}"
    elif isinstance(node, IfThenElse):
        text = (
            f"if {_fmt(node.guard, 1)} then {_fmt(node.then, 0)} "
            f"else {_fmt(node.other, 0)}"
        )
    else:
        raise TypeError(f"unknown node {node!r}")
    if lvl < parent_level:
        return f"({text})"
    return text


def pretty(node: RuleExpr) -> str:
    """Canonical text form; ``parse_rule(pretty(e))`` equals ``e`` up to positions."""
    return _fmt(node, 0)


def strip_positions(node: RuleExpr) -> RuleExpr:
    """Copy with all source positions zeroed, for structural comparison."""
    zero = (0, 0)
    if isinstance(node, IntLit):
        return IntLit(node.value, zero)
    if isinstance(node, Var):
        return Var(node.index, zero)
    if isinstance(node, Neg):
        return Neg(strip_positions(node.operand), zero)
    if isinstance(node, Not):
        return Not(strip_positions(node.operand), zero)
    if isinstance(node, Arith):
        return Arith(node.op, strip_positions(node.left), strip_positions(node.right), zero)
    if isinstance(node, Compare):
        return Compare(node.op, strip_positions(node.left), strip_positions(node.right), zero)
    if isinstance(node, BoolOp):
        return BoolOp(node.op, strip_positions(node.left), strip_positions(node.right), zero)
    if isinstance(node, IfThenElse):
        return IfThenElse(
            strip_positions(node.guard),
            strip_positions(node.then),
            strip_positions(node.other),
            zero,
        )
    raise TypeError(f"unknown node {node!r}")


def compile_network(space: StateSpace, rules: Sequence[RuleExpr]) -> NetworkMap:
    """Tabulate per-component rules into a network map.

    Every evaluated value is range-checked against its component interval;
    a violation reports the offending state, component and value.
    """
    if len(rules) != space.n:
        raise DomainError(f"expected {space.n} rules, got {len(rules)}")
    for i, rule in enumerate(rules):
        top = max_var_index(rule)
        if top > space.n:
            raise DomainError(
                f"rule for component {i + 1} uses x{top}, but the space has "
                f"{space.n} components"
            )
    ranks = []
    for x in space.states():
        image = []
        for i, rule in enumerate(rules):
            v = evaluate(rule, x)
            lo, hi = space.intervals[i]
            if not lo <= v <= hi:
                raise RangeViolation(x, i, v, (lo, hi))
            image.append(v)
        ranks.append(space.rank(image))
    return NetworkMap(space, ranks)
