"""Event expressions: AND/OR/NOT trees over (time, projector) atoms.

The textual grammar used by the CLI and the query API is

    expr  := or
    or    := and ("OR" and)*
    and   := not ("AND" not)*
    not   := "NOT" not | "(" expr ")" | atom
    atom  := LABEL "@" TIME

Atoms parse to unresolved (label, time) pairs; `resolve` maps labels to
projectors through a scenario's projector table.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterator, Tuple, Union

from .linalg import Projector


class ExprParseError(ValueError):
    """Query expression failed to parse."""


@dataclass(frozen=True)
class Atom:
    time: str
    projector: Projector
    label: str = ""

    def __repr__(self):
        return f"{self.label or self.projector.label or '?'}@{self.time}"


@dataclass(frozen=True)
class Not:
    child: "EventExpr"

    def __repr__(self):
        return f"NOT {self.child!r}"


@dataclass(frozen=True)
class And:
    left: "EventExpr"
    right: "EventExpr"

    def __repr__(self):
        return f"({self.left!r} AND {self.right!r})"


@dataclass(frozen=True)
class Or:
    left: "EventExpr"
    right: "EventExpr"

    def __repr__(self):
        return f"({self.left!r} OR {self.right!r})"


EventExpr = Union[Atom, Not, And, Or]


def atoms(expr: EventExpr) -> Iterator[Atom]:
    if isinstance(expr, Atom):
        yield expr
    elif isinstance(expr, Not):
        yield from atoms(expr.child)
    else:
        yield from atoms(expr.left)
        yield from atoms(expr.right)


def evaluate(expr: EventExpr, sat: Callable[[Atom], bool]) -> bool:
    """Truth value of the expression given a per-atom satisfaction oracle."""
    if isinstance(expr, Atom):
        return sat(expr)
    if isinstance(expr, Not):
        return not evaluate(expr.child, sat)
    if isinstance(expr, And):
        return evaluate(expr.left, sat) and evaluate(expr.right, sat)
    return evaluate(expr.left, sat) or evaluate(expr.right, sat)


def conjoin(*exprs: EventExpr) -> EventExpr:
    out = exprs[0]
    for e in exprs[1:]:
        out = And(out, e)
    return out


# ---------------------------------------------------------------------------
# Textual grammar
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RawAtom:
    label: str
    time: str


RawExpr = Union[RawAtom, Not, And, Or]

_TOKEN = re.compile(r"\s*(\(|\)|AND\b|OR\b|NOT\b|[A-Za-z0-9_*~!+.-]+@[A-Za-z0-9_]+)")


def _tokenize(text: str) -> list[str]:
    tokens, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ExprParseError(f"unexpected input at position {pos}: {text[pos:]!r}")
            break
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


def parse_expr(text: str) -> RawExpr:
    tokens = _tokenize(text)
    if not tokens:
        raise ExprParseError("empty expression")
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take(expected=None):
        nonlocal pos
        tok = peek()
        if tok is None or (expected is not None and tok != expected):
            raise ExprParseError(f"expected {expected or 'a token'}, got {tok!r}")
        pos += 1
        return tok

    def parse_or():
        node = parse_and()
        while peek() == "OR":
            take()
            node = Or(node, parse_and())
        return node

    def parse_and():
        node = parse_not()
        while peek() == "AND":
            take()
            node = And(node, parse_not())
        return node

    def parse_not():
        tok = peek()
        if tok == "NOT":
            take()
            return Not(parse_not())
        if tok == "(":
            take()
            node = parse_or()
            take(")")
            return node
        if tok is None or tok in (")", "AND", "OR"):
            raise ExprParseError(f"expected an atom, got {tok!r}")
        take()
        label, _, time = tok.partition("@")
        return RawAtom(label, time)

    node = parse_or()
    if pos != len(tokens):
        raise ExprParseError(f"trailing tokens: {tokens[pos:]}")
    return node


def resolve(raw: RawExpr, lookup: Callable[[str], Projector]) -> EventExpr:
    """Replace raw (label, time) atoms with projector atoms.

    `lookup` raises KeyError for unknown labels; the caller decides whether
    that is a parse error or an in-band meaningless result.
    """
    if isinstance(raw, RawAtom):
        return Atom(raw.time, lookup(raw.label), label=raw.label)
    if isinstance(raw, Not):
        return Not(resolve(raw.child, lookup))
    if isinstance(raw, And):
        return And(resolve(raw.left, lookup), resolve(raw.right, lookup))
    if isinstance(raw, Or):
        return Or(resolve(raw.left, lookup), resolve(raw.right, lookup))
    raise TypeError(f"not an expression node: {raw!r}")
