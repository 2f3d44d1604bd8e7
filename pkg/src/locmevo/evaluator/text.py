"""Genome text format.

    linear: w1 w2 ... w20
    tree state: (add (mul 0.5 (feat self_health)) -1.2) card: (feat attack)
    binary state: ... card: ...

Whitespace (including newlines) between tokens is insignificant.
"""

from __future__ import annotations

import math
import re

from .features import CARD_INDEX, N_CARD, N_STATE, STATE_INDEX
from .genome import TREE_CLASSES, Genome, LinearGenome
from .trees import BINARY_OPS, NARY_OPS, Const, Feat, Node, Op

_TOKEN = re.compile(r"\s*(?:(\()|(\))|([^\s()]+))")


class ParseError(ValueError):
    def __init__(self, message: str, position: int, expected: str | None = None):
        self.position = position
        self.expected = expected
        detail = f" (expected {expected})" if expected else ""
        super().__init__(f"at position {position}: {message}{detail}")


def format_tree(node: Node) -> str:
    if isinstance(node, Const):
        return repr(float(node.value))
    if isinstance(node, Feat):
        return f"(feat {node.name})"
    return "(" + " ".join([node.op] + [format_tree(c) for c in node.children]) + ")"


def serialize_genome(g: Genome) -> str:
    """One-line text form of ``g``."""
    if isinstance(g, LinearGenome):
        return "linear: " + " ".join(repr(w) for w in g.weights)
    return f"{g.representation} state: {format_tree(g.state_tree)} card: {format_tree(g.card_tree)}"


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex)
        tokens.append((m.group(m.lastindex), start))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def next(self, expected: str) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.pos(), expected)
        self.i += 1
        return tok

    def expect(self, literal: str) -> None:
        at = self.pos()
        tok = self.next(repr(literal))
        if tok != literal:
            raise ParseError(f"unexpected token {tok!r}", at, repr(literal))

    def number(self) -> float:
        at = self.pos()
        tok = self.next("a number")
        try:
            value = float(tok)
        except ValueError:
            raise ParseError(f"unexpected token {tok!r}", at, "a number") from None
        if not math.isfinite(value):
            raise ParseError(f"non-finite number {tok!r}", at, "a finite number")
        return value

    def expr(self, features: dict[str, int], binary: bool) -> Node:
        if self.peek() != "(":
            if self.peek() == ")":
                raise ParseError("unexpected ')'", self.pos(), "an expression")
            return Const(self.number())
        self.i += 1
        at = self.pos()
        head = self.next("an operator or 'feat'")
        if head == "feat":
            at = self.pos()
            name = self.next("a feature name")
            if name not in features:
                raise ParseError(f"unknown feature {name!r} for this tree", at,
                                 "one of " + ", ".join(features))
            self.expect(")")
            return Feat(name)
        ops = BINARY_OPS if binary else NARY_OPS
        if head not in ops:
            raise ParseError(f"unknown operator {head!r}", at, "one of " + ", ".join(ops))
        children = []
        while self.peek() != ")":
            if self.peek() is None:
                raise ParseError("unexpected end of input", self.pos(), "')'")
            children.append(self.expr(features, binary))
        if not children:
            raise ParseError(f"operator {head!r} has no children", self.pos(), "an expression")
        arity = 2 if binary else 1 if head == "neg" else None
        if arity is not None and len(children) != arity:
            raise ParseError(f"operator {head!r} takes {arity} children, got {len(children)}",
                             self.pos(), f"{arity} children")
        self.i += 1
        return Op(head, tuple(children))

    def end(self) -> None:
        if self.peek() is not None:
            raise ParseError(f"trailing token {self.peek()!r}", self.pos(), "end of input")


def parse_tree(text: str, domain: str = "state", binary: bool = False) -> Node:
    p = _Parser(text)
    node = p.expr(STATE_INDEX if domain == "state" else CARD_INDEX, binary)
    p.end()
    return node


def parse_genome(text: str) -> Genome:
    p = _Parser(text)
    at = p.pos()
    header = p.next("a representation header")
    if header == "linear:":
        weights = []
        while p.peek() is not None:
            weights.append(p.number())
        if len(weights) != N_STATE + N_CARD:
            raise ParseError(f"linear genome needs {N_STATE + N_CARD} weights, got {len(weights)}",
                             p.pos(), f"{N_STATE + N_CARD} numbers")
        return LinearGenome(tuple(weights))
    rep = header.rstrip(":")
    if rep not in TREE_CLASSES:
        raise ParseError(f"unknown representation {header!r}", at, "'linear:', 'binary' or 'tree'")
    cls = TREE_CLASSES[rep]
    p.expect("state:")
    state = p.expr(STATE_INDEX, cls.binary)
    p.expect("card:")
    card = p.expr(CARD_INDEX, cls.binary)
    p.end()
    return cls(state, card)
