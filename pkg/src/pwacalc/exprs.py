"""Small arithmetic expression language for describing function oracles.

Grammar: decimal or integer literals, variables x1..xn (x, y, z name the
first three), operators + - * / and integer powers via ^ (or **), calls
min(...), max(...), abs(...), parentheses, and top-level commas separating
output coordinates.  All evaluation is exact rational arithmetic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .approx import FunctionOracle
from .errors import DimensionMismatch, ExpressionError
from .geometry import Vector

Node = Callable[[Sequence[Fraction]], Fraction]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<name>[A-Za-z]+\d*)|(?P<op>\*\*|[-+*/^(),]))"
)

_ALIASES = {"x": 0, "y": 1, "z": 2}


def _tokenize(text: str) -> list[tuple[str, str]]:
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:].strip()
            if not rest:
                break
            raise ExpressionError(f"unexpected character {rest[0]!r}")
        pos = m.end()
        kind = m.lastgroup
        tok = m.group(kind)
        if tok == "**":
            tok = "^"
        out.append((kind, tok))
    return out


def _binary(op: str, a: Node, b: Node) -> Node:
    if op == "+":
        return lambda x: a(x) + b(x)
    if op == "-":
        return lambda x: a(x) - b(x)
    if op == "*":
        return lambda x: a(x) * b(x)
    return lambda x: a(x) / b(x)


class _Parser:
    def __init__(self, tokens: list[tuple[str, str]]):
        self.tokens = tokens
        self.pos = 0
        self.var_count = 0

    def peek(self) -> tuple[Optional[str], Optional[str]]:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return (None, None)

    def take(self) -> tuple[str, str]:
        kind, tok = self.peek()
        if kind is None:
            raise ExpressionError("unexpected end of expression")
        self.pos += 1
        return kind, tok

    def expect(self, op: str) -> None:
        kind, tok = self.take()
        if kind != "op" or tok != op:
            raise ExpressionError(f"expected {op!r}, found {tok!r}")

    def vector(self) -> list[Node]:
        outs = [self.expr()]
        while self.peek() == ("op", ","):
            self.take()
            outs.append(self.expr())
        if self.pos != len(self.tokens):
            raise ExpressionError(f"trailing input at {self.tokens[self.pos][1]!r}")
        return outs

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            node = _binary(self.take()[1], node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            node = _binary(self.take()[1], node, self.factor())
        return node

    def factor(self) -> Node:
        kind, tok = self.peek()
        if kind == "op" and tok in ("+", "-"):
            self.take()
            inner = self.factor()
            if tok == "+":
                return inner
            return lambda x: -inner(x)
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, tok = self.take()
            if kind != "num" or "." in tok:
                raise ExpressionError("exponent must be a nonnegative integer")
            k = int(tok)
            return lambda x: base(x) ** k
        return base

    def atom(self) -> Node:
        kind, tok = self.take()
        if kind == "num":
            value = Fraction(tok)
            return lambda x: value
        if kind == "name":
            return self.name(tok)
        if kind == "op" and tok == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ExpressionError(f"unexpected {tok!r}")

    def name(self, tok: str) -> Node:
        if tok in ("min", "max", "abs"):
            self.expect("(")
            args = [self.expr()]
            while self.peek() == ("op", ","):
                self.take()
                args.append(self.expr())
            self.expect(")")
            if tok == "abs":
                if len(args) != 1:
                    raise ExpressionError("abs takes exactly one argument")
                inner = args[0]
                return lambda x: abs(inner(x))
            if len(args) < 2:
                raise ExpressionError(f"{tok} needs at least two arguments")
            pick = min if tok == "min" else max
            return lambda x: pick(node(x) for node in args)
        index = self.var_index(tok)
        self.var_count = max(self.var_count, index + 1)
        return lambda x: x[index]

    @staticmethod
    def var_index(tok: str) -> int:
        if tok in _ALIASES:
            return _ALIASES[tok]
        m = re.fullmatch(r"x([1-9]\d*)", tok)
        if m is None:
            raise ExpressionError(f"unknown name {tok!r}")
        return int(m.group(1)) - 1


@dataclass(frozen=True)
class Expression:
    """A parsed expression: one evaluator per output coordinate."""

    text: str
    outputs: tuple[Node, ...]
    min_dim: int

    @property
    def dim_out(self) -> int:
        return len(self.outputs)

    def evaluate(self, point) -> Vector:
        x = point if isinstance(point, Vector) else Vector(point)
        if x.dim < self.min_dim:
            raise DimensionMismatch(
                f"expression reads {self.min_dim} variables, point has {x.dim}"
            )
        return Vector(node(x.coords) for node in self.outputs)

    def oracle(self, dim_in: int, precision: Optional[int] = None) -> FunctionOracle:
        if dim_in < self.min_dim:
            raise DimensionMismatch(
                f"expression reads {self.min_dim} variables, domain has dim {dim_in}"
            )
        return FunctionOracle(
            lambda v: [node(v.coords) for node in self.outputs],
            dim_in,
            self.dim_out,
            precision,
        )


def parse_expression(text: str) -> Expression:
    """Parse an expression string; commas separate output coordinates."""
    cleaned = text.replace("×", "*").replace("÷", "/").replace("−", "-")
    parser = _Parser(_tokenize(cleaned))
    outputs = parser.vector()
    return Expression(text, tuple(outputs), parser.var_count)
