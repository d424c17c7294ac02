"""
Arithmetic expressions for densities and boundary data.

A small Pratt parser: every token knows its left binding power and how to
parse itself in prefix (``nud``) and infix (``led``) position. Precedence, from
tightest: ``^``/``**`` (right associative), unary minus, ``*``/``/``, ``+``/``-``.
Functions ``exp``, ``log``, ``sqrt``, ``abs`` take one parenthesised
argument; ``pi`` and ``e`` are constants. Expressions evaluate on numpy arrays.
"""

import math
import re

from dataclasses import dataclass
from typing import TYPE_CHECKING, Union

import numpy as np

from carleson.exceptions import ExpressionSyntaxError, InvalidInput


if TYPE_CHECKING:
    from typing import Any, Iterable, Optional

    from carleson.typing import FloatArray


FUNCTIONS = {
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
}
CONSTANTS = {"pi": math.pi, "e": math.e}
BINARY = {
    "+": "add",
    "-": "sub",
    "*": "mul",
    "/": "div",
    "^": "pow",
    "**": "pow",
}
PLANE_VARIABLES = frozenset({"x", "y"})
LINE_VARIABLES = frozenset({"t"})

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[-+*/^()])"
    r")"
)

# Binding powers.
_ADD = 10
_MUL = 20
_NEG = 25
_POW = 30


# AST.


@dataclass(frozen=True)
class Constant:
    value: float


@dataclass(frozen=True)
class Variable:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Node"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Node"
    right: "Node"


Node = Union[Constant, Variable, Unary, Binary]


def as_tree(node: Node) -> "Any":
    """Nested-tuple view of an AST, e.g. ``("div", 1.0, ("pow", "y", 2.0))``."""
    if isinstance(node, Constant):
        return node.value
    if isinstance(node, Variable):
        return node.name
    if isinstance(node, Unary):
        return (node.op, as_tree(node.operand))
    return (node.op, as_tree(node.left), as_tree(node.right))


def _evaluate(node: Node, env: "dict[str, Any]") -> "Any":
    if isinstance(node, Constant):
        return node.value
    if isinstance(node, Variable):
        return env[node.name]
    if isinstance(node, Unary):
        operand = _evaluate(node.operand, env)
        if node.op == "neg":
            return -operand
        return FUNCTIONS[node.op](operand)
    left = _evaluate(node.left, env)
    right = _evaluate(node.right, env)
    if node.op == "add":
        return left + right
    if node.op == "sub":
        return left - right
    if node.op == "mul":
        return left * right
    if node.op == "div":
        return np.divide(left, right)
    return np.power(left, right)


# Tokens.


@dataclass(frozen=True)
class Token:
    kind: str  # "number", "name", "op" or "end"
    text: str
    offset: int

    @property
    def lbp(self) -> int:
        if self.kind != "op":
            return 0
        if self.text in ("+", "-"):
            return _ADD
        if self.text in ("*", "/"):
            return _MUL
        if self.text in ("^", "**"):
            return _POW
        return 0


def tokenize(source: str) -> "list[Token]":
    tokens = []
    position = 0
    stripped = source.rstrip()
    while position < len(stripped):
        match = _TOKEN.match(stripped, position)
        if match is None or match.end() == position:
            offset = position + len(stripped[position:]) - len(stripped[position:].lstrip())
            raise ExpressionSyntaxError(
                f"unexpected character {stripped[offset]!r}",
                offset,
                ("number", "name", "operator"),
            )
        kind = match.lastgroup or "op"
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        position = match.end()
    tokens.append(Token("end", "", len(stripped)))
    return tokens


class Parser:
    """Parses one source string for a fixed set of variables."""

    def __init__(self, source: str, variables: "Iterable[str]") -> None:
        self.source = source
        self.variables = frozenset(variables)
        self.tokens = tokenize(source)
        self.position = 0

    @property
    def operand_start(self) -> "set[str]":
        return {"number", "(", "-", *self.variables, *FUNCTIONS, *CONSTANTS}

    def peek(self) -> Token:
        return self.tokens[self.position]

    def advance(self) -> Token:
        token = self.tokens[self.position]
        self.position = min(self.position + 1, len(self.tokens) - 1)
        return token

    def expect(self, text: str) -> None:
        token = self.advance()
        if token.text != text or token.kind == "end":
            raise ExpressionSyntaxError(
                f"unexpected {token.text or 'end of input'!r}", token.offset, (text,)
            )

    def parse(self) -> Node:
        node = self.expression()
        token = self.peek()
        if token.kind != "end":
            raise ExpressionSyntaxError(
                f"unexpected {token.text!r}", token.offset, ("operator", "end of input")
            )
        return node

    def expression(self, rbp: int = 0) -> Node:
        left = self.nud(self.advance())
        while rbp < self.peek().lbp:
            left = self.led(self.advance(), left)
        return left

    def nud(self, token: Token) -> Node:
        if token.kind == "number":
            return Constant(float(token.text))
        if token.kind == "name":
            return self.name(token)
        if token.text == "-":
            return Unary("neg", self.expression(_NEG))
        if token.text == "+":
            return self.expression(_NEG)
        if token.text == "(":
            node = self.expression()
            self.expect(")")
            return node
        raise ExpressionSyntaxError(
            f"unexpected {token.text or 'end of input'!r}", token.offset, self.operand_start
        )

    def name(self, token: Token) -> Node:
        if token.text in FUNCTIONS:
            self.expect("(")
            argument = self.expression()
            self.expect(")")
            return Unary(token.text, argument)
        if token.text in CONSTANTS:
            return Constant(CONSTANTS[token.text])
        if token.text in self.variables:
            return Variable(token.text)
        raise ExpressionSyntaxError(
            f"unknown name {token.text!r}", token.offset, self.operand_start - {"number", "(", "-"}
        )

    def led(self, token: Token, left: Node) -> Node:
        if token.text in ("^", "**"):
            return Binary("pow", left, self.expression(_POW - 1))
        return Binary(BINARY[token.text], left, self.expression(token.lbp))


@dataclass(frozen=True)
class Expression:
    """A parsed expression together with its source and allowed variables."""

    source: str
    ast: Node
    variables: "frozenset[str]"

    def evaluate(self, **values: "Any") -> "FloatArray":
        unknown = set(values) - self.variables
        if unknown:
            raise InvalidInput(f"expression {self.source!r} has no variables {sorted(unknown)}")
        env = {name: np.asarray(values.get(name, 0.0), dtype=float) for name in self.variables}
        with np.errstate(all="ignore"):
            result = np.asarray(_evaluate(self.ast, env), dtype=float)
        if not np.all(np.isfinite(result)):
            raise InvalidInput(f"expression {self.source!r} is not finite on its arguments")
        return result

    def __call__(self, x: "FloatArray", y: "FloatArray") -> "FloatArray":
        """Evaluate a two-variable expression; the evaluator protocol of densities."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        result = self.evaluate(x=x, y=y)
        return np.broadcast_to(result, np.broadcast(x, y).shape)

    def tree(self) -> "Any":
        return as_tree(self.ast)


def parse_expression(
    source: str, variables: "Optional[Iterable[str]]" = None
) -> Expression:
    if not isinstance(source, str) or not source.strip():
        raise ExpressionSyntaxError("empty expression", 0, ("number", "name", "("))
    allowed = frozenset(variables) if variables is not None else PLANE_VARIABLES
    return Expression(source, Parser(source, allowed).parse(), allowed)
