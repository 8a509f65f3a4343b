"""Integrand expression grammar: parser, evaluator, pretty-printer.

Grammar (whitespace-insensitive, positions reported 1-based):

    expression := sum (CMP sum)?          CMP in < <= > >= ==  (value 0/1)
    sum        := product (("+"|"-") product)*
    product    := unary (("*"|"/") unary)*
    unary      := "-" unary | power
    power      := atom ("^" unary)?       right-associative, tighter than
                                          unary minus; exponent must be
                                          constant
    atom       := NUMBER | "pi" | "e" | x1..x9 | FUNC "(" expression ")"
                | "(" expression ")"
    FUNC       := sin cos exp ln abs sqrt

Comparisons evaluate to 1.0/0.0, which is how piecewise integrands (step
functions, indicators) are written: ``(0 <= x1) * (x1 <= 0.5)``.

Evaluation is NumPy-vectorized: compiled expressions accept arrays for the
variables and broadcast.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import ParseError

FUNCTIONS = ("sin", "cos", "exp", "ln", "abs", "sqrt")
CONSTANTS = {"pi": math.pi, "e": math.e}
_CMP_OPS = ("<=", ">=", "==", "<", ">")


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    index: int  # 1-based, x1..x9


@dataclass(frozen=True)
class Unary:
    op: str  # neg sin cos exp ln abs sqrt
    arg: object


@dataclass(frozen=True)
class Binary:
    op: str  # + - * / ^
    lhs: object
    rhs: object


@dataclass(frozen=True)
class Compare:
    op: str  # < <= > >= ==
    lhs: object
    rhs: object


_TOKEN_RE = re.compile(
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op><=|>=|==|[-+*/^()<>])"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(
                f"unexpected character {text[pos]!r}", pos + 1,
                expected=("number", "identifier", "operator"),
            )
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start() + 1))
        pos = m.end()
    tokens.append(("end", "", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, expected):
        kind, value, pos = self.peek()
        got = "end of input" if kind == "end" else repr(value)
        raise ParseError(
            f"expected {' or '.join(expected)}, found {got}", pos, expected=expected
        )

    def expect_op(self, op):
        kind, value, pos = self.peek()
        if kind == "op" and value == op:
            return self.advance()
        self.fail((f"'{op}'",))

    def parse(self):
        node = self.expression()
        kind, value, pos = self.peek()
        if kind != "end":
            raise ParseError(
                f"unexpected trailing input {value!r}", pos, expected=("end of input",)
            )
        return node

    def expression(self):
        node = self.sum_()
        kind, value, pos = self.peek()
        if kind == "op" and value in _CMP_OPS:
            self.advance()
            rhs = self.sum_()
            return Compare(value, node, rhs)
        return node

    def sum_(self):
        node = self.product()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in ("+", "-"):
                self.advance()
                node = Binary(value, node, self.product())
            else:
                return node

    def product(self):
        node = self.unary()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in ("*", "/"):
                self.advance()
                node = Binary(value, node, self.unary())
            else:
                return node

    def unary(self):
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.advance()
            arg = self.unary()
            if isinstance(arg, Num):
                return Num(-arg.value)
            return Unary("neg", arg)
        return self.power()

    def power(self):
        node = self.atom()
        kind, value, pos = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            exponent = self.unary()
            if variables(exponent):
                raise ParseError(
                    "exponent must be a constant expression", pos, expected=("constant",)
                )
            return Binary("^", node, exponent)
        return node

    def atom(self):
        kind, value, pos = self.advance()
        if kind == "number":
            return Num(float(value))
        if kind == "ident":
            if value in CONSTANTS:
                return Num(CONSTANTS[value])
            if value in FUNCTIONS:
                self.expect_op("(")
                arg = self.expression()
                self.expect_op(")")
                return Unary(value, arg)
            m = re.fullmatch(r"x([1-9])", value)
            if m:
                return Var(int(m.group(1)))
            raise ParseError(
                f"unknown identifier {value!r}", pos,
                expected=("x1..x9", "pi", "e") + FUNCTIONS,
            )
        if kind == "op" and value == "(":
            node = self.expression()
            self.expect_op(")")
            return node
        self.i -= 1
        self.fail(("number", "identifier", "'('", "'-'"))


def parse_expression(text: str):
    """Parse expression text into an AST; raises :class:`ParseError`."""
    return _Parser(text).parse()


def variables(node) -> set:
    """Set of variable indices used by the expression."""
    if isinstance(node, Var):
        return {node.index}
    if isinstance(node, Unary):
        return variables(node.arg)
    if isinstance(node, (Binary, Compare)):
        return variables(node.lhs) | variables(node.rhs)
    return set()


_UNARY_FN = {
    "neg": np.negative,
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "ln": np.log,
    "abs": np.abs,
    "sqrt": np.sqrt,
}


def _build(node):
    if isinstance(node, Num):
        v = node.value
        return lambda env: v
    if isinstance(node, Var):
        i = node.index - 1
        return lambda env: env[i]
    if isinstance(node, Unary):
        fn = _UNARY_FN[node.op]
        arg = _build(node.arg)
        return lambda env: fn(arg(env))
    if isinstance(node, Binary):
        lhs, rhs = _build(node.lhs), _build(node.rhs)
        op = node.op
        if op == "+":
            return lambda env: lhs(env) + rhs(env)
        if op == "-":
            return lambda env: lhs(env) - rhs(env)
        if op == "*":
            return lambda env: lhs(env) * rhs(env)
        if op == "/":
            return lambda env: lhs(env) / rhs(env)
        return lambda env: np.power(lhs(env), rhs(env))
    if isinstance(node, Compare):
        lhs, rhs = _build(node.lhs), _build(node.rhs)
        op = node.op
        cmps = {
            "<": np.less,
            "<=": np.less_equal,
            ">": np.greater,
            ">=": np.greater_equal,
            "==": np.equal,
        }
        fn = cmps[op]
        return lambda env: fn(lhs(env), rhs(env)).astype(np.float64)
    raise TypeError(f"not an AST node: {node!r}")


def compile_expression(node, dim: int):
    """Compile an AST to a vectorized callable of ``dim`` array arguments."""
    used = variables(node)
    if used and max(used) > dim:
        raise ValueError(
            f"expression uses x{max(used)} but the declared dimension is {dim}"
        )
    body = _build(node)

    def f(*args):
        if len(args) != dim:
            raise TypeError(f"expected {dim} arguments, got {len(args)}")
        with np.errstate(all="ignore"):
            out = body(args)
        return np.asarray(out, dtype=np.float64)

    return f


_PREC_ATOM = 5
_PREC_POW = 4
_PREC_UNARY = 3
_PREC_MUL = 2
_PREC_ADD = 1
_PREC_CMP = 0


def _prec(node) -> int:
    if isinstance(node, Num):
        # a negative literal renders with a leading '-', so it binds like a
        # unary minus, not like an atom (e.g. as the base of '^')
        return _PREC_UNARY if math.copysign(1.0, node.value) < 0 else _PREC_ATOM
    if isinstance(node, Var):
        return _PREC_ATOM
    if isinstance(node, Unary):
        return _PREC_UNARY if node.op == "neg" else _PREC_ATOM
    if isinstance(node, Binary):
        if node.op == "^":
            return _PREC_POW
        return _PREC_MUL if node.op in ("*", "/") else _PREC_ADD
    return _PREC_CMP


def _fmt(node, min_prec: int) -> str:
    p = _prec(node)
    if isinstance(node, Num):
        s = repr(node.value)
    elif isinstance(node, Var):
        s = f"x{node.index}"
    elif isinstance(node, Unary):
        if node.op == "neg":
            s = f"-{_fmt(node.arg, _PREC_UNARY)}"
        else:
            s = f"{node.op}({_fmt(node.arg, 0)})"
    elif isinstance(node, Binary):
        if node.op == "^":
            s = f"{_fmt(node.lhs, _PREC_ATOM)}^{_fmt(node.rhs, _PREC_UNARY)}"
        elif node.op in ("*", "/"):
            s = f"{_fmt(node.lhs, _PREC_MUL)} {node.op} {_fmt(node.rhs, _PREC_UNARY)}"
        else:
            s = f"{_fmt(node.lhs, _PREC_ADD)} {node.op} {_fmt(node.rhs, _PREC_MUL)}"
    elif isinstance(node, Compare):
        s = f"{_fmt(node.lhs, _PREC_ADD)} {node.op} {_fmt(node.rhs, _PREC_ADD)}"
    else:
        raise TypeError(f"not an AST node: {node!r}")
    return f"({s})" if p < min_prec else s


def pretty_print(node) -> str:
    """Render an AST to text that re-parses to an identical AST."""
    return _fmt(node, 0)
