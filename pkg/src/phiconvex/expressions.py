"""Expression trees for univariate real functions.

Grammar (whitespace-insensitive):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := atom ('^' factor)?
    atom   := NUMBER | 'x' | IDENT '(' expr (',' expr)? ')' | '(' expr ')' | '-' atom

``^`` is right-associative, and a leading minus binds at the atom level,
so ``-x^2`` parses as ``(-x)^2``.  Recognized identifiers: ``exp``,
``log``, ``abs``, ``sqrt`` (one argument) and ``min``, ``max`` (two
arguments).  Numbers are decimal literals with an optional e/E exponent.

Trees are immutable and evaluation is pure, so expressions are safe to
share across threads.  Scalar evaluation never lets a NaN or infinity
escape: any domain problem or overflow raises :class:`EvalError` carrying
the offending node.  The vectorized path (:func:`evaluate_array`) instead
returns NaN/inf entries for the caller to mask, which is what grid
searches want.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "Binary",
    "Constant",
    "EvalError",
    "Expr",
    "ExpressionError",
    "ParseError",
    "Unary",
    "Variable",
    "evaluate",
    "evaluate_array",
    "parse",
    "render",
    "substitute",
]


class ExpressionError(Exception):
    """Base class for parse and evaluation failures."""


class ParseError(ExpressionError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (column {position})")
        self.position = position


class EvalError(ExpressionError):
    def __init__(self, message: str, node: "Expr"):
        super().__init__(f"{message} in '{render(node)}'")
        self.node = node


_UNARY_OPS = frozenset({"neg", "exp", "log", "abs", "sqrt"})
_BINARY_OPS = frozenset({"add", "sub", "mul", "div", "pow", "min", "max"})


@dataclass(frozen=True)
class Constant:
    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        if not math.isfinite(self.value):
            raise ValueError(f"constants must be finite, got {self.value!r}")


@dataclass(frozen=True)
class Variable:
    pass


@dataclass(frozen=True)
class Unary:
    op: str
    child: "Expr"

    def __post_init__(self):
        if self.op not in _UNARY_OPS:
            raise ValueError(f"unknown unary operator {self.op!r}")


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"

    def __post_init__(self):
        if self.op not in _BINARY_OPS:
            raise ValueError(f"unknown binary operator {self.op!r}")


Expr = Union[Constant, Variable, Unary, Binary]

# name -> arity of callable identifiers
_FUNCTIONS = {"exp": 1, "log": 1, "abs": 1, "sqrt": 1, "min": 2, "max": 2}

# ---------------------------------------------------------------------------
# Parsing

_NUMBER_RE = re.compile(r"\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


@dataclass(frozen=True)
class _Token:
    kind: str  # "num" | "ident" | "op" | "end"
    text: str
    pos: int  # 1-based column


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        m = _NUMBER_RE.match(text, i)
        if m:
            tokens.append(_Token("num", m.group(), i + 1))
            i = m.end()
            continue
        m = _IDENT_RE.match(text, i)
        if m:
            tokens.append(_Token("ident", m.group(), i + 1))
            i = m.end()
            continue
        if ch in "+-*/^(),":
            tokens.append(_Token("op", ch, i + 1))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i + 1)
    tokens.append(_Token("end", "", n + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def take(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, symbol: str) -> None:
        tok = self.take()
        if tok.kind != "op" or tok.text != symbol:
            raise ParseError(f"expected '{symbol}'", tok.pos)

    def parse(self) -> Expr:
        node = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected input {tok.text!r}", tok.pos)
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.take().text
            node = Binary("add" if op == "+" else "sub", node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.take().text
            node = Binary("mul" if op == "*" else "div", node, self.factor())
        return node

    def factor(self) -> Expr:
        base = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.take()
            return Binary("pow", base, self.factor())
        return base

    def atom(self) -> Expr:
        tok = self.take()
        if tok.kind == "num":
            return Constant(float(tok.text))
        if tok.kind == "ident":
            if tok.text == "x":
                return Variable()
            if tok.text in _FUNCTIONS:
                return self.call(tok)
            raise ParseError(f"unknown identifier {tok.text!r}", tok.pos)
        if tok.kind == "op" and tok.text == "(":
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind == "op" and tok.text == "-":
            return Unary("neg", self.atom())
        raise ParseError("expected a number, 'x', a function call, or '('", tok.pos)

    def call(self, name: _Token) -> Expr:
        arity = _FUNCTIONS[name.text]
        self.expect("(")
        first = self.expr()
        tok = self.peek()
        if tok.kind == "op" and tok.text == ",":
            self.take()
            second = self.expr()
            self.expect(")")
            if arity != 2:
                raise ParseError(f"{name.text} expects 1 argument, got 2", name.pos)
            return Binary(name.text, first, second)
        self.expect(")")
        if arity != 1:
            raise ParseError(f"{name.text} expects 2 arguments, got 1", name.pos)
        return Unary(name.text, first)


def parse(text: str) -> Expr:
    """Parse an expression string into its unique tree under the grammar."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Scalar evaluation

def evaluate(expr: Expr, x: float) -> float:
    """Evaluate at a point; every result is finite or an EvalError is raised."""
    if not math.isfinite(x):
        raise EvalError(f"argument {x!r} is not finite", expr)
    return _eval(expr, float(x))


def _eval(node: Expr, x: float) -> float:
    if isinstance(node, Constant):
        return node.value
    if isinstance(node, Variable):
        return x
    if isinstance(node, Unary):
        v = _eval(node.child, x)
        op = node.op
        if op == "neg":
            return -v
        if op == "abs":
            return abs(v)
        if op == "exp":
            try:
                return math.exp(v)
            except OverflowError:
                raise EvalError(f"exp overflow at argument {v!r}", node) from None
        if op == "log":
            if v <= 0.0:
                raise EvalError(f"log of nonpositive value {v!r}", node)
            return math.log(v)
        if v < 0.0:
            raise EvalError(f"sqrt of negative value {v!r}", node)
        return math.sqrt(v)
    a = _eval(node.left, x)
    b = _eval(node.right, x)
    op = node.op
    if op == "min":
        return min(a, b)
    if op == "max":
        return max(a, b)
    if op == "add":
        r = a + b
    elif op == "sub":
        r = a - b
    elif op == "mul":
        r = a * b
    elif op == "div":
        if b == 0.0:
            raise EvalError("division by zero", node)
        r = a / b
    else:
        r = _pow(a, b, node)
    if not math.isfinite(r):
        raise EvalError(f"overflow in '{op}'", node)
    return r


def _pow(a: float, b: float, node: Expr) -> float:
    # Real-valued powers only: no complex promotion for negative bases.
    if a < 0.0 and b != math.floor(b):
        raise EvalError(f"fractional power {b!r} of negative base {a!r}", node)
    if a == 0.0 and b < 0.0:
        raise EvalError(f"zero raised to negative power {b!r}", node)
    try:
        return math.pow(a, b)
    except (OverflowError, ValueError):
        raise EvalError(f"overflow in pow({a!r}, {b!r})", node) from None


# ---------------------------------------------------------------------------
# Vectorized evaluation

def evaluate_array(expr: Expr, xs: np.ndarray) -> np.ndarray:
    """Evaluate over an array, mapping domain failures to NaN/inf.

    No exceptions are raised for bad points and no codomain checks run;
    callers mask non-finite entries.  The result may alias ``xs`` when the
    expression is the bare variable.
    """
    arr = np.asarray(xs, dtype=float)
    with np.errstate(all="ignore"):
        return _eval_array(expr, arr)


def _eval_array(node: Expr, xs: np.ndarray) -> np.ndarray:
    if isinstance(node, Constant):
        return np.full(xs.shape, node.value)
    if isinstance(node, Variable):
        return xs
    if isinstance(node, Unary):
        v = _eval_array(node.child, xs)
        op = node.op
        if op == "neg":
            return -v
        if op == "abs":
            return np.abs(v)
        if op == "exp":
            return np.exp(v)
        if op == "log":
            return np.log(v)
        return np.sqrt(v)
    a = _eval_array(node.left, xs)
    b = _eval_array(node.right, xs)
    op = node.op
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "pow":
        return np.power(a, b)
    if op == "min":
        return np.minimum(a, b)
    return np.maximum(a, b)


# ---------------------------------------------------------------------------
# Rendering

_ATOM, _POW, _TERM, _SUM = 4, 3, 2, 1


def _prec(node: Expr) -> int:
    if isinstance(node, Binary):
        if node.op in ("min", "max"):
            return _ATOM
        if node.op == "pow":
            return _POW
        if node.op in ("mul", "div"):
            return _TERM
        return _SUM
    return _ATOM


def _wrap(node: Expr, minimum: int) -> str:
    text = _render(node)
    return f"({text})" if _prec(node) < minimum else text


def _format_number(v: float) -> str:
    if v == math.floor(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def _render(node: Expr) -> str:
    if isinstance(node, Constant):
        return _format_number(node.value)
    if isinstance(node, Variable):
        return "x"
    if isinstance(node, Unary):
        if node.op == "neg":
            return "-" + _wrap(node.child, _ATOM)
        return f"{node.op}({_render(node.child)})"
    op = node.op
    if op in ("min", "max"):
        return f"{op}({_render(node.left)}, {_render(node.right)})"
    if op == "pow":
        return _wrap(node.left, _ATOM) + "^" + _wrap(node.right, _POW)
    if op in ("mul", "div"):
        symbol = "*" if op == "mul" else "/"
        return _wrap(node.left, _TERM) + symbol + _wrap(node.right, _POW)
    symbol = "+" if op == "add" else "-"
    return _wrap(node.left, _SUM) + symbol + _wrap(node.right, _TERM)


def render(expr: Expr) -> str:
    """Render to text that reparses to a structurally identical tree.

    The one exception: a programmatically built negative ``Constant``
    renders with a leading minus and reparses as a negation node (the
    parser itself never produces negative constants).
    """
    return _render(expr)


# ---------------------------------------------------------------------------

def substitute(expr: Expr, replacement: Expr) -> Expr:
    """Replace every variable occurrence with another expression."""
    if isinstance(expr, Variable):
        return replacement
    if isinstance(expr, Constant):
        return expr
    if isinstance(expr, Unary):
        return Unary(expr.op, substitute(expr.child, replacement))
    return Binary(expr.op, substitute(expr.left, replacement), substitute(expr.right, replacement))
