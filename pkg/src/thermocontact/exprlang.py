"""A small expression language for scalar fields on the phase space.

See :data:`GRAMMAR`.  Expressions compile to :class:`ScalarField` objects whose
derivatives come from forward-mode dual numbers.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional, Union

from . import dual
from .chart import CotangentVector, DarbouxPoint, ScalarField, coordinate_names
from .errors import DomainError, TPSError

__all__ = [
    "GRAMMAR",
    "FUNCTIONS",
    "ExprError",
    "LexError",
    "ExprSyntaxError",
    "Token",
    "Num",
    "Var",
    "Neg",
    "BinOp",
    "Call",
    "tokenize",
    "parse",
    "to_source",
    "variables",
    "evaluate",
    "eval_with_gradient",
    "compile_field",
    "compile_function",
]

GRAMMAR = """\
Grammar, lowest to highest precedence:

    expr := expr ('+' | '-') expr      left associative
          | expr ('*' | '/') expr      left associative
          | '-' expr                   unary minus
          | expr '^' expr              right associative
          | NUMBER | NAME | FUNC '(' expr ')' | '(' expr ')'
    FUNC := exp | ln | sqrt

Unary minus binds looser than '^', so -x^2 means -(x^2).  There is no
implicit multiplication.  Names must belong to the declared chart
(w, p1..pn, q1..qn, plus any aliases).  a^b with a constant integral
exponent accepts any base; every other power needs a positive base.
Error columns are 0-based character offsets.
"""

FUNCTIONS = ("exp", "ln", "sqrt")
MAX_DEPTH = 200


class ExprError(TPSError, ValueError):
    """Malformed expression; ``pos`` is the 0-based column of the problem."""

    def __init__(self, message: str, pos: int, expected: Iterable[str] = ()):
        self.pos = pos
        self.expected = tuple(expected)
        text = f"{message} at column {pos}"
        if self.expected:
            text += f" (expected {', '.join(self.expected)})"
        super().__init__(text)


class LexError(ExprError):
    pass


class ExprSyntaxError(ExprError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str  # num, ident, op, lparen, rparen, end
    text: str
    pos: int
    value: Optional[float] = None


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^])
  | (?P<lparen>\()
  | (?P<rparen>\))
    """,
    re.VERBOSE,
)


def tokenize(src: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise LexError(f"unexpected character {src[pos]!r}", pos)
        kind = m.lastgroup
        text = m.group()
        if kind == "num":
            value = float(text)
            if not math.isfinite(value):
                raise LexError(f"numeric literal {text!r} overflows", pos)
            tokens.append(Token(kind, text, pos, value))
        elif kind != "ws":
            tokens.append(Token(kind, text, pos))
        pos = m.end()
    tokens.append(Token("end", "", len(src)))
    return tokens


# AST.  Positions are kept for error messages but ignored by equality.

@dataclass(frozen=True)
class Num:
    value: float
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Var:
    name: str
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Neg:
    operand: "Node"
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"
    pos: int = field(default=0, compare=False)


Node = Union[Num, Var, Neg, BinOp, Call]

_INFIX = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 40}
_UNARY = 30
_ATOM_START = ("number", "name", "'('", "'-'")


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0
        self.depth = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expr(self, rbp: int = 0) -> Node:
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise ExprSyntaxError("expression nested too deeply", self.tok.pos)
        left = self.nud(self.advance())
        while self.tok.kind == "op" and _INFIX[self.tok.text] > rbp:
            t = self.advance()
            lbp = _INFIX[t.text]
            right = self.expr(lbp - 1 if t.text == "^" else lbp)
            left = BinOp(t.text, left, right, t.pos)
        self.depth -= 1
        return left

    def nud(self, t: Token) -> Node:
        if t.kind == "num":
            return Num(t.value, t.pos)
        if t.kind == "ident":
            if self.tok.kind == "lparen":
                if t.text not in FUNCTIONS:
                    raise ExprSyntaxError(f"unknown function {t.text!r}", t.pos, FUNCTIONS)
                self.advance()
                arg = self.expr()
                self.expect_rparen()
                return Call(t.text, arg, t.pos)
            if t.text in FUNCTIONS:
                raise ExprSyntaxError(f"function {t.text!r} needs an argument", self.tok.pos, ("'('",))
            return Var(t.text, t.pos)
        if t.kind == "op" and t.text == "-":
            return Neg(self.expr(_UNARY), t.pos)
        if t.kind == "lparen":
            inner = self.expr()
            self.expect_rparen()
            return inner
        what = "end of input" if t.kind == "end" else repr(t.text)
        raise ExprSyntaxError(f"unexpected {what}", t.pos, _ATOM_START)

    def expect_rparen(self):
        if self.tok.kind != "rparen":
            what = "end of input" if self.tok.kind == "end" else repr(self.tok.text)
            raise ExprSyntaxError(f"unexpected {what}", self.tok.pos, ("')'", "operator"))
        self.advance()


def parse(tokens: Union[str, list[Token]]) -> Node:
    """Parse a token list (or source text) into an AST."""
    if isinstance(tokens, str):
        tokens = tokenize(tokens)
    p = _Parser(tokens)
    node = p.expr()
    if p.tok.kind != "end":
        raise ExprSyntaxError(f"unexpected {p.tok.text!r}", p.tok.pos, ("operator", "end of input"))
    return node


def _prec(node: Node) -> int:
    if isinstance(node, BinOp):
        return _INFIX[node.op]
    if isinstance(node, Neg):
        return _UNARY
    return 100


def _num_text(v: float) -> str:
    if v.is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def to_source(node: Node) -> str:
    """Print with the minimum parentheses that reparse to the same AST."""
    if isinstance(node, Num):
        return _num_text(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    if isinstance(node, Neg):
        inner = to_source(node.operand)
        return "-" + (f"({inner})" if _prec(node.operand) < _UNARY else inner)
    P = _INFIX[node.op]
    left, right = to_source(node.left), to_source(node.right)
    if _prec(node.left) < P or (node.op == "^" and _prec(node.left) == P):
        left = f"({left})"
    if _prec(node.right) < P or (node.op != "^" and _prec(node.right) == P):
        right = f"({right})"
    return f"{left}{node.op}{right}"


def variables(node: Node) -> set[str]:
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, Num):
        return set()
    if isinstance(node, (Neg, Call)):
        return variables(node.operand if isinstance(node, Neg) else node.arg)
    return variables(node.left) | variables(node.right)


def _check_names(node: Node, allowed: Iterable[str]):
    allowed = set(allowed)

    def walk(nd):
        if isinstance(nd, Var):
            if nd.name not in allowed:
                raise ExprSyntaxError(f"unknown variable {nd.name!r}", nd.pos, sorted(allowed))
        elif isinstance(nd, (Neg, Call)):
            walk(nd.operand if isinstance(nd, Neg) else nd.arg)
        elif isinstance(nd, BinOp):
            walk(nd.left)
            walk(nd.right)

    walk(node)


def _fail(node: Node, why: str):
    raise DomainError(f"{why} in '{to_source(node)}'")


def evaluate(node: Node, env: Mapping[str, object]):
    """Evaluate with floats or (nested) duals bound to the variable names."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        try:
            return env[node.name]
        except KeyError:
            raise ExprSyntaxError(f"unbound variable {node.name!r}", node.pos) from None
    if isinstance(node, Neg):
        return -evaluate(node.operand, env)
    if isinstance(node, Call):
        x = evaluate(node.arg, env)
        v = dual.primal(x)
        if node.func == "ln" and not v > 0.0:
            _fail(node, "ln of a non-positive value")
        if node.func == "sqrt" and (v < 0.0 or (v == 0.0 and isinstance(x, dual.Dual))):
            _fail(node, "sqrt of a negative value" if v < 0.0 else "sqrt is not differentiable at 0")
        try:
            return getattr(dual, "log" if node.func == "ln" else node.func)(x)
        except OverflowError:
            _fail(node, "overflow")
    if node.op == "^":
        return _power(node, env)
    a = evaluate(node.left, env)
    b = evaluate(node.right, env)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if dual.primal(b) == 0.0:
        _fail(node, "division by zero")
    return a / b


def _power(node: BinOp, env):
    base = evaluate(node.left, env)
    b = dual.primal(base)
    try:
        if not variables(node.right):
            k = dual.primal(evaluate(node.right, env))
            if k.is_integer():
                if b == 0.0 and k < 0:
                    _fail(node, "zero raised to a negative power")
                return base ** k if isinstance(base, dual.Dual) else b ** int(k)
            if not b > 0.0:
                _fail(node, "non-integer power of a non-positive base")
            return base ** k
        if not b > 0.0:
            _fail(node, "variable power of a non-positive base")
        return dual.exp(evaluate(node.right, env) * dual.log(base))
    except OverflowError:
        _fail(node, "overflow")


def _darboux_env(coords, n: int, aliases: Optional[Mapping[str, Callable]] = None) -> dict:
    env = dict(zip(coordinate_names(n), coords))
    if aliases:
        for name, fn in aliases.items():
            env[name] = fn(coords)
    return env


def compile_field(src: Union[str, Node], n: int, aliases: Optional[Mapping[str, Callable]] = None,
                  name: Optional[str] = None) -> ScalarField:
    """Compile expression text into a :class:`ScalarField` on the Darboux chart.

    ``aliases`` maps extra names (e.g. physical variables ``T``) to functions
    of the coordinate list.
    """
    node = parse(src) if isinstance(src, str) else src
    _check_names(node, list(coordinate_names(n)) + list(aliases or {}))
    label = name or (src if isinstance(src, str) else to_source(node))
    return ScalarField(lambda coords: evaluate(node, _darboux_env(coords, n, aliases)), name=label)


def compile_function(src: Union[str, Node], names: Iterable[str]) -> Callable:
    """Compile expression text into ``f(values)`` over the given variable names.

    The result accepts a sequence of floats or duals, so it can serve as a
    fundamental relation.
    """
    names = tuple(names)
    node = parse(src) if isinstance(src, str) else src
    _check_names(node, names)
    return lambda values: evaluate(node, dict(zip(names, values)))


def eval_with_gradient(ast: Union[str, Node], at: DarbouxPoint) -> tuple[float, CotangentVector]:
    """Value and exact differential of an expression at a Darboux point."""
    f = compile_field(ast, at.n)
    return f.value(at), f.differential(at)
