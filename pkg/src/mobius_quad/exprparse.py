"""Tiny expression language in one real variable ``x``.

Grammar (loosest to tightest)::

    expr   := expr ('+' | '-') expr          left-assoc
            | expr ('*' | '/') expr          left-assoc
            | '-' expr                       unary minus
            | expr '^' expr                  right-assoc
            | NUMBER | 'x' | NAME '(' args ')' | '(' expr ')'

So ``-x^2`` is ``-(x^2)`` and ``2^3^2`` is ``2^(3^2)``.  Functions: ``abs cos
sin exp log sqrt`` (one argument) and ``pow`` (two).  Parsing is a Pratt
(top-down operator precedence) loop with one token of lookahead.

Evaluation uses numpy, so ``eval_expr`` accepts a float or an array.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ArityMismatch, DomainViolation, ExprSyntaxError, UnknownFunction

FUNCTIONS = {"abs": 1, "cos": 1, "sin": 1, "exp": 1, "log": 1, "sqrt": 1, "pow": 2}


@dataclass(frozen=True)
class Num:
    value: float

    def __post_init__(self):
        if not (np.isfinite(self.value) and math.copysign(1.0, self.value) > 0):
            raise ValueError("number literals are finite and nonnegative; use Neg for signs")


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple

    def __post_init__(self):
        arity = FUNCTIONS.get(self.name)
        if arity is None:
            raise UnknownFunction(self.name, 0)
        if len(self.args) != arity:
            raise ArityMismatch(self.name, arity, len(self.args), 0)


Expr = Union[Num, Var, Neg, BinOp, Call]


# tokens ------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),])"
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # 'num', 'name', 'op', 'end'
    text: str
    offset: int


def tokenize(src: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {src[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), pos))
        pos = m.end()
    toks.append(_Tok("end", "", len(src)))
    return toks


_LBP = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 40}
_UNARY_RBP = 30


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = tokenize(src)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def _err_offset(self, t: _Tok) -> int:
        # offsets always point inside the source
        return min(t.offset, max(len(self.src) - 1, 0))

    def expect(self, text: str) -> _Tok:
        t = self.tok
        if t.kind != "op" or t.text != text:
            found = "end of input" if t.kind == "end" else repr(t.text)
            raise ExprSyntaxError(f"unexpected {found}", self._err_offset(t), repr(text))
        return self.advance()

    def expression(self, rbp: int = 0) -> Expr:
        left = self.nud(self.advance())
        while True:
            t = self.tok
            lbp = _LBP.get(t.text, 0) if t.kind == "op" else 0
            if rbp >= lbp:
                return left
            self.advance()
            if t.text == "^":
                left = BinOp("^", left, self.expression(lbp - 1))
            else:
                left = BinOp(t.text, left, self.expression(lbp))

    def nud(self, t: _Tok) -> Expr:
        if t.kind == "num":
            value = float(t.text)
            if not math.isfinite(value):
                raise ExprSyntaxError(f"number {t.text!r} overflows a double", t.offset)
            return Num(value)
        if t.kind == "name":
            if self.tok.kind == "op" and self.tok.text == "(":
                return self.call(t)
            if t.text == "x":
                return Var()
            raise ExprSyntaxError(f"unknown variable {t.text!r}", t.offset, "'x' or a function call")
        if t.kind == "op" and t.text == "-":
            return Neg(self.expression(_UNARY_RBP))
        if t.kind == "op" and t.text == "(":
            inner = self.expression(0)
            self.expect(")")
            return inner
        found = "end of input" if t.kind == "end" else repr(t.text)
        raise ExprSyntaxError(f"unexpected {found}", self._err_offset(t),
                              "a number, 'x', '-', '(' or a function")

    def call(self, name_tok: _Tok) -> Expr:
        name = name_tok.text
        if name not in FUNCTIONS:
            raise UnknownFunction(name, name_tok.offset)
        self.expect("(")
        args = [self.expression(0)]
        while self.tok.kind == "op" and self.tok.text == ",":
            self.advance()
            args.append(self.expression(0))
        self.expect(")")
        if len(args) != FUNCTIONS[name]:
            raise ArityMismatch(name, FUNCTIONS[name], len(args), name_tok.offset)
        return Call(name, tuple(args))


def parse(src: str) -> Expr:
    if not src or not src.strip():
        raise ExprSyntaxError("empty expression", 0, "an expression")
    if not src.isascii():
        bad = next(i for i, c in enumerate(src) if not c.isascii())
        raise ExprSyntaxError("non-ASCII character", bad)
    p = _Parser(src)
    tree = p.expression(0)
    if p.tok.kind != "end":
        raise ExprSyntaxError(f"unexpected {p.tok.text!r}", p.tok.offset, "an operator or end of input")
    return tree


# printing ----------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}
_NEG_PREC = 3
_POW_PREC = 4
_ATOM_PREC = 5


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _POW_PREC if e.op == "^" else _PREC[e.op]
    if isinstance(e, Neg):
        return _NEG_PREC
    return _ATOM_PREC


def _wrap(e: Expr, min_prec: int) -> str:
    s = to_source(e)
    return f"({s})" if _prec(e) < min_prec else s


def to_source(e: Expr) -> str:
    """Print with the fewest parentheses that reparse to the same tree."""
    if isinstance(e, Num):
        return repr(float(e.value))
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Neg):
        return "-" + _wrap(e.operand, _NEG_PREC)
    if isinstance(e, Call):
        return f"{e.name}({', '.join(to_source(a) for a in e.args)})"
    if e.op == "^":
        return f"{_wrap(e.left, _ATOM_PREC)}^{_wrap(e.right, _POW_PREC)}"
    p = _PREC[e.op]
    return f"{_wrap(e.left, p)} {e.op} {_wrap(e.right, p + 1)}"


# evaluation --------------------------------------------------------------

def _first(mask, arr) -> float:
    return float(np.broadcast_to(arr, np.shape(mask))[mask].reshape(-1)[0])


def _pow(a, b):
    a, b = np.broadcast_arrays(a, b)
    bad = ((a < 0) & (b != np.floor(b))) | ((a == 0) & (b < 0))
    if bad.any():
        raise DomainViolation("pow", _first(bad, a))
    return np.power(a, b)


def _eval(e: Expr, x):
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return x
    if isinstance(e, Neg):
        return -_eval(e.operand, x)
    if isinstance(e, BinOp):
        a = _eval(e.left, x)
        b = _eval(e.right, x)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if e.op == "/":
            zero = np.asarray(b) == 0
            if zero.any():
                raise DomainViolation("/", 0.0)
            return a / b
        return _pow(a, b)
    args = [_eval(a, x) for a in e.args]
    name = e.name
    if name == "pow":
        return _pow(*args)
    (a,) = args
    if name == "log":
        bad = np.asarray(a) <= 0
        if bad.any():
            raise DomainViolation("log", _first(bad, a))
        return np.log(a)
    if name == "sqrt":
        bad = np.asarray(a) < 0
        if bad.any():
            raise DomainViolation("sqrt", _first(bad, a))
        return np.sqrt(a)
    return {"abs": np.abs, "cos": np.cos, "sin": np.sin, "exp": np.exp}[name](a)


def eval_expr(ast: Expr, x):
    """Evaluate ``ast`` at ``x`` (float or array)."""
    xa = np.asarray(x, dtype=float)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        out = np.asarray(_eval(ast, xa), dtype=float)
    out = np.broadcast_to(out, xa.shape) if out.shape != xa.shape else out
    return out if out.ndim else float(out)


def compile_integrand(src: str):
    """Parse ``src`` and wrap it as a vectorized integrand."""
    from .quadrature import Integrand

    tree = parse(src)
    return Integrand(lambda x: eval_expr(tree, x), vectorized=True, name=src)
