"""Expression grammar.

A Pratt parser over a small ASCII language::

    expr    := sum
    sum     := product (("+" | "-") product)*
    product := power (("*" | "/" | <juxtaposition>) power)*
    power   := unary ("^" power)?              (right associative)
    unary   := "-" unary | primary              (binds tighter than "^")
    primary := NUMBER | IDENT | IDENT "(" args ")" | "(" expr ")"

``x``, ``y``, ``z`` are coordinates, ``eps`` is the sign symbol,
``exp/log/sin/cos/sqrt`` are builtins, ``D(e, v[, n])`` differentiates,
``INT(e, v, lo)`` is an antiderivative from ``lo``; other identifiers are
parameters, or opaque functions when applied to coordinates, e.g. ``a(y,z)``.
Exponents must reduce to rational constants.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .symcore import (
    EPS,
    Antideriv,
    Apply,
    Const,
    Coord,
    Coordinate,
    Expr,
    Opaque,
    Param,
    Power,
    Product,
    Sum,
    diff,
    render,
    simplify,
)

__all__ = ["ParseError", "parse_expr", "render", "RESERVED"]

BUILTINS = ("exp", "log", "sin", "cos", "sqrt")
RESERVED = frozenset({"x", "y", "z", "D", "INT", *BUILTINS})

START = frozenset({"number", "identifier", "'('", "'-'"})
AFTER_OPERAND = frozenset({"'+'", "'-'", "'*'", "'/'", "'^'", "number", "identifier", "'('", "end of input"})


class ParseError(ValueError):
    """Syntax error with the byte offset and the set of acceptable tokens."""

    def __init__(self, message: str, offset: int, expected=frozenset()):
        self.offset = offset
        self.expected = frozenset(expected)
        exp = ", ".join(sorted(self.expected))
        super().__init__(f"{message} at offset {offset}" + (f" (expected {exp})" if exp else ""))


@dataclass(frozen=True)
class _Tok:
    kind: str  # number, ident, op, end, bad
    text: str
    offset: int


_TOKEN_RE = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|([-+*/^(),]))")


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos = 0
    n = len(text)

    def boff(i: int) -> int:
        return len(text[:i].encode("utf-8"))

    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            toks.append(_Tok("end", "", boff(n)))
            return toks
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            toks.append(_Tok("bad", text[pos], boff(pos)))
            toks.append(_Tok("end", "", boff(n)))
            return toks
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(_Tok("number", m.group(1), boff(start)))
        elif m.group(2):
            toks.append(_Tok("ident", m.group(2), boff(start)))
        else:
            toks.append(_Tok("op", m.group(3), boff(start)))
        pos = m.end()


_BINARY = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 30}
_UNARY_BP = 40


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, message: str, expected, tok: _Tok | None = None):
        tok = tok or self.tok
        if tok.kind == "bad":
            message = f"unexpected character {tok.text!r}"
        raise ParseError(message, tok.offset, expected)

    def expect(self, op: str) -> _Tok:
        if self.tok.kind == "op" and self.tok.text == op:
            return self.advance()
        self.error(f"unexpected {self._describe(self.tok)}", {f"'{op}'"})

    @staticmethod
    def _describe(t: _Tok) -> str:
        return "end of input" if t.kind == "end" else repr(t.text)

    # Pratt core ------------------------------------------------------------
    def _lbp(self) -> int:
        t = self.tok
        if t.kind == "op" and t.text in _BINARY:
            return _BINARY[t.text]
        if t.kind in ("number", "ident") or (t.kind == "op" and t.text == "("):
            return 20  # implicit multiplication
        return 0

    def parse(self, rbp: int = 0) -> Expr:
        left = self.nud()
        while self._lbp() > rbp:
            t = self.tok
            if t.kind == "op" and t.text in _BINARY:
                self.advance()
                if t.text == "+":
                    left = Sum((left, self.parse(10)))
                elif t.text == "-":
                    left = Sum((left, Product((Const(-1), self.parse(10)))))
                elif t.text == "*":
                    left = Product((left, self.parse(20)))
                elif t.text == "/":
                    left = Product((left, Power(self.parse(20), -1)))
                else:
                    start = self.tok
                    rhs = simplify(self.parse(29))
                    if not isinstance(rhs, Const):
                        raise ParseError("exponent must be a rational constant", start.offset, {"number"})
                    left = Power(left, rhs.value)
            else:
                left = Product((left, self.parse(20)))
        return left

    def nud(self) -> Expr:
        t = self.tok
        if t.kind == "number":
            self.advance()
            return Const(Fraction(t.text))
        if t.kind == "op" and t.text == "-":
            self.advance()
            return Product((Const(-1), self.parse(_UNARY_BP)))
        if t.kind == "op" and t.text == "(":
            self.advance()
            inner = self.parse(0)
            self.expect(")")
            return inner
        if t.kind == "ident":
            self.advance()
            return self.identifier(t)
        self.error(f"unexpected {self._describe(t)}", START)

    def _is_call(self) -> bool:
        return self.tok.kind == "op" and self.tok.text == "("

    def _coord_arg(self) -> Coord:
        t = self.tok
        if t.kind == "ident" and t.text in ("x", "y", "z"):
            self.advance()
            return Coord.from_symbol(t.text)
        self.error(f"unexpected {self._describe(t)}", {"coordinate"})

    def identifier(self, t: _Tok) -> Expr:
        name = t.text
        if name in ("x", "y", "z"):
            return Coordinate(Coord.from_symbol(name))
        if name in BUILTINS:
            if not self._is_call():
                self.error(f"unexpected {self._describe(self.tok)}", {"'('"})
            self.advance()
            arg = self.parse(0)
            self.expect(")")
            return Apply(name, arg)
        if name == "D":
            self.expect("(")
            body = self.parse(0)
            self.expect(",")
            var = self._coord_arg()
            order = 1
            if self.tok.kind == "op" and self.tok.text == ",":
                self.advance()
                nt = self.tok
                if nt.kind != "number" or not nt.text.isdigit():
                    self.error(f"unexpected {self._describe(nt)}", {"integer"})
                self.advance()
                order = int(nt.text)
            self.expect(")")
            return diff(body, var, order)
        if name == "INT":
            self.expect("(")
            body = self.parse(0)
            self.expect(",")
            var = self._coord_arg()
            self.expect(",")
            start = self.tok
            lo = simplify(self.parse(0))
            if not isinstance(lo, Const):
                raise ParseError("lower bound must be a rational constant", start.offset, {"number"})
            self.expect(")")
            return Antideriv(body, var, lo.value)
        if name == "eps":
            return EPS
        if self._is_call():
            self.advance()
            args: list[Coord] = []
            while True:
                at = self.tok
                c = self._coord_arg()
                if c in args:
                    raise ParseError(f"repeated argument {c.symbol}", at.offset, {"coordinate"})
                args.append(c)
                if self.tok.kind == "op" and self.tok.text == ",":
                    self.advance()
                    continue
                self.expect(")")
                break
            return Opaque(name, args)
        return Param(name)


def parse_expr(text: str, *, canonical: bool = True) -> Expr:
    """Parse ``text``; by default the canonical (simplified) form is returned."""
    p = _Parser(text)
    try:
        e = p.parse(0)
        if p.tok.kind != "end":
            p.error(f"unexpected {p._describe(p.tok)}", AFTER_OPERAND)
        return simplify(e) if canonical else e
    except ZeroDivisionError:
        raise ParseError("expression divides by zero", 0, frozenset()) from None
