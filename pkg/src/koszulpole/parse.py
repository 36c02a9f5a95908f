"""Recursive-descent parser for homogeneous polynomial input.

Grammar (whitespace ignored)::

    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := factor ('*'? factor)*
    factor  := coefficient | variable ('^' uint)? | '(' expr ')' ('^' uint)?
    coefficient := integer | integer '/' integer
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, List, Tuple

from .poly import HomPoly, Monomial, RingCtx

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")

_Sparse = Dict[Monomial, Fraction]


class PolySyntaxError(ValueError):
    def __init__(self, message: str, position: int, text: str):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}: {text!r}")


class NotHomogeneous(ValueError):
    def __init__(self, d1: int, d2: int):
        self.degrees = (d1, d2)
        super().__init__(f"polynomial is not homogeneous: terms of degree {d1} and {d2}")


class UnknownVariable(ValueError):
    def __init__(self, name: str, position: int):
        self.name = name
        self.position = position
        super().__init__(f"unknown variable {name!r} at position {position}")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            toks.append(("num", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            toks.append(("name", m.group(2), m.start(2)))
        else:
            toks.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


def _add(a: _Sparse, b: _Sparse, sign: int = 1) -> _Sparse:
    out = dict(a)
    for m, c in b.items():
        v = out.get(m, 0) + sign * c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _mul(a: _Sparse, b: _Sparse) -> _Sparse:
    out: _Sparse = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            out[m] = out.get(m, 0) + ca * cb
    return {m: c for m, c in out.items() if c}


class _Parser:
    def __init__(self, text: str, ctx: RingCtx):
        self.text = text
        self.ctx = ctx
        self.toks = _tokenize(text)
        self.i = 0
        self.names = {name: k for k, name in enumerate(ctx.varnames)}
        self.one = {(0,) * ctx.nvars: Fraction(1)}

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, message):
        raise PolySyntaxError(message, self.peek()[2], self.text)

    def expect_op(self, op):
        kind, val, _ = self.peek()
        if kind != "op" or val != op:
            self.error(f"expected {op!r}")
        self.take()

    def parse(self) -> _Sparse:
        if self.peek()[0] == "end":
            self.error("empty expression")
        out = self.expr()
        if self.peek()[0] != "end":
            self.error("unexpected token")
        return out

    def expr(self) -> _Sparse:
        sign = 1
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        acc = _add({}, self.term(), sign)
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                acc = _add(acc, self.term(), -1 if val == "-" else 1)
            else:
                return acc

    def _starts_factor(self) -> bool:
        kind, val, _ = self.peek()
        return kind in ("num", "name") or (kind == "op" and val == "(")

    def term(self) -> _Sparse:
        acc = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                acc = _mul(acc, self.factor())
            elif self._starts_factor():
                acc = _mul(acc, self.factor())
            else:
                return acc

    def exponent(self) -> int:
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val, _ = self.peek()
            if kind != "num":
                self.error("expected a non-negative integer exponent")
            self.take()
            return int(val)
        return 1

    def factor(self) -> _Sparse:
        kind, val, pos = self.peek()
        if kind == "num":
            self.take()
            c = Fraction(int(val))
            k2, v2, _ = self.peek()
            if k2 == "op" and v2 == "/":
                self.take()
                k3, v3, _ = self.peek()
                if k3 != "num":
                    self.error("expected an integer denominator")
                self.take()
                if int(v3) == 0:
                    raise PolySyntaxError("zero denominator", pos, self.text)
                c = c / int(v3)
            return {m: c for m in self.one} if c else {}
        if kind == "name":
            self.take()
            if val not in self.names:
                raise UnknownVariable(val, pos)
            e = [0] * self.ctx.nvars
            e[self.names[val]] = self.exponent()
            return {tuple(e): Fraction(1)}
        if kind == "op" and val == "(":
            self.take()
            inner = self.expr()
            self.expect_op(")")
            power = self.exponent()
            out = self.one
            for _ in range(power):
                out = _mul(out, inner)
            return out
        self.error("expected a coefficient, variable or '('")


def parse_poly(text: str, ctx: RingCtx) -> HomPoly:
    """Parse ``text`` into a homogeneous polynomial over ``ctx.field``."""
    sparse = _Parser(text, ctx).parse()
    degrees = sorted({sum(m) for m in sparse})
    if len(degrees) > 1:
        raise NotHomogeneous(degrees[0], degrees[1])
    degree = degrees[0] if degrees else 0
    return HomPoly.from_terms(ctx, degree, sparse)
