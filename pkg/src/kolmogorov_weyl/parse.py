"""Small recursive-descent parser shared by the polynomial, exp-polynomial
and operator grammars.

Grammar::

    expr   := [+|-] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := atom ('^' INT)?
    atom   := NUMBER | NAME | NAME '(' expr ')' | '(' expr ')'

``NUMBER`` is an integer or a rational literal ``p/q`` written without
spaces.  Products are left-associative and never reordered, so the same
parser serves noncommutative algebras.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

from .errors import ParseError

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^(),]))"
)


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append(Token(kind, m.group(kind), start))
        pos = m.end()
    tokens.append(Token("end", "", n))
    return tokens


@dataclass
class Grammar:
    """Callbacks that turn parsed atoms into algebra values.

    ``number`` receives a Fraction, ``name`` an identifier, and ``call``
    an identifier plus its parsed argument.  The values returned must
    support ``+``, ``-``, ``*``, unary ``-`` and ``power(value, k)``.
    """

    number: Callable[[Fraction], Any]
    name: Callable[[str], Any]
    power: Callable[[Any, int], Any]
    call: Callable[[str, Any], Any] | None = None


class _Parser:
    def __init__(self, text: str, grammar: Grammar):
        self.text = text
        self.g = grammar
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def take(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> Token:
        tok = self.take()
        if tok.value != value or tok.kind == "end":
            raise ParseError(f"expected {value!r}", self.text, tok.pos)
        return tok

    def fail(self, message: str, tok: Token):
        raise ParseError(message, self.text, tok.pos)

    def parse(self):
        if self.peek().kind == "end":
            self.fail("empty expression", self.peek())
        value = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            self.fail(f"unexpected token {tok.value!r}", tok)
        return value

    def expr(self):
        tok = self.peek()
        negate = False
        if tok.kind == "op" and tok.value in "+-":
            self.take()
            negate = tok.value == "-"
        value = self.term()
        if negate:
            value = -value
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.value in "+-":
                self.take()
                rhs = self.term()
                value = value + rhs if tok.value == "+" else value - rhs
            else:
                return value

    def term(self):
        value = self.factor()
        while self.peek().kind == "op" and self.peek().value == "*":
            self.take()
            value = value * self.factor()
        return value

    def factor(self):
        base = self.atom()
        if self.peek().kind == "op" and self.peek().value == "^":
            self.take()
            tok = self.take()
            if tok.kind != "num" or "/" in tok.value:
                self.fail("exponent must be a non-negative integer", tok)
            base = self.g.power(base, int(tok.value))
        return base

    def atom(self):
        tok = self.take()
        if tok.kind == "num":
            return self.g.number(Fraction(tok.value))
        if tok.kind == "name":
            if self.peek().kind == "op" and self.peek().value == "(":
                if self.g.call is None:
                    self.fail(f"unknown function {tok.value!r}", tok)
                self.take()
                arg = self.expr()
                self.expect(")")
                try:
                    return self.g.call(tok.value, arg)
                except ParseError:
                    raise
                except ValueError as exc:
                    raise ParseError(str(exc), self.text, tok.pos) from exc
            try:
                return self.g.name(tok.value)
            except ParseError:
                raise
            except ValueError as exc:
                raise ParseError(str(exc), self.text, tok.pos) from exc
        if tok.kind == "op" and tok.value == "(":
            value = self.expr()
            self.expect(")")
            return value
        if tok.kind == "end":
            self.fail("unexpected end of input", tok)
        self.fail(f"unexpected token {tok.value!r}", tok)


def parse_with(text: str, grammar: Grammar):
    return _Parser(text, grammar).parse()


def format_rational(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def join_terms(pieces: list[tuple[Fraction, str]], sep: str = " ") -> str:
    """Join ``(coeff, body)`` pairs into ``a - b + c`` style text.

    ``body`` is the non-scalar part; an empty body prints the bare
    coefficient.
    """
    if not pieces:
        return "0"
    out = []
    for idx, (c, body) in enumerate(pieces):
        sign = "-" if c < 0 else "+"
        a = -c if c < 0 else c
        if body:
            text = body if a == 1 else f"{format_rational(a)}*{body}"
        else:
            text = format_rational(a)
        if idx == 0:
            out.append(("-" if sign == "-" else "") + text)
        else:
            out.append(f"{sep}{sign}{sep}{text}")
    return "".join(out)
