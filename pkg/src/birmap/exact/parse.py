"""Parse polynomial and rational-function expressions.

Accepted syntax: integers, ``i`` (the imaginary unit), ``2i``-style imaginary
literals, variable names, parentheses and the operators ``+ - * / ^``.  This
covers everything :func:`render_poly` and ``str(RationalFunction)`` produce, so
rendering round-trips exactly.
"""

from __future__ import annotations

import re
from fractions import Fraction

from birmap.errors import ParseError
from birmap.exact.gaussian import GaussianRational
from birmap.exact.poly import MultiPoly
from birmap.exact.ratfunc import RationalFunction

__all__ = ["parse_expr", "parse_poly", "parse_rational"]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)(?P<imag>i(?![A-Za-z0-9_]))?|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()])|(?P<bad>\S))"
)


def _tokenize(text: str):
    out = []
    for m in _TOKEN.finditer(text):
        if m.group("bad") is not None:
            raise ParseError(f"unexpected character {m.group('bad')!r} in {text!r}")
        if m.group("num") is not None:
            out.append(("imag" if m.group("imag") else "num", m.group("num")))
        elif m.group("name") is not None:
            out.append(("name", m.group("name")))
        elif m.group("op") is not None:
            out.append(("op", m.group("op")))
    return out


class _Parser:
    def __init__(self, text, variables):
        self.text = text
        self.variables = tuple(variables)
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def fail(self, what):
        kind, val = self.peek()
        shown = "end of input" if kind is None else repr(val)
        raise ParseError(f"in {self.text!r}: expected {what}, got {shown}")

    def parse(self) -> RationalFunction:
        if not self.tokens:
            raise ParseError("empty expression")
        value = self.expr()
        if self.peek()[0] is not None:
            self.fail("operator or end of input")
        return value

    def expr(self):
        value = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise ParseError(f"division by zero in {self.text!r}")
                value = value / rhs
        return value

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, val = self.take()
            if kind != "num":
                self.pos -= 1
                self.fail("integer exponent")
            n = sign * int(val)
            if n < 0 and base.is_zero():
                raise ParseError(f"zero raised to a negative power in {self.text!r}")
            return base**n
        return base

    def atom(self):
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return RationalFunction.constant(self.variables, Fraction(int(val)))
        if kind == "imag":
            self.take()
            return RationalFunction.constant(self.variables, GaussianRational(0, int(val)))
        if kind == "name":
            self.take()
            if val == "i":
                return RationalFunction.constant(self.variables, GaussianRational(0, 1))
            if val not in self.variables:
                raise ParseError(f"unknown variable {val!r} in {self.text!r} (expected one of {self.variables})")
            idx = self.variables.index(val)
            return RationalFunction.from_poly(MultiPoly.gens(self.variables)[idx])
        if (kind, val) == ("op", "("):
            self.take()
            inner = self.expr()
            if self.peek() != ("op", ")"):
                self.fail("')'")
            self.take()
            return inner
        self.fail("number, variable or '('")


def parse_expr(text: str, variables) -> RationalFunction:
    """Parse ``text`` into a reduced rational function in ``variables``."""
    if not isinstance(text, str):
        raise ParseError(f"expression must be a string, got {type(text).__name__}")
    return _Parser(text, variables).parse()


def parse_rational(text: str, variables) -> RationalFunction:
    return parse_expr(text, variables)


def parse_poly(text: str, variables) -> MultiPoly:
    """Parse a polynomial; a non-polynomial quotient is a :class:`ParseError`.

    >>> str(parse_poly("3/7*x0^2*x1 - x0 + (1+2i)*x2", ("x0", "x1", "x2")))
    '3/7*x0^2*x1 - x0 + (1+2i)*x2'
    """
    r = parse_expr(text, variables)
    if not r.is_polynomial():
        raise ParseError(f"{text!r} is not a polynomial")
    return r.numerator.scale(r.denominator.constant_value().inverse())
