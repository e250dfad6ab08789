"""Recursive-descent parser for polynomial expressions in ``z``.

Grammar (whitespace is ignored)::

    expr  := sign? term (('+' | '-') term)*
    term  := coeff? '*'? 'z' ('^' uint)? | coeff
    coeff := real | imag | '(' sign? num (('+' | '-') num)? ')'
    num   := real | imag
    imag  := real? 'i'

Repeated powers accumulate, so ``z^2 + 3z^2`` is ``4z^2``.
"""

from __future__ import annotations

import math
import re

from .poly import Polynomial

_REAL = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_UINT = re.compile(r"\d+")


class PositionedParseError(ValueError):
    def __init__(self, text: str, offset: int, expected: str):
        found = repr(text[offset]) if offset < len(text) else "end of input"
        super().__init__(f"at offset {offset}: expected {expected}, found {found}")
        self.text = text
        self.offset = offset
        self.expected = expected


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def expect(self, ch: str) -> None:
        if not self.take(ch):
            self.fail(repr(ch))

    def fail(self, expected: str):
        self._skip()
        raise PositionedParseError(self.text, self.pos, expected)

    def match(self, pattern: re.Pattern) -> str | None:
        self._skip()
        m = pattern.match(self.text, self.pos)
        if m is None:
            return None
        self.pos = m.end()
        return m.group()

    # num := real | real? 'i'
    def number(self) -> complex | None:
        lit = self.match(_REAL)
        if self.take("i"):
            return complex(0.0, float(lit) if lit else 1.0)
        return None if lit is None else complex(float(lit))

    def coeff(self) -> complex | None:
        if self.take("("):
            negate = self.take("-")
            if not negate:
                self.take("+")
            value = self.number()
            if value is None:
                self.fail("number")
            if negate:
                value = -value
            for op in "+-":
                if self.take(op):
                    second = self.number()
                    if second is None:
                        self.fail("number")
                    value = value + second if op == "+" else value - second
                    break
            self.expect(")")
            return value
        return self.number()

    def term(self, acc: dict[int, complex], sign: float) -> None:
        c = self.coeff()
        starred = self.take("*")
        if self.take("z"):
            power = 1
            if self.take("^"):
                lit = self.match(_UINT)
                if lit is None:
                    self.fail("non-negative integer exponent")
                power = int(lit)
        else:
            if c is None or starred:
                self.fail("'z'" if starred else "coefficient or 'z'")
            power = 0
        value = (1 + 0j) if c is None else c
        acc[power] = acc.get(power, 0j) + sign * value

    def expr(self) -> dict[int, complex]:
        if not self.peek():
            self.fail("polynomial expression")
        acc: dict[int, complex] = {}
        sign = 1.0
        if self.take("-"):
            sign = -1.0
        else:
            self.take("+")
        self.term(acc, sign)
        while True:
            if self.take("+"):
                self.term(acc, 1.0)
            elif self.take("-"):
                self.term(acc, -1.0)
            else:
                break
        if self.peek():
            self.fail("'+', '-' or end of input")
        return acc


def parse_polynomial(text: str) -> Polynomial:
    acc = _Parser(text).expr()
    n = max(acc)
    return Polynomial([acc.get(i, 0j) for i in range(n + 1)])


def parse_complex(text: str) -> complex:
    """Parse a constant such as ``1.5-0.5i``, ``-2`` or ``3i``."""
    p = parse_polynomial(text)
    if p.degree != 0:
        raise PositionedParseError(text, text.find("z"), "a constant without 'z'")
    return p.coeffs[0]


def format_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}i"


def format_polynomial(p: Polynomial) -> str:
    """Text that :func:`parse_polynomial` maps back to the same coefficients."""
    terms = []
    for power in range(p.degree, -1, -1):
        c = p.coeffs[power]
        if c == 0 and p.degree > 0:
            continue
        op = "-" if math.copysign(1.0, c.imag) < 0 else "+"
        coef = f"({c.real!r}{op}{abs(c.imag)!r}i)"
        if power == 0:
            terms.append(coef)
        elif power == 1:
            terms.append(f"{coef}z")
        else:
            terms.append(f"{coef}z^{power}")
    return " + ".join(terms)
