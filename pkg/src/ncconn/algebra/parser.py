"""Text syntax for torus elements.

Grammar (whitespace ignored)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := power (('*'|'/') power)*
    power  := atom ['^' ['-'] INT]
    atom   := NUMBER | 'i' | 'q' | 'U' | 'V' | '(' expr ')'
    NUMBER := INT ['/' INT] ['i']      e.g. 3, 1/2, 2i, 1/2i

``a / b`` and negative powers require the divisor to be invertible.
:func:`format_element` produces text that parses back to the same element.
"""

from __future__ import annotations

import re
from typing import List, Tuple

from gmpy2 import mpq

from .gauss import G1, gformat
from .torus import Element, NotInvertible, QuantumTorus


class ParseError(ValueError):
    """Syntax or evaluation error with the 0-based offset into the input."""

    def __init__(self, message: str, position: int, text: str = ""):
        self.message = message
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}" + (f" in {text!r}" if text else ""))


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?i?)|(?P<name>[iqUV])|(?P<op>[-+*/^()]))")

Token = Tuple[str, str, int]


def _tokenize(text: str) -> List[Token]:
    out: List[Token] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[bad]!r}", bad, text)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, alg: QuantumTorus, text: str):
        self.alg = alg
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.toks[self.i]

    def take(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg: str, tok: Token) -> ParseError:
        return ParseError(msg, tok[2], self.text)

    def expect(self, op: str) -> None:
        t = self.take()
        if t[0] != "op" or t[1] != op:
            raise self.fail(f"expected {op!r}", t)

    def parse(self) -> Element:
        if self.peek()[0] == "end":
            raise self.fail("empty expression", self.peek())
        e = self.expr()
        if self.peek()[0] != "end":
            raise self.fail(f"unexpected {self.peek()[1]!r}", self.peek())
        return e

    def expr(self) -> Element:
        sign = 1
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            sign = -1 if t[1] == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] in "+-":
                self.take()
                rhs = self.term()
                acc = acc + rhs if t[1] == "+" else acc - rhs
            else:
                return acc

    def term(self) -> Element:
        acc = self.power()
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] in "*/":
                self.take()
                start = self.peek()
                rhs = self.power()
                if t[1] == "*":
                    acc = acc * rhs
                else:
                    try:
                        acc = acc * rhs.inverse()
                    except NotInvertible as exc:
                        raise self.fail(f"divisor is not invertible ({exc})", start) from None
            else:
                return acc

    def power(self) -> Element:
        start = self.peek()
        base = self.atom()
        t = self.peek()
        if not (t[0] == "op" and t[1] == "^"):
            return base
        self.take()
        neg = False
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            neg = t[1] == "-"
            self.take()
        t = self.take()
        if t[0] != "num" or not t[1].isdigit():
            raise self.fail("exponent must be an integer", t)
        k = int(t[1])
        try:
            return base ** (-k if neg else k)
        except NotInvertible as exc:
            raise self.fail(f"negative power of a non-invertible element ({exc})", start) from None

    def atom(self) -> Element:
        t = self.take()
        kind, val, _ = t
        alg = self.alg
        if kind == "num":
            imag = val.endswith("i")
            r = mpq(val[:-1] if imag else val)
            return alg.element({(0, 0, 0): (mpq(0), r) if imag else (r, mpq(0))})
        if kind == "name":
            return {"i": alg.i, "q": alg.q, "U": alg.U, "V": alg.V}[val]
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect(")")
            return e
        raise self.fail("expected a number, i, q, U, V or '('" if kind != "end" else "unexpected end of input", t)


def parse(alg: QuantumTorus, text: str) -> Element:
    return _Parser(alg, text).parse()


def _factor(sym: str, k: int) -> str:
    if k == 0:
        return ""
    return sym if k == 1 else f"{sym}^{k}"


def _format_poly(terms) -> str:
    if not terms:
        return "0"
    pieces: List[str] = []
    for (m, n, t), c in sorted(terms.items()):
        mono = "*".join(f for f in (_factor("q", t), _factor("U", m), _factor("V", n)) if f)
        neg = not c[1] and c[0] < 0 or not c[0] and c[1] < 0
        mag = (-c[0], -c[1]) if neg else c
        if mono:
            body = mono if mag == G1 else f"{gformat(mag)}*{mono}"
        else:
            body = gformat(mag)
        if not pieces:
            pieces.append(f"-{body}" if neg else body)
        else:
            pieces.append(f" - {body}" if neg else f" + {body}")
    return "".join(pieces)


def format_element(x: Element) -> str:
    """Canonical text: terms ordered by ``(m, n)`` then ``q``-power."""
    num = _format_poly(x.terms)
    if not x.den:
        return num
    d = _format_poly(x.alg._den)
    dpow = f"({d})" if x.den == 1 else f"({d})^{x.den}"
    return f"({num}) / {dpow}"
