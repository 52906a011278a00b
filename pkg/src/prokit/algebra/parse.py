"""Recursive-descent parser for polynomial expressions.

Grammar::

    expr    := term (("+" | "-") term)*
    term    := unary ("*" unary)*
    unary   := "-" unary | "+" unary | power
    power   := atom ("^" ["-"] INT)?
    atom    := INT ("/" INT)? | NAME | "(" expr ")"

Products need an explicit ``*``; ``a/b`` is only a rational literal.
"""

import re
from fractions import Fraction

__all__ = ["ParseError", "parse_poly", "tokenize"]


class ParseError(ValueError):
    def __init__(self, message, pos, text=""):
        self.message = message
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}" + (f" in {text!r}" if text else ""))


_TOKEN = re.compile(r"\s*(?:(\d+)|([a-z][a-z0-9]*)|(\S))")


def tokenize(text):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2)))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", m.start(3), text)
            tokens.append((ch, ch, m.start(3)))
        pos = m.end()
    tokens.append(("end", None, n))
    return tokens


class _Parser:
    def __init__(self, text, ring):
        self.text = text
        self.ring = ring
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {kind!r}, found {what}", tok[2], self.text)
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok[2], self.text)

    def parse(self):
        if self.peek()[0] == "end":
            self.error("empty expression")
        value = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek()[0] == "*":
            self.take()
            value = value * self.unary()
        return value

    def unary(self):
        kind = self.peek()[0]
        if kind == "-":
            self.take()
            return -self.unary()
        if kind == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base_tok = self.peek()
        base = self.atom()
        if self.peek()[0] != "^":
            return base
        self.take()
        sign = 1
        if self.peek()[0] == "-":
            self.take()
            sign = -1
        tok = self.take("int")
        n = sign * tok[1]
        if n < 0:
            if not base.is_monomial():
                self.error("negative power of a non-monomial", base_tok)
            (e, _), = base.as_dict().items()
            for k, lau, name in zip(e, self.ring.laurent, self.ring.names):
                if k and not lau:
                    self.error(f"negative exponent on non-Laurent variable {name!r}", base_tok)
        try:
            return base ** n
        except ZeroDivisionError:
            self.error("zero to a negative power", base_tok)
        except OverflowError as exc:
            self.error(str(exc), tok)

    def atom(self):
        tok = self.peek()
        kind = tok[0]
        if kind == "int":
            self.take()
            value = Fraction(tok[1])
            if self.peek()[0] == "/":
                self.take()
                den = self.take("int")
                if den[1] == 0:
                    self.error("zero denominator", den)
                value = Fraction(tok[1], den[1])
            try:
                return self.ring.constant(value)
            except ZeroDivisionError:
                self.error(f"denominator not invertible in {self.ring.field.name}", tok)
        if kind == "name":
            self.take()
            if tok[1] not in self.ring.names:
                self.error(f"unknown variable {tok[1]!r}", tok)
            return self.ring.gen(tok[1])
        if kind == "(":
            self.take()
            value = self.expr()
            self.take(")")
            return value
        if kind == "end":
            self.error("unexpected end of input")
        self.error(f"unexpected {tok[1]!r}")


def parse_poly(text, ring):
    """Parse ``text`` into a polynomial of ``ring``."""
    return _Parser(text, ring).parse()
