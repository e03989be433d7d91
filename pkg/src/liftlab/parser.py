"""Recursive-descent parser for the expression grammar.

    expr     := term (('+'|'-') term)*
    term     := factor (('*'|'/') factor)*
    factor   := base ('^' integer)?
    base     := rational | var | func '(' expr ')' | '(' expr ')' | '-' base
    rational := integer ('/' positive-integer)?
    func     := 'sin' | 'cos' | 'exp'

Whitespace is insignificant.  The integer after '^' may carry a sign.
Identifiers other than the three function names must be declared variables.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from .expr import (
    Call, Const, Expr, ExprError, Pow, Prod, Quot, Sum, Var, VarId, FUNCTIONS,
)

__all__ = ["parse_expr", "ParseError", "UnknownVariableError", "IDENT_RE"]

IDENT_RE = re.compile(r"[a-zA-Z_][a-zA-Z0-9_]*")
_INT_RE = re.compile(r"[0-9]+")


class ParseError(ExprError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class UnknownVariableError(ParseError):
    def __init__(self, name: str, offset: int):
        ParseError.__init__(self, f"unknown variable '{name}'", offset)
        self.name = name


class _Parser:
    def __init__(self, text: str, vars: Sequence[VarId]):
        self.text = text
        self.pos = 0
        self.by_name = {v.name: v for v in vars}

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            raise ParseError(f"expected '{ch}'", self.pos)
        self.pos += 1

    def parse(self) -> Expr:
        e = self.expr()
        self.skip_ws()
        if self.pos != len(self.text):
            raise ParseError("unexpected trailing input", self.pos)
        return e

    def expr(self) -> Expr:
        terms = [self.term()]
        while True:
            ch = self.peek()
            if ch == "+":
                self.pos += 1
                terms.append(self.term())
            elif ch == "-":
                self.pos += 1
                terms.append(Prod((Const(Fraction(-1)), self.term())))
            else:
                break
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))

    def term(self) -> Expr:
        out = self.factor()
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                rhs = self.factor()
                out = Prod(out.factors + (rhs,)) if isinstance(out, Prod) else Prod((out, rhs))
            elif ch == "/":
                self.pos += 1
                out = Quot(out, self.factor())
            else:
                break
        return out

    def factor(self) -> Expr:
        base = self.base()
        if self.peek() == "^":
            self.pos += 1
            exponent = self.signed_integer()
            return Pow(base, exponent)
        return base

    def signed_integer(self) -> int:
        self.skip_ws()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        m = _INT_RE.match(self.text, self.pos)
        if not m:
            raise ParseError("expected an integer exponent", self.pos)
        self.pos = m.end()
        return int(self.text[start:self.pos])

    def base(self) -> Expr:
        ch = self.peek()
        if ch == "":
            raise ParseError("unexpected end of input", self.pos)
        if ch == "-":
            self.pos += 1
            return Prod((Const(Fraction(-1)), self.base()))
        if ch == "(":
            self.pos += 1
            e = self.expr()
            self.expect(")")
            return e
        if ch.isdigit():
            return self.rational()
        m = IDENT_RE.match(self.text, self.pos)
        if not m:
            raise ParseError(f"unexpected character '{ch}'", self.pos)
        name = m.group(0)
        start = self.pos
        self.pos = m.end()
        if name in FUNCTIONS:
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return Call(name, arg)
        if name not in self.by_name:
            raise UnknownVariableError(name, start)
        return Var(self.by_name[name])

    def rational(self) -> Expr:
        m = _INT_RE.match(self.text, self.pos)
        if not m:
            raise ParseError("expected an integer", self.pos)
        self.pos = m.end()
        num = int(m.group(0))
        # a '/' directly after an integer binds as part of the rational
        # literal only when followed by another integer; term-level division
        # of integer by integer is the same value either way.
        save = self.pos
        if self.peek() == "/":
            self.pos += 1
            m2 = _INT_RE.match(self.text, self.pos)
            if m2 and int(m2.group(0)) > 0:
                self.pos = m2.end()
                # guard against 1/2^3 which must parse as 1/(2^3)? No:
                # factor binds '^' tighter, so fall back when '^' follows.
                if self.peek() == "^":
                    self.pos = save
                    return Const(Fraction(num))
                return Const(Fraction(num, int(m2.group(0))))
            self.pos = save
        return Const(Fraction(num))


def parse_expr(text: str, vars: Sequence[VarId]) -> Expr:
    """Parse ``text`` over the given variables; see the module grammar."""
    return _Parser(text, vars).parse()
