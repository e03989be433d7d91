"""Exact symbolic scalar expressions over named coordinates.

The rational-function fragment (constants, variables, sums, products,
integer powers, quotients) has a unique canonical form: a quotient of two
coprime integer-coefficient polynomials, denominator with positive leading
coefficient under graded-lexicographic monomial order.  Structural equality
of canonical trees therefore decides mathematical equality on that
fragment.

sin/cos/exp are opaque numeric leaves: differentiation produces the usual
closed forms but no symbolic identities are applied to them, and
expressions containing them cannot be canonicalized or compared
symbolically.  Canonicalization cancels common polynomial factors
(x/x -> 1), which enlarges the domain by a measure-zero set; this is the
usual computer-algebra convention and is relied on throughout.

Everything here is immutable and safe to share across threads.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Union

from . import poly
from .poly import Poly

__all__ = [
    "VarId", "Expr", "Const", "Var", "Sum", "Prod", "Pow", "Quot", "Call",
    "ExprClass", "ExprError", "UnsupportedClassError", "UnboundVariableError",
    "EvaluationDomainError", "SymbolicDivisionError",
    "const", "variable", "expr_class", "is_rational", "free_vars",
    "canonicalize", "canon", "partial", "substitute", "expr_equal",
    "eval_numeric", "is_zero_expr", "ZERO", "ONE",
]

FUNCTIONS = ("sin", "cos", "exp")


class ExprError(Exception):
    """Base class for expression-kernel errors."""


class UnsupportedClassError(ExprError):
    """Operation defined only for the rational fragment got a numeric-only expression."""


class UnboundVariableError(ExprError):
    def __init__(self, var: "VarId"):
        super().__init__(f"unbound variable '{var.name}'")
        self.var = var


class EvaluationDomainError(ExprError):
    """Numeric evaluation hit a division with |denominator| < 1e-300."""


class SymbolicDivisionError(ExprError):
    """Division by an expression that is identically zero."""


@dataclass(frozen=True, slots=True)
class VarId:
    """A named coordinate: unique name within its chart, index = position."""

    name: str
    index: int

    def __str__(self) -> str:
        return self.name


class ExprClass(enum.Enum):
    RATIONAL = "rational"
    NUMERIC_ONLY = "numeric-only"


Number = Union[int, Fraction]


class Expr:
    """Base node.  Subclasses: Const, Var, Sum, Prod, Pow, Quot, Call."""

    __slots__ = ()

    def __add__(self, other):
        return _sum2(self, _coerce(other))

    def __radd__(self, other):
        return _sum2(_coerce(other), self)

    def __sub__(self, other):
        return _sum2(self, -_coerce(other))

    def __rsub__(self, other):
        return _sum2(_coerce(other), -self)

    def __mul__(self, other):
        return _prod2(self, _coerce(other))

    def __rmul__(self, other):
        return _prod2(_coerce(other), self)

    def __truediv__(self, other):
        return Quot(self, _coerce(other))

    def __rtruediv__(self, other):
        return Quot(_coerce(other), self)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("exponent must be an int")
        return Pow(self, n)

    def __neg__(self):
        return _prod2(Const(Fraction(-1)), self)

    def __str__(self) -> str:
        return format_expr(self)

    def __repr__(self) -> str:
        return f"<Expr {format_expr(self)}>"


@dataclass(frozen=True, slots=True, eq=True, repr=False)
class Const(Expr):
    value: Fraction

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True, slots=True, eq=True, repr=False)
class Var(Expr):
    var: VarId


@dataclass(frozen=True, slots=True, eq=True, repr=False)
class Sum(Expr):
    terms: tuple[Expr, ...]


@dataclass(frozen=True, slots=True, eq=True, repr=False)
class Prod(Expr):
    factors: tuple[Expr, ...]


@dataclass(frozen=True, slots=True, eq=True, repr=False)
class Pow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True, slots=True, eq=True, repr=False)
class Quot(Expr):
    num: Expr
    den: Expr


@dataclass(frozen=True, slots=True, eq=True, repr=False)
class Call(Expr):
    func: str
    arg: Expr

    def __post_init__(self):
        if self.func not in FUNCTIONS:
            raise ValueError(f"unknown function '{self.func}'")


ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))


def const(value: Number) -> Const:
    return Const(Fraction(value))


def variable(v: VarId) -> Var:
    return Var(v)


def _coerce(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction)):
        return Const(Fraction(x))
    raise TypeError(f"cannot use {type(x).__name__} as an expression")


def _sum2(a: Expr, b: Expr) -> Expr:
    # flatten one level so that long chains of + stay shallow
    terms: list[Expr] = []
    for e in (a, b):
        if isinstance(e, Sum):
            terms.extend(e.terms)
        else:
            terms.append(e)
    return Sum(tuple(terms))


def _prod2(a: Expr, b: Expr) -> Expr:
    factors: list[Expr] = []
    for e in (a, b):
        if isinstance(e, Prod):
            factors.extend(e.factors)
        else:
            factors.append(e)
    return Prod(tuple(factors))


@lru_cache(maxsize=None)
def is_rational(e: Expr) -> bool:
    """True when the expression contains no transcendental leaf."""
    if isinstance(e, (Const, Var)):
        return True
    if isinstance(e, Call):
        return False
    if isinstance(e, Sum):
        return all(is_rational(t) for t in e.terms)
    if isinstance(e, Prod):
        return all(is_rational(f) for f in e.factors)
    if isinstance(e, Pow):
        return is_rational(e.base)
    if isinstance(e, Quot):
        return is_rational(e.num) and is_rational(e.den)
    raise TypeError(f"not an Expr: {e!r}")


def expr_class(e: Expr) -> ExprClass:
    return ExprClass.RATIONAL if is_rational(e) else ExprClass.NUMERIC_ONLY


@lru_cache(maxsize=None)
def free_vars(e: Expr) -> frozenset[VarId]:
    if isinstance(e, Const):
        return frozenset()
    if isinstance(e, Var):
        return frozenset((e.var,))
    if isinstance(e, Sum):
        out: frozenset[VarId] = frozenset()
        for t in e.terms:
            out |= free_vars(t)
        return out
    if isinstance(e, Prod):
        out = frozenset()
        for f in e.factors:
            out |= free_vars(f)
        return out
    if isinstance(e, Pow):
        return free_vars(e.base)
    if isinstance(e, Quot):
        return free_vars(e.num) | free_vars(e.den)
    if isinstance(e, Call):
        return free_vars(e.arg)
    raise TypeError(f"not an Expr: {e!r}")


# ---------------------------------------------------------------------------
# canonical rational form

RatFunc = tuple[Poly, Poly]


def _rf_add(a: RatFunc, b: RatFunc, one: Poly) -> RatFunc:
    if a[1] == one and b[1] == one:
        return poly.add(a[0], b[0]), one
    num = poly.add(poly.mul(a[0], b[1]), poly.mul(b[0], a[1]))
    return num, poly.mul(a[1], b[1])


def _rf_mul(a: RatFunc, b: RatFunc, one: Poly) -> RatFunc:
    return poly.mul(a[0], b[0]), poly.mul(a[1], b[1])


def _rf_normalize(num: Poly, den: Poly) -> RatFunc:
    if poly.is_zero(den):
        raise SymbolicDivisionError("division by an identically zero expression")
    if poly.is_zero(num):
        nvars = len(next(iter(den)))
        return {}, poly.const(1, nvars)
    g = poly.poly_gcd(num, den)
    if not (poly.is_const(g) and poly.const_value(g) == 1):
        num = poly.exact_div(num, g)
        den = poly.exact_div(den, g)
    if poly.leading_coeff(den) < 0:
        num, den = poly.neg(num), poly.neg(den)
    return num, den


def _to_ratfunc(e: Expr, axis_of: dict[VarId, int], nvars: int) -> RatFunc:
    one = poly.const(1, nvars)
    if isinstance(e, Const):
        return poly.const(e.value.numerator, nvars), poly.const(e.value.denominator, nvars)
    if isinstance(e, Var):
        return poly.variable(axis_of[e.var], nvars), one
    if isinstance(e, Sum):
        acc: RatFunc = ({}, one)
        for t in e.terms:
            acc = _rf_add(acc, _to_ratfunc(t, axis_of, nvars), one)
        return acc
    if isinstance(e, Prod):
        acc = (one, one)
        for f in e.factors:
            acc = _rf_mul(acc, _to_ratfunc(f, axis_of, nvars), one)
        return acc
    if isinstance(e, Pow):
        bn, bd = _to_ratfunc(e.base, axis_of, nvars)
        n = e.exponent
        if n == 0:
            return one, one
        if n > 0:
            return poly.power(bn, n), poly.power(bd, n)
        if poly.is_zero(bn):
            raise SymbolicDivisionError("negative power of an identically zero expression")
        return poly.power(bd, -n), poly.power(bn, -n)
    if isinstance(e, Quot):
        an, ad = _to_ratfunc(e.num, axis_of, nvars)
        bn, bd = _to_ratfunc(e.den, axis_of, nvars)
        if poly.is_zero(bn):
            raise SymbolicDivisionError("division by an identically zero expression")
        return poly.mul(an, bd), poly.mul(ad, bn)
    raise UnsupportedClassError("canonicalize is defined only for rational expressions")


def _poly_to_expr(p: Poly, axes: tuple[VarId, ...]) -> Expr:
    if not p:
        return ZERO
    terms: list[Expr] = []
    for mono in sorted(p, key=poly.grlex_key, reverse=True):
        c = p[mono]
        factors: list[Expr] = []
        for axis, exp in enumerate(mono):
            if exp == 1:
                factors.append(Var(axes[axis]))
            elif exp > 1:
                factors.append(Pow(Var(axes[axis]), exp))
        if not factors:
            terms.append(Const(Fraction(c)))
        elif c == 1:
            terms.append(factors[0] if len(factors) == 1 else Prod(tuple(factors)))
        else:
            terms.append(Prod((Const(Fraction(c)), *factors)))
    return terms[0] if len(terms) == 1 else Sum(tuple(terms))


@lru_cache(maxsize=None)
def canonicalize(e: Expr) -> Expr:
    """Unique canonical form of a rational expression.

    Idempotent; raises UnsupportedClassError on numeric-only input.
    """
    if not is_rational(e):
        raise UnsupportedClassError("canonicalize is defined only for rational expressions")
    axes = tuple(sorted(free_vars(e), key=lambda v: (v.index, v.name)))
    axis_of = {v: i for i, v in enumerate(axes)}
    num, den = _rf_normalize(*_to_ratfunc(e, axis_of, len(axes)))
    # drop axes that cancelled away so the tree is support-minimal
    used = [i for i in range(len(axes))
            if any(m[i] for m in num) or any(m[i] for m in den)]
    if len(used) != len(axes):
        def project(p: Poly) -> Poly:
            return {tuple(m[i] for i in used): c for m, c in p.items()}
        num, den = project(num), project(den)
        axes = tuple(axes[i] for i in used)
    num_expr = _poly_to_expr(num, axes)
    if poly.is_const(den) and poly.const_value(den) == 1:
        return num_expr
    return Quot(num_expr, _poly_to_expr(den, axes))


def canon(e: Expr) -> Expr:
    """Canonicalize when rational, light constant folding otherwise."""
    if is_rational(e):
        return canonicalize(e)
    return _fold(e)


def is_zero_expr(e: Expr) -> bool:
    return canonicalize(e) == ZERO


def expr_equal(a: Expr, b: Expr) -> bool:
    """Exact mathematical equality on the rational fragment."""
    if not (is_rational(a) and is_rational(b)):
        raise UnsupportedClassError("symbolic equality is defined only for rational expressions")
    return canonicalize(a) == canonicalize(b)


# ---------------------------------------------------------------------------
# light structural folding for numeric-only results (no trig identities)

def _fold(e: Expr) -> Expr:
    if isinstance(e, (Const, Var)):
        return e
    if isinstance(e, Sum):
        acc = Fraction(0)
        terms: list[Expr] = []
        for t in e.terms:
            t = _fold(t)
            if isinstance(t, Const):
                acc += t.value
            elif isinstance(t, Sum):
                terms.extend(t.terms)
            else:
                terms.append(t)
        if acc != 0 or not terms:
            terms.append(Const(acc))
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))
    if isinstance(e, Prod):
        acc = Fraction(1)
        factors: list[Expr] = []
        for f in e.factors:
            f = _fold(f)
            if isinstance(f, Const):
                acc *= f.value
            elif isinstance(f, Prod):
                factors.extend(f.factors)
            else:
                factors.append(f)
        if acc == 0:
            return ZERO
        if acc != 1 or not factors:
            factors.insert(0, Const(acc))
        return factors[0] if len(factors) == 1 else Prod(tuple(factors))
    if isinstance(e, Pow):
        base = _fold(e.base)
        if e.exponent == 0:
            return ONE
        if e.exponent == 1:
            return base
        if isinstance(base, Const) and e.exponent > 0:
            return Const(base.value ** e.exponent)
        return Pow(base, e.exponent)
    if isinstance(e, Quot):
        num, den = _fold(e.num), _fold(e.den)
        if isinstance(den, Const):
            if den.value == 0:
                raise SymbolicDivisionError("division by zero constant")
            if isinstance(num, Const):
                return Const(num.value / den.value)
            if den.value == 1:
                return num
        if num == ZERO:
            return ZERO
        return Quot(num, den)
    if isinstance(e, Call):
        return Call(e.func, _fold(e.arg))
    raise TypeError(f"not an Expr: {e!r}")


# ---------------------------------------------------------------------------
# calculus

def partial(e: Expr, v: VarId) -> Expr:
    """Exact partial derivative, canonicalized when rational."""
    return canon(_partial(e, v))


def _partial(e: Expr, v: VarId) -> Expr:
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return ONE if e.var == v else ZERO
    if isinstance(e, Sum):
        return Sum(tuple(_partial(t, v) for t in e.terms))
    if isinstance(e, Prod):
        terms = []
        for i, f in enumerate(e.factors):
            df = _partial(f, v)
            if df == ZERO:
                continue
            rest = e.factors[:i] + (df,) + e.factors[i + 1:]
            terms.append(Prod(rest))
        return Sum(tuple(terms)) if terms else ZERO
    if isinstance(e, Pow):
        if e.exponent == 0:
            return ZERO
        db = _partial(e.base, v)
        if db == ZERO:
            return ZERO
        return Prod((Const(Fraction(e.exponent)), Pow(e.base, e.exponent - 1), db))
    if isinstance(e, Quot):
        dn, dd = _partial(e.num, v), _partial(e.den, v)
        num = Sum((Prod((dn, e.den)), Prod((Const(Fraction(-1)), e.num, dd))))
        return Quot(num, Pow(e.den, 2))
    if isinstance(e, Call):
        da = _partial(e.arg, v)
        if da == ZERO:
            return ZERO
        if e.func == "sin":
            outer: Expr = Call("cos", e.arg)
        elif e.func == "cos":
            outer = Prod((Const(Fraction(-1)), Call("sin", e.arg)))
        else:
            outer = Call("exp", e.arg)
        return Prod((outer, da))
    raise TypeError(f"not an Expr: {e!r}")


def substitute(e: Expr, bindings: Mapping[VarId, Expr]) -> Expr:
    """Simultaneous substitution, then canonicalization when rational."""
    return canon(_substitute(e, bindings))


def _substitute(e: Expr, bindings: Mapping[VarId, Expr]) -> Expr:
    if isinstance(e, Const):
        return e
    if isinstance(e, Var):
        return bindings.get(e.var, e)
    if isinstance(e, Sum):
        return Sum(tuple(_substitute(t, bindings) for t in e.terms))
    if isinstance(e, Prod):
        return Prod(tuple(_substitute(f, bindings) for f in e.factors))
    if isinstance(e, Pow):
        return Pow(_substitute(e.base, bindings), e.exponent)
    if isinstance(e, Quot):
        return Quot(_substitute(e.num, bindings), _substitute(e.den, bindings))
    if isinstance(e, Call):
        return Call(e.func, _substitute(e.arg, bindings))
    raise TypeError(f"not an Expr: {e!r}")


def eval_numeric(e: Expr, point: Mapping[VarId, float]) -> float:
    """IEEE-double evaluation with every variable bound."""
    if isinstance(e, Const):
        return float(e.value)
    if isinstance(e, Var):
        try:
            return float(point[e.var])
        except KeyError:
            raise UnboundVariableError(e.var) from None
    if isinstance(e, Sum):
        return math.fsum(eval_numeric(t, point) for t in e.terms)
    if isinstance(e, Prod):
        out = 1.0
        for f in e.factors:
            out *= eval_numeric(f, point)
        return out
    if isinstance(e, Pow):
        base = eval_numeric(e.base, point)
        if e.exponent < 0 and abs(base) < 1e-300:
            raise EvaluationDomainError("negative power of a value too close to zero")
        return base ** e.exponent
    if isinstance(e, Quot):
        den = eval_numeric(e.den, point)
        if abs(den) < 1e-300:
            raise EvaluationDomainError("division by a value with magnitude < 1e-300")
        return eval_numeric(e.num, point) / den
    if isinstance(e, Call):
        arg = eval_numeric(e.arg, point)
        return {"sin": math.sin, "cos": math.cos, "exp": math.exp}[e.func](arg)
    raise TypeError(f"not an Expr: {e!r}")


# ---------------------------------------------------------------------------
# display

def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _needs_parens_in_product(e: Expr) -> bool:
    if isinstance(e, Sum) or isinstance(e, Quot):
        return True
    if isinstance(e, Const):
        return e.value < 0 or e.value.denominator != 1
    return False


def format_expr(e: Expr) -> str:
    """Deterministic display; re-parseable with the module grammar."""
    if isinstance(e, Const):
        return _frac_str(e.value)
    if isinstance(e, Var):
        return e.var.name
    if isinstance(e, Sum):
        out = ""
        for i, t in enumerate(e.terms):
            s = format_expr(t)
            if i == 0:
                out = s
            elif s.startswith("-"):
                out += " - " + s[1:]
            else:
                out += " + " + s
        return out if out else "0"
    if isinstance(e, Prod):
        factors = list(e.factors)
        sign = ""
        if factors and isinstance(factors[0], Const) and factors[0].value == -1 and len(factors) > 1:
            sign = "-"
            factors = factors[1:]
        parts = []
        for f in factors:
            s = format_expr(f)
            if _needs_parens_in_product(f) and len(factors) > 1:
                s = f"({s})"
            parts.append(s)
        return sign + "*".join(parts)
    if isinstance(e, Pow):
        base = format_expr(e.base)
        plain = isinstance(e.base, Var) or (
            isinstance(e.base, Const)
            and e.base.value >= 0 and e.base.value.denominator == 1)
        if not plain:
            base = f"({base})"
        return f"{base}^{e.exponent}"
    if isinstance(e, Quot):
        num, den = format_expr(e.num), format_expr(e.den)
        if not isinstance(e.num, (Var, Const, Call)) or num.startswith("-"):
            num = f"({num})"
        den_plain = isinstance(e.den, (Var, Call)) or (
            isinstance(e.den, Const)
            and e.den.value > 0 and e.den.value.denominator == 1)
        if not den_plain:
            den = f"({den})"
        return f"{num}/{den}"
    if isinstance(e, Call):
        return f"{e.func}({format_expr(e.arg)})"
    raise TypeError(f"not an Expr: {e!r}")
