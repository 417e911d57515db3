"""Textual scalar syntax: prefix s-expressions.

Grammar (whitespace separated, fully parenthesized):

    expr    := number | symbol | list
    list    := "(" head expr* ")"
    head    := "+" | "-" | "*" | "/" | "^" | "sqrt" | "log" | "primitive"
    number  := integer | rational            e.g.  -3, 7/2, -5/8
    symbol  := coordinate "x<k>" | extra name bound by the caller

`+` and `*` take any number of arguments; `-` takes one (negation) or two
(subtraction); `/` takes two; `^` takes a base and an integer literal;
`sqrt` and `log` take one; `primitive` takes an integrand and an inner
variable and denotes the formal antiderivative node.

In four dimensions the caller may bind `t` as an alias of `x0`, and metric
profile strings bind `H`.  Parsing canonicalizes through the smart
constructors, so  emit(parse(s))  is a fixpoint: emitting is injective on
canonical trees and stable under re-parsing.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Optional, Union

from .errors import ExprSyntaxError
from .fields import (
    Const,
    Coord,
    Expr,
    FormalPrimitive,
    IntPow,
    Log,
    Product,
    Quotient,
    ScalarField,
    Sqrt,
    Sum,
    ex_intpow,
    ex_log,
    ex_neg,
    ex_product,
    ex_quotient,
    ex_sqrt,
    ex_sum,
    expr_to_polynomial,
)

_INT = re.compile(r"^-?\d+$")
_RAT = re.compile(r"^(-?\d+)/(\d+)$")
_COORD = re.compile(r"^x(\d+)$")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in "()":
            tokens.append((c, c, i))
            i += 1
            continue
        j = i
        while j < n and not text[j].isspace() and text[j] not in "()":
            j += 1
        tokens.append(("atom", text[i:j], i))
        i = j
    return tokens


def _parse_nested(tokens, pos, text):
    """Token stream to nested lists of (atom_text, offset)."""
    if pos >= len(tokens):
        raise ExprSyntaxError("unexpected end of input", position=len(text))
    kind, value, offset = tokens[pos]
    if kind == "atom":
        return (value, offset), pos + 1
    if kind == ")":
        raise ExprSyntaxError("unexpected ')'", position=offset)
    items = []
    pos += 1
    while True:
        if pos >= len(tokens):
            raise ExprSyntaxError("missing ')'", position=len(text))
        if tokens[pos][0] == ")":
            return (items, offset), pos + 1
        item, pos = _parse_nested(tokens, pos, text)
        items.append(item)


def _build(node, dim: int, names: dict[str, Expr], text: str) -> Expr:
    payload, offset = node
    if isinstance(payload, str):
        if _INT.match(payload):
            return Const(Fraction(int(payload)))
        m = _RAT.match(payload)
        if m:
            return Const(Fraction(int(m.group(1)), int(m.group(2))))
        m = _COORD.match(payload)
        if m:
            axis = int(m.group(1))
            if axis >= dim:
                raise ExprSyntaxError(
                    f"coordinate x{axis} out of range for dimension {dim}",
                    position=offset,
                )
            return Coord(axis)
        if payload in names:
            return names[payload]
        raise ExprSyntaxError(f"unknown symbol '{payload}'", position=offset)
    if not payload:
        raise ExprSyntaxError("empty list", position=offset)
    head, head_offset = payload[0]
    if not isinstance(head, str):
        raise ExprSyntaxError("operator expected", position=head_offset)
    args = payload[1:]

    def emit_args():
        return [_build(a, dim, names, text) for a in args]

    def arity(lo, hi=None):
        hi = lo if hi is None else hi
        if not lo <= len(args) <= hi:
            want = str(lo) if lo == hi else f"{lo} to {hi}"
            raise ExprSyntaxError(
                f"'{head}' expects {want} argument(s), got {len(args)}",
                position=head_offset,
            )

    if head == "+":
        return ex_sum(emit_args())
    if head == "-":
        arity(1, 2)
        built = emit_args()
        if len(built) == 1:
            return ex_neg(built[0])
        return ex_sum([built[0], ex_neg(built[1])])
    if head == "*":
        return ex_product(emit_args())
    if head == "/":
        arity(2)
        num, den = emit_args()
        if den == Const(Fraction(0)):
            raise ExprSyntaxError("division by constant zero", position=head_offset)
        return ex_quotient(num, den)
    if head == "^":
        arity(2)
        exp_payload, exp_offset = args[1]
        if not (isinstance(exp_payload, str) and _INT.match(exp_payload)):
            raise ExprSyntaxError(
                "'^' exponent must be an integer literal", position=exp_offset
            )
        return ex_intpow(_build(args[0], dim, names, text), int(exp_payload))
    if head == "sqrt":
        arity(1)
        return ex_sqrt(emit_args()[0])
    if head == "log":
        arity(1)
        return ex_log(emit_args()[0])
    if head == "primitive":
        arity(2)
        integrand, variable = emit_args()
        return FormalPrimitive(integrand, variable)
    raise ExprSyntaxError(f"unknown operator '{head}'", position=head_offset)


def parse_scalar(
    text: str, dim: int, *, names: Optional[dict[str, Expr]] = None
) -> Expr:
    """Parse a scalar s-expression into a canonical expression tree."""
    if names is None:
        names = {}
    if dim == 4 and "t" not in names:
        names = dict(names)
        names["t"] = Coord(0)
    tokens = _tokenize(text)
    if not tokens:
        raise ExprSyntaxError("empty expression", position=0)
    node, pos = _parse_nested(tokens, 0, text)
    if pos != len(tokens):
        raise ExprSyntaxError("trailing input after expression", position=tokens[pos][2])
    return _build(node, dim, names, text)


def parse_field(
    text: str, dim: int, *, names: Optional[dict[str, Expr]] = None
) -> ScalarField:
    """Parse a scalar and prefer the exact polynomial backend when possible."""
    expr = parse_scalar(text, dim, names=names)
    poly = expr_to_polynomial(expr, dim)
    if poly is not None:
        return ScalarField(dim, poly)
    return ScalarField(dim, expr)


def emit_scalar(
    value: Union[Expr, ScalarField],
    coord_names: Optional[dict[int, str]] = None,
) -> str:
    """Canonical textual form; deterministic for canonical trees.

    `coord_names` overrides the default x<k> rendering of coordinates
    (used for profile expressions where coordinate 0 stands for H).
    """
    if isinstance(value, ScalarField):
        return emit_scalar(value.expr, coord_names)
    names = coord_names or {}

    def walk(e: Expr) -> str:
        if isinstance(e, Const):
            v = e.value
            return (
                str(v.numerator)
                if v.denominator == 1
                else f"{v.numerator}/{v.denominator}"
            )
        if isinstance(e, Coord):
            return names.get(e.axis, f"x{e.axis}")
        if isinstance(e, Sum):
            return "(+ " + " ".join(walk(t) for t in e.terms) + ")"
        if isinstance(e, Product):
            return "(* " + " ".join(walk(f) for f in e.factors) + ")"
        if isinstance(e, Quotient):
            return f"(/ {walk(e.numerator)} {walk(e.denominator)})"
        if isinstance(e, IntPow):
            return f"(^ {walk(e.base)} {e.exponent})"
        if isinstance(e, Sqrt):
            return f"(sqrt {walk(e.arg)})"
        if isinstance(e, Log):
            return f"(log {walk(e.arg)})"
        if isinstance(e, FormalPrimitive):
            return f"(primitive {walk(e.integrand)} {walk(e.variable)})"
        raise TypeError(f"cannot emit {type(e).__name__}")

    return walk(value)
