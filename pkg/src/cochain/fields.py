"""Exact scalar fields: sparse rational polynomials and expression trees.

Two interchangeable backends sit behind :class:`ScalarField`:

* :class:`Polynomial`: multivariate polynomial over the rationals, stored
  as a term map ``{exponent_vector: coefficient}``.  Closed under addition,
  multiplication and differentiation, with structural (hence decidable)
  equality.  All cohomology identity checks run on this backend so that
  "zero" means exactly zero.

* :class:`Expr`: an expression tree with differentiation rules, covering
  the non-polynomial scalars that show up in isotropic metrics: quotients,
  integer powers, square roots, logarithms, and a formal antiderivative
  node that is only ever differentiated, never evaluated.

Rational numbers are ``fractions.Fraction`` throughout (arbitrary
precision, always reduced, positive denominator).  Coordinates are
``x0 .. x{d-1}``; differentiation is plain partial differentiation.

Expression trees are canonicalized only by constant folding and like-term
collection in sums; no further simplification is attempted.  Semantic
equality of expression-backed fields is the job of
:func:`cochain.policy.equals`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Union

from ._kernels import kernel
from .errors import NonPolynomial, SingularPoint, Unevaluable

Rational = Fraction
Number = Union[Fraction, float]


def _as_pair(value) -> tuple[int, int]:
    if isinstance(value, tuple):
        return kernel.coeff(value[0], value[1])
    if isinstance(value, int):
        return (value, 1) if value else (0, 1)
    f = Fraction(value)
    return (f.numerator, f.denominator)


# ---------------------------------------------------------------------------
# Points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Point:
    """A rational point of the coordinate space."""

    coordinates: tuple[Fraction, ...]

    @classmethod
    def of(cls, *values) -> "Point":
        return cls(tuple(Fraction(v) for v in values))

    @property
    def dim(self) -> int:
        return len(self.coordinates)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.coordinates)


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


class Polynomial:
    """Sparse multivariate polynomial over the rationals.

    Terms are stored canonically (no zero coefficients, reduced coefficient
    pairs), so ``==`` is exact structural identity of mathematical objects.
    """

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Optional[dict] = None):
        if dim < 0:
            raise ValueError("dim must be >= 0")
        clean: dict = {}
        for exp, value in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != dim or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent vector {exp} for dim {dim}")
            pair = _as_pair(value)
            if pair[0]:
                clean[exp] = pair
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, dim: int) -> "Polynomial":
        return cls(dim, {})

    @classmethod
    def constant(cls, dim: int, value) -> "Polynomial":
        return cls(dim, {(0,) * dim: value})

    @classmethod
    def coordinate(cls, dim: int, axis: int) -> "Polynomial":
        if not 0 <= axis < dim:
            raise ValueError(f"axis {axis} out of range for dim {dim}")
        exp = tuple(1 if i == axis else 0 for i in range(dim))
        return cls(dim, {exp: 1})

    @classmethod
    def _raw(cls, dim: int, terms: dict) -> "Polynomial":
        out = object.__new__(cls)
        object.__setattr__(out, "dim", dim)
        object.__setattr__(out, "terms", terms)
        return out

    # -- queries -----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exp: tuple[int, ...]) -> Fraction:
        pair = self.terms.get(tuple(exp))
        return Fraction(*pair) if pair else Fraction(0)

    def items(self) -> Iterator[tuple[tuple[int, ...], Fraction]]:
        for exp, pair in self.terms.items():
            yield exp, Fraction(*pair)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def max_abs_coeff(self) -> Fraction:
        return max((abs(Fraction(*p)) for p in self.terms.values()), default=Fraction(0))

    # -- algebra -----------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        return Polynomial._raw(self.dim, kernel.add(self.terms, other.terms))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        return Polynomial._raw(
            self.dim, kernel.add(self.terms, kernel.scale(other.terms, -1, 1))
        )

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.dim, kernel.scale(self.terms, -1, 1))

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return Polynomial._raw(self.dim, kernel.mul(self.terms, other.terms))
        n, d = _as_pair(other)
        return Polynomial._raw(self.dim, kernel.scale(self.terms, n, d))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative polynomial power")
        out = Polynomial.constant(self.dim, 1)
        for _ in range(n):
            out = out * self
        return out

    def differentiate(self, axis: int) -> "Polynomial":
        if not 0 <= axis < self.dim:
            raise ValueError(f"axis {axis} out of range for dim {self.dim}")
        return Polynomial._raw(self.dim, kernel.diff(self.terms, axis))

    def evaluate(self, coords) -> Fraction:
        pairs = tuple((c.numerator, c.denominator) for c in (Fraction(v) for v in coords))
        if len(pairs) != self.dim:
            raise ValueError("point dimension mismatch")
        return Fraction(*kernel.eval_at(self.terms, pairs))

    # -- identity ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.dim == other.dim
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.dim, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"Polynomial(dim={self.dim}, terms={dict(sorted(self.terms.items()))})"


def signed_polynomial_sum(
    polys: list[Polynomial], signs: list[int], factor: Fraction
) -> Polynomial:
    """factor * sum_i signs[i]*polys[i], in one kernel pass."""
    dim = polys[0].dim
    out = kernel.signed_sum(
        [p.terms for p in polys], signs, factor.numerator, factor.denominator
    )
    return Polynomial._raw(dim, out)


# ---------------------------------------------------------------------------
# Expression trees
# ---------------------------------------------------------------------------


class Expr:
    """Base class for expression-tree nodes (all frozen, structural eq)."""

    __slots__ = ()


@dataclass(frozen=True)
class Const(Expr):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class Coord(Expr):
    axis: int


@dataclass(frozen=True)
class Sum(Expr):
    terms: tuple[Expr, ...]


@dataclass(frozen=True)
class Product(Expr):
    factors: tuple[Expr, ...]


@dataclass(frozen=True)
class Quotient(Expr):
    numerator: Expr
    denominator: Expr


@dataclass(frozen=True)
class IntPow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Sqrt(Expr):
    arg: Expr


@dataclass(frozen=True)
class Log(Expr):
    arg: Expr


@dataclass(frozen=True)
class FormalPrimitive(Expr):
    """Formal antiderivative of `integrand` along `variable`.

    Never evaluated; its only algebraic role is the differentiation rule
    d(P)/dx = integrand * d(variable)/dx.
    """

    integrand: Expr
    variable: Expr


ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))

_TAGS = {
    Const: 0,
    Coord: 1,
    Sqrt: 2,
    Log: 3,
    IntPow: 4,
    Quotient: 5,
    Product: 6,
    Sum: 7,
    FormalPrimitive: 8,
}


def _sort_key(e: Expr):
    """Total order on trees; used only to canonicalize term/factor order."""
    t = _TAGS[type(e)]
    if isinstance(e, Const):
        return (t, (e.value.numerator, e.value.denominator))
    if isinstance(e, Coord):
        return (t, (e.axis,))
    if isinstance(e, (Sqrt, Log)):
        return (t, (_sort_key(e.arg),))
    if isinstance(e, IntPow):
        return (t, (_sort_key(e.base), (e.exponent,)))
    if isinstance(e, Quotient):
        return (t, (_sort_key(e.numerator), _sort_key(e.denominator)))
    if isinstance(e, Product):
        return (t, tuple(_sort_key(f) for f in e.factors))
    if isinstance(e, Sum):
        return (t, tuple(_sort_key(f) for f in e.terms))
    return (t, (_sort_key(e.integrand), _sort_key(e.variable)))


def _split_scalar(e: Expr) -> tuple[Fraction, Expr]:
    """Split off the constant prefactor: e == coeff * core."""
    if isinstance(e, Const):
        return e.value, ONE
    if isinstance(e, Product) and isinstance(e.factors[0], Const):
        rest = e.factors[1:]
        core = rest[0] if len(rest) == 1 else Product(rest)
        return e.factors[0].value, core
    if isinstance(e, Quotient):
        cn, coren = _split_scalar(e.numerator)
        cd, cored = _split_scalar(e.denominator)
        if cd != 1 or cn != 1:
            return cn / cd, ex_quotient(coren, cored)
    return Fraction(1), e


def _scaled(core: Expr, coeff: Fraction) -> Expr:
    if coeff == 0 or core == ZERO:
        return ZERO
    if core == ONE:
        return Const(coeff)
    if coeff == 1:
        return core
    if isinstance(core, Product):
        return Product((Const(coeff),) + core.factors)
    return Product((Const(coeff), core))


def ex_sum(parts) -> Expr:
    """Sum with flattening, constant folding and like-term collection."""
    const = Fraction(0)
    buckets: dict[Expr, Fraction] = {}
    stack = list(parts)
    while stack:
        p = stack.pop(0)
        if isinstance(p, Sum):
            stack = list(p.terms) + stack
            continue
        coeff, core = _split_scalar(p)
        if core == ONE:
            const += coeff
            continue
        buckets[core] = buckets.get(core, Fraction(0)) + coeff
    terms = [_scaled(core, c) for core, c in buckets.items() if c != 0]
    terms.sort(key=_sort_key)
    if const != 0:
        terms.insert(0, Const(const))
    if not terms:
        return ZERO
    if len(terms) == 1:
        return terms[0]
    return Sum(tuple(terms))


def ex_product(parts) -> Expr:
    """Product with flattening and constant folding."""
    const = Fraction(1)
    factors: list[Expr] = []
    stack = list(parts)
    while stack:
        p = stack.pop(0)
        if isinstance(p, Product):
            stack = list(p.factors) + stack
            continue
        if isinstance(p, Const):
            const *= p.value
            continue
        factors.append(p)
    if const == 0:
        return ZERO
    factors.sort(key=_sort_key)
    if not factors:
        return Const(const)
    if const != 1:
        factors.insert(0, Const(const))
    if len(factors) == 1:
        return factors[0]
    return Product(tuple(factors))


def ex_neg(e: Expr) -> Expr:
    return ex_product([Const(Fraction(-1)), e])


def ex_quotient(num: Expr, den: Expr) -> Expr:
    if den == ZERO:
        raise ZeroDivisionError("zero denominator expression")
    if isinstance(den, Const):
        return ex_product([Const(Fraction(1) / den.value), num])
    if num == ZERO:
        return ZERO
    if den == ONE:
        return num
    return Quotient(num, den)


def ex_intpow(base: Expr, exponent: int) -> Expr:
    if exponent == 0:
        return ONE
    if exponent == 1:
        return base
    if isinstance(base, Const):
        if base.value == 0:
            if exponent < 0:
                raise ZeroDivisionError("0 raised to a negative power")
            return ZERO
        return Const(base.value**exponent)
    return IntPow(base, exponent)


def _sqrt_exact(value: Fraction) -> Optional[Fraction]:
    if value < 0:
        return None
    n, d = value.numerator, value.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def ex_sqrt(arg: Expr) -> Expr:
    if isinstance(arg, Const):
        root = _sqrt_exact(arg.value)
        if root is not None:
            return Const(root)
    return Sqrt(arg)


def ex_log(arg: Expr) -> Expr:
    if arg == ONE:
        return ZERO
    return Log(arg)


def differentiate_expr(e: Expr, axis: int) -> Expr:
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Coord):
        return ONE if e.axis == axis else ZERO
    if isinstance(e, Sum):
        return ex_sum([differentiate_expr(t, axis) for t in e.terms])
    if isinstance(e, Product):
        parts = []
        for i, f in enumerate(e.factors):
            df = differentiate_expr(f, axis)
            if df == ZERO:
                continue
            parts.append(ex_product([df] + [g for j, g in enumerate(e.factors) if j != i]))
        return ex_sum(parts)
    if isinstance(e, Quotient):
        a, b = e.numerator, e.denominator
        da, db = differentiate_expr(a, axis), differentiate_expr(b, axis)
        num = ex_sum([ex_product([da, b]), ex_neg(ex_product([a, db]))])
        return ex_quotient(num, ex_intpow(b, 2))
    if isinstance(e, IntPow):
        db = differentiate_expr(e.base, axis)
        return ex_product(
            [Const(Fraction(e.exponent)), ex_intpow(e.base, e.exponent - 1), db]
        )
    if isinstance(e, Sqrt):
        da = differentiate_expr(e.arg, axis)
        return ex_quotient(da, ex_product([Const(Fraction(2)), Sqrt(e.arg)]))
    if isinstance(e, Log):
        da = differentiate_expr(e.arg, axis)
        return ex_quotient(da, e.arg)
    if isinstance(e, FormalPrimitive):
        dv = differentiate_expr(e.variable, axis)
        return ex_product([e.integrand, dv])
    raise TypeError(f"unknown node {type(e).__name__}")


def eval_expr(e: Expr, coords: tuple) -> Number:
    """Evaluate at rational coordinates; exact Fraction whenever possible."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Coord):
        return coords[e.axis]
    if isinstance(e, Sum):
        return sum(eval_expr(t, coords) for t in e.terms)
    if isinstance(e, Product):
        out: Number = Fraction(1)
        for f in e.factors:
            out *= eval_expr(f, coords)
        return out
    if isinstance(e, Quotient):
        den = eval_expr(e.denominator, coords)
        if den == 0:
            raise SingularPoint("division by zero", coords)
        return eval_expr(e.numerator, coords) / den
    if isinstance(e, IntPow):
        base = eval_expr(e.base, coords)
        if base == 0 and e.exponent < 0:
            raise SingularPoint("zero base with negative exponent", coords)
        return base**e.exponent
    if isinstance(e, Sqrt):
        v = eval_expr(e.arg, coords)
        if v < 0:
            raise SingularPoint("square root of a negative value", coords)
        if isinstance(v, Fraction):
            root = _sqrt_exact(v)
            if root is not None:
                return root
        return math.sqrt(float(v))
    if isinstance(e, Log):
        v = eval_expr(e.arg, coords)
        if v <= 0:
            raise SingularPoint("logarithm of a non-positive value", coords)
        if v == 1:
            return Fraction(0)
        return math.log(float(v))
    if isinstance(e, FormalPrimitive):
        raise Unevaluable("formal primitive has no pointwise value")
    raise TypeError(f"unknown node {type(e).__name__}")


def substitute(e: Expr, replacements: dict[int, Expr]) -> Expr:
    """Replace coordinate nodes by expressions, re-canonicalizing on the way."""
    if isinstance(e, Const):
        return e
    if isinstance(e, Coord):
        return replacements.get(e.axis, e)
    if isinstance(e, Sum):
        return ex_sum([substitute(t, replacements) for t in e.terms])
    if isinstance(e, Product):
        return ex_product([substitute(f, replacements) for f in e.factors])
    if isinstance(e, Quotient):
        return ex_quotient(
            substitute(e.numerator, replacements), substitute(e.denominator, replacements)
        )
    if isinstance(e, IntPow):
        return ex_intpow(substitute(e.base, replacements), e.exponent)
    if isinstance(e, Sqrt):
        return ex_sqrt(substitute(e.arg, replacements))
    if isinstance(e, Log):
        return ex_log(substitute(e.arg, replacements))
    if isinstance(e, FormalPrimitive):
        return FormalPrimitive(
            substitute(e.integrand, replacements), substitute(e.variable, replacements)
        )
    raise TypeError(f"unknown node {type(e).__name__}")


def contains_node(e: Expr, node_type) -> bool:
    if isinstance(e, node_type):
        return True
    if isinstance(e, Sum):
        return any(contains_node(t, node_type) for t in e.terms)
    if isinstance(e, Product):
        return any(contains_node(f, node_type) for f in e.factors)
    if isinstance(e, Quotient):
        return contains_node(e.numerator, node_type) or contains_node(
            e.denominator, node_type
        )
    if isinstance(e, (IntPow,)):
        return contains_node(e.base, node_type)
    if isinstance(e, (Sqrt, Log)):
        return contains_node(e.arg, node_type)
    if isinstance(e, FormalPrimitive):
        return contains_node(e.integrand, node_type) or contains_node(
            e.variable, node_type
        )
    return False


def poly_to_expr(p: Polynomial) -> Expr:
    parts = []
    for exp, coeff in sorted(p.items()):
        factors: list[Expr] = [Const(coeff)]
        for axis, e in enumerate(exp):
            if e:
                factors.append(ex_intpow(Coord(axis), e))
        parts.append(ex_product(factors))
    return ex_sum(parts)


def expr_to_polynomial(e: Expr, dim: int) -> Optional[Polynomial]:
    """Exact polynomial normalization, or None if the tree leaves the ring."""
    if isinstance(e, Const):
        return Polynomial.constant(dim, e.value)
    if isinstance(e, Coord):
        if e.axis >= dim:
            return None
        return Polynomial.coordinate(dim, e.axis)
    if isinstance(e, Sum):
        out = Polynomial.zero(dim)
        for t in e.terms:
            p = expr_to_polynomial(t, dim)
            if p is None:
                return None
            out = out + p
        return out
    if isinstance(e, Product):
        out = Polynomial.constant(dim, 1)
        for f in e.factors:
            p = expr_to_polynomial(f, dim)
            if p is None:
                return None
            out = out * p
        return out
    if isinstance(e, Quotient):
        den = expr_to_polynomial(e.denominator, dim)
        if den is None or den.total_degree() > 0 or den.is_zero:
            return None
        num = expr_to_polynomial(e.numerator, dim)
        if num is None:
            return None
        return num * (Fraction(1) / den.coefficient((0,) * dim))
    if isinstance(e, IntPow):
        if e.exponent < 0:
            return None
        base = expr_to_polynomial(e.base, dim)
        return None if base is None else base**e.exponent
    return None


# ---------------------------------------------------------------------------
# ScalarField: the backend-dispatching wrapper
# ---------------------------------------------------------------------------


class ScalarField:
    """A scalar function of d coordinates, polynomial- or expression-backed."""

    __slots__ = ("dim", "backend")

    def __init__(self, dim: int, backend: Union[Polynomial, Expr]):
        if isinstance(backend, Polynomial) and backend.dim != dim:
            raise ValueError("backend dimension mismatch")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "backend", backend)

    def __setattr__(self, name, value):
        raise AttributeError("ScalarField is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def polynomial(cls, poly: Polynomial) -> "ScalarField":
        return cls(poly.dim, poly)

    @classmethod
    def expression(cls, dim: int, expr: Expr) -> "ScalarField":
        return cls(dim, expr)

    @classmethod
    def constant(cls, dim: int, value, *, exact: bool = True) -> "ScalarField":
        if exact:
            return cls(dim, Polynomial.constant(dim, value))
        return cls(dim, Const(Fraction(value)))

    @classmethod
    def coordinate(cls, dim: int, axis: int) -> "ScalarField":
        return cls(dim, Polynomial.coordinate(dim, axis))

    @classmethod
    def zero(cls, dim: int) -> "ScalarField":
        return cls(dim, Polynomial.zero(dim))

    # -- queries -----------------------------------------------------------

    @property
    def is_polynomial(self) -> bool:
        return isinstance(self.backend, Polynomial)

    @property
    def poly(self) -> Polynomial:
        if not self.is_polynomial:
            raise NonPolynomial("expression-backed field where polynomial required")
        return self.backend  # type: ignore[return-value]

    @property
    def expr(self) -> Expr:
        if self.is_polynomial:
            return poly_to_expr(self.backend)  # type: ignore[arg-type]
        return self.backend  # type: ignore[return-value]

    @property
    def is_structural_zero(self) -> bool:
        if self.is_polynomial:
            return self.backend.is_zero  # type: ignore[union-attr]
        return self.backend == ZERO

    def as_expr_field(self) -> "ScalarField":
        return self if not self.is_polynomial else ScalarField(self.dim, self.expr)

    # -- algebra -----------------------------------------------------------

    def _binary(self, other: "ScalarField", op):
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        if self.is_polynomial and other.is_polynomial:
            return ScalarField(self.dim, op(self.backend, other.backend))
        return None

    def __add__(self, other: "ScalarField") -> "ScalarField":
        out = self._binary(other, lambda a, b: a + b)
        if out is None:
            out = ScalarField(self.dim, ex_sum([self.expr, other.expr]))
        return out

    def __sub__(self, other: "ScalarField") -> "ScalarField":
        out = self._binary(other, lambda a, b: a - b)
        if out is None:
            out = ScalarField(self.dim, ex_sum([self.expr, ex_neg(other.expr)]))
        return out

    def __neg__(self) -> "ScalarField":
        if self.is_polynomial:
            return ScalarField(self.dim, -self.backend)
        return ScalarField(self.dim, ex_neg(self.backend))

    def __mul__(self, other) -> "ScalarField":
        if isinstance(other, ScalarField):
            out = self._binary(other, lambda a, b: a * b)
            if out is None:
                out = ScalarField(self.dim, ex_product([self.expr, other.expr]))
            return out
        if self.is_polynomial:
            return ScalarField(self.dim, self.backend * Fraction(other))
        return ScalarField(self.dim, ex_product([Const(Fraction(other)), self.backend]))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ScalarField":
        if not isinstance(other, ScalarField):
            return self * (Fraction(1) / Fraction(other))
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        if other.is_polynomial and other.backend.total_degree() == 0:
            c = other.backend.coefficient((0,) * self.dim)
            if c == 0:
                raise ZeroDivisionError("division by the zero field")
            return self * (Fraction(1) / c)
        return ScalarField(self.dim, ex_quotient(self.expr, other.expr))

    def differentiate(self, axis: int) -> "ScalarField":
        if not 0 <= axis < self.dim:
            raise ValueError(f"axis {axis} out of range for dim {self.dim}")
        if self.is_polynomial:
            return ScalarField(self.dim, self.backend.differentiate(axis))
        return ScalarField(self.dim, differentiate_expr(self.backend, axis))

    def evaluate(self, point) -> Number:
        coords = tuple(point) if not isinstance(point, Point) else point.coordinates
        if len(coords) != self.dim:
            raise ValueError("point dimension mismatch")
        coords = tuple(Fraction(c) if not isinstance(c, float) else c for c in coords)
        if self.is_polynomial:
            if any(isinstance(c, float) for c in coords):
                return float(
                    sum(
                        float(c) * math.prod(float(x) ** e for x, e in zip(coords, exp))
                        for exp, c in self.backend.items()
                    )
                )
            return self.backend.evaluate(coords)
        return eval_expr(self.backend, coords)

    # -- identity ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ScalarField)
            and self.dim == other.dim
            and self.backend == other.backend
        )

    def __hash__(self) -> int:
        return hash((self.dim, self.backend))

    def __repr__(self) -> str:
        kind = "poly" if self.is_polynomial else "expr"
        return f"ScalarField(dim={self.dim}, {kind}={self.backend!r})"


# ---------------------------------------------------------------------------
# Module-level operations
# ---------------------------------------------------------------------------


def differentiate(field: ScalarField, axis: int) -> ScalarField:
    """Exact partial derivative along the given coordinate axis."""
    return field.differentiate(axis)


def evaluate(field: ScalarField, point) -> Number:
    """Value at a point; exact Fraction when the arithmetic stays rational."""
    return field.evaluate(point)


def signed_field_sum(
    fields: list[ScalarField], signs: list[int], factor: Fraction
) -> ScalarField:
    """factor * sum_i signs[i]*fields[i]; kernel-accelerated when polynomial."""
    dim = fields[0].dim
    if all(f.is_polynomial for f in fields):
        return ScalarField(
            dim, signed_polynomial_sum([f.backend for f in fields], signs, factor)
        )
    parts = []
    for f, s in zip(fields, signs):
        if f.is_structural_zero:
            continue
        parts.append(ex_product([Const(factor * s), f.expr]))
    return ScalarField(dim, ex_sum(parts))


def homotopy_scale_integral(p, k: int):
    """Integrate t^k * p(t*x) over t in [0, 1], exactly.

    Each monomial of total degree m is scaled by 1/(k + m + 1).  Polynomial
    backend only; this is the building block of the ray homotopy operator.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if isinstance(p, ScalarField):
        if not p.is_polynomial:
            raise NonPolynomial("homotopy scale integral needs a polynomial field")
        return ScalarField(p.dim, homotopy_scale_integral(p.backend, k))
    if not isinstance(p, Polynomial):
        raise NonPolynomial("homotopy scale integral needs a polynomial")
    return Polynomial._raw(p.dim, kernel.homotopy_scale(p.terms, k))
