"""Deciding equality of scalar fields.

Polynomial-backed fields compare exactly (canonical term maps).  Everything
else is compared by seeded sampling at integer points: two fields count as
equal when the relative residual

    |a(x) - b(x)| / max(1, |a(x)|, |b(x)|)

stays below the policy tolerance at every sample point.  Points that hit a
singularity of either side are skipped and redrawn.

Square roots only enter through the spatial radius in four dimensions, so
for those fields the spatial part of each sample point is drawn from a
table of integer triples whose squared length is a perfect square; the
radius is then rational and evaluation stays exact end to end.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import IncomparableBackends, SingularPoint, Unevaluable
from .fields import FormalPrimitive, Point, ScalarField, Sqrt, contains_node


def _square_radius_triples(limit: int) -> list[tuple[int, int, int]]:
    out = []
    for a in range(limit + 1):
        for b in range(a, limit + 1):
            for c in range(b, limit + 1):
                s = a * a + b * b + c * c
                if s == 0:
                    continue
                r = math.isqrt(s)
                if r * r == s:
                    out.append((a, b, c))
    return out


# Triples like (1,2,2) -> radius 3 and (2,3,6) -> radius 7.
_TRIPLES = _square_radius_triples(12)


@dataclass(frozen=True)
class EqualityPolicy:
    """How hard to try when deciding field equality by sampling."""

    points: int = 8
    bound: int = 5
    tolerance: float = 1e-9
    seed: int = 0

    @classmethod
    def spacetime(cls, seed: int = 0) -> "EqualityPolicy":
        return cls(points=100, bound=9, tolerance=1e-9, seed=seed)


@dataclass(frozen=True)
class ComparisonOutcome:
    equal: bool
    exact: bool
    checked_points: int
    max_residual: float
    witness: Optional[dict] = None


def sample_integer_points(
    dim: int, count: int, bound: int, rng: random.Random
) -> list[Point]:
    """Nonzero integer points in the box [-bound, bound]^dim."""
    points = []
    while len(points) < count:
        coords = tuple(rng.randint(-bound, bound) for _ in range(dim))
        if all(c == 0 for c in coords):
            continue
        points.append(Point.of(*coords))
    return points


def sample_radial_points(count: int, bound: int, rng: random.Random) -> list[Point]:
    """Dim-4 integer points whose spatial radius is a whole number."""
    triples = [t for t in _TRIPLES if max(t) <= bound] or list(_TRIPLES)
    points = []
    while len(points) < count:
        a, b, c = rng.choice(triples)
        spatial = [a * rng.choice((-1, 1)), b * rng.choice((-1, 1)), c * rng.choice((-1, 1))]
        rng.shuffle(spatial)
        t = rng.randint(-bound, bound)
        points.append(Point.of(t, *spatial))
    return points


def relative_residual(va, vb) -> float:
    scale = max(1.0, abs(float(va)), abs(float(vb)))
    return abs(float(va) - float(vb)) / scale


def compare(
    a: ScalarField, b: ScalarField, policy: Optional[EqualityPolicy] = None
) -> ComparisonOutcome:
    """Full comparison record: exact when possible, sampled otherwise."""
    if policy is None:
        policy = EqualityPolicy()
    if a.dim != b.dim:
        raise ValueError("cannot compare fields of different dimensions")
    if a.is_polynomial and b.is_polynomial:
        diff = a.backend - b.backend
        residual = float(diff.max_abs_coeff())
        witness = None
        if not diff.is_zero:
            exp = next(iter(diff.terms))
            witness = {"kind": "coefficient", "exponent": list(exp)}
        return ComparisonOutcome(diff.is_zero, True, 0, residual, witness)

    ea, eb = a.expr, b.expr
    if ea == eb:
        return ComparisonOutcome(True, True, 0, 0.0, None)
    has_primitive = contains_node(ea, FormalPrimitive) or contains_node(
        eb, FormalPrimitive
    )
    if has_primitive:
        raise IncomparableBackends(
            "fields involve a formal antiderivative and differ structurally"
        )

    rng = random.Random(policy.seed)
    radial = a.dim == 4 and (contains_node(ea, Sqrt) or contains_node(eb, Sqrt))
    checked = 0
    max_residual = 0.0
    witness = None
    budget = policy.points * 60
    while checked < policy.points and budget > 0:
        if radial:
            (point,) = sample_radial_points(1, policy.bound, rng)
        else:
            (point,) = sample_integer_points(a.dim, 1, policy.bound, rng)
        budget -= 1
        try:
            va = a.evaluate(point)
            vb = b.evaluate(point)
        except SingularPoint:
            continue
        except Unevaluable as exc:  # pragma: no cover - guarded above
            raise IncomparableBackends(str(exc))
        checked += 1
        residual = relative_residual(va, vb)
        if residual > max_residual:
            max_residual = residual
            witness = {
                "kind": "point",
                "point": [str(c) for c in point.coordinates],
                "left": repr(va if isinstance(va, float) else str(Fraction(va))),
                "right": repr(vb if isinstance(vb, float) else str(Fraction(vb))),
                "residual": residual,
            }
    if checked < policy.points:
        raise SingularPoint(
            "could not find enough regular sample points for comparison"
        )
    equal = max_residual <= policy.tolerance
    return ComparisonOutcome(equal, False, checked, max_residual, None if equal else witness)


def equals(
    a: ScalarField, b: ScalarField, policy: Optional[EqualityPolicy] = None
) -> bool:
    """Exact equality for polynomial pairs, sampled equality otherwise."""
    return compare(a, b, policy).equal
