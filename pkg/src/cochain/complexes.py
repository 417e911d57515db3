"""The two cochain complexes on flat d-space and the maps between them.

Grade q of the skew family is the space of rank q+1 tensors that are
alternating in the first q slots and whose alternation over all q+1 slots
vanishes; grade 0 is plain scalar fields and grade 1 is the symmetric
2-tensors.  Grade q of the symmetric family consists of rank q+1 tensors
that are alternating in the first q-1 slots, symmetric in the last two,
and satisfy the cyclic sum condition

    sum_{i=0}^{q} (-1)^{i*q} S[rot_i(indices)] = 0,

where rot_i rotates the index tuple left by i places.

The two families are isomorphic grade by grade: `phi` symmetrizes the last
two slots, `psi` scales the alternation of the first q slots by 2q/(q+1),
and the pair inverts exactly.  The symmetric-side differential is the
conjugate d_G = phi o d_K o psi.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import InvalidMember, RankMismatch
from .fields import Polynomial, ScalarField
from .policy import ComparisonOutcome, EqualityPolicy, compare
from .tensors import (
    Tensor,
    d_nabla,
    nabla,
    skew_symmetrize,
    symmetrize_last_pair,
)

KIND_SKEW = "K"
KIND_SYMMETRIC = "G"


@dataclass(frozen=True)
class CochainSpace:
    """One graded piece of either complex."""

    kind: str
    dim: int
    grade: int

    def __post_init__(self):
        if self.kind not in (KIND_SKEW, KIND_SYMMETRIC):
            raise ValueError(f"unknown complex kind {self.kind!r}")
        if self.dim < 1 or self.grade < 0:
            raise ValueError("need dim >= 1 and grade >= 0")

    @property
    def tensor_rank(self) -> int:
        return 0 if self.grade == 0 else self.grade + 1

    def successor(self) -> "CochainSpace":
        return CochainSpace(self.kind, self.dim, self.grade + 1)

    def __str__(self) -> str:
        return f"{self.kind}({self.grade}) over dim {self.dim}"


def K(dim: int, grade: int) -> CochainSpace:
    return CochainSpace(KIND_SKEW, dim, grade)


def G(dim: int, grade: int) -> CochainSpace:
    return CochainSpace(KIND_SYMMETRIC, dim, grade)


@dataclass(frozen=True)
class CyclicPermutation:
    """Left rotation by `power` places on rank `size` index tuples."""

    size: int
    power: int

    def apply(self, idx: tuple[int, ...]) -> tuple[int, ...]:
        k = self.power % self.size
        return idx[k:] + idx[:k]

    def as_slot_permutation(self) -> tuple[int, ...]:
        k = self.power % self.size
        return tuple((j + k) % self.size for j in range(self.size))


def cyclic_sum(t: Tensor, grade: int) -> Tensor:
    """sum_{i=0}^{grade} (-1)^(i*grade) * (t with indices rotated left by i)."""
    size = t.rank
    total = Tensor.zero(t.dim, t.rank)
    for i in range(grade + 1):
        rotated = t.permute_slots(CyclicPermutation(size, i).as_slot_permutation())
        sign = -1 if (i * grade) % 2 else 1
        total = total + (rotated if sign == 1 else -rotated)
    return total


# ---------------------------------------------------------------------------
# Membership
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConditionResult:
    name: str
    ok: bool
    max_residual: float
    witness: Optional[dict] = None


@dataclass(frozen=True)
class MembershipReport:
    space: CochainSpace
    ok: bool
    conditions: tuple[ConditionResult, ...] = ()

    def worst(self) -> Optional[ConditionResult]:
        failing = [c for c in self.conditions if not c.ok]
        if not failing:
            return None
        return max(failing, key=lambda c: c.max_residual)


def tensor_zero_outcome(
    t: Tensor, policy: Optional[EqualityPolicy] = None
) -> tuple[bool, float, Optional[dict]]:
    """Is every entry (exactly or by sampling) the zero field?"""
    worst = 0.0
    witness = None
    ok = True
    zero = ScalarField.zero(t.dim)
    for idx in t.nonzero_indices():
        outcome: ComparisonOutcome = compare(t.get(idx), zero, policy)
        if outcome.max_residual > worst or (not outcome.equal and witness is None):
            worst = max(worst, outcome.max_residual)
            if not outcome.equal:
                witness = {"index": list(idx), "detail": outcome.witness}
        if not outcome.equal:
            ok = False
    return ok, worst, witness


def _condition(name: str, residual: Tensor, policy) -> ConditionResult:
    ok, worst, witness = tensor_zero_outcome(residual, policy)
    return ConditionResult(name, ok, worst, witness)


def is_member(
    t: Tensor, space: CochainSpace, policy: Optional[EqualityPolicy] = None
) -> MembershipReport:
    """Check every defining identity of the space; exact on polynomials."""
    if t.dim != space.dim:
        raise RankMismatch("tensor dimension does not match the space")
    if t.rank != space.tensor_rank:
        raise RankMismatch(
            f"rank {t.rank} tensor cannot sit in {space} (rank {space.tensor_rank})"
        )
    q = space.grade
    conditions: list[ConditionResult] = []
    if q >= 1:
        if space.kind == KIND_SKEW:
            if q >= 2:
                conditions.append(
                    _condition(
                        "alternating_in_first_slots",
                        t - skew_symmetrize(t, range(q)),
                        policy,
                    )
                )
            conditions.append(
                _condition(
                    "full_alternation_vanishes",
                    skew_symmetrize(t, range(q + 1)),
                    policy,
                )
            )
        else:
            if q >= 3:
                conditions.append(
                    _condition(
                        "alternating_in_first_slots",
                        t - skew_symmetrize(t, range(q - 1)),
                        policy,
                    )
                )
            conditions.append(
                _condition("symmetric_last_pair", t - symmetrize_last_pair(t), policy)
            )
            conditions.append(
                _condition("cyclic_sum_vanishes", cyclic_sum(t, q), policy)
            )
    ok = all(c.ok for c in conditions)
    return MembershipReport(space, ok, tuple(conditions))


@dataclass(frozen=True)
class CochainElement:
    """A tensor together with the graded space it is claimed to live in."""

    space: CochainSpace
    tensor: Tensor

    @classmethod
    def create(
        cls,
        space: CochainSpace,
        tensor: Tensor,
        policy: Optional[EqualityPolicy] = None,
    ) -> "CochainElement":
        report = is_member(tensor, space, policy)
        if not report.ok:
            worst = report.worst()
            raise InvalidMember(
                f"tensor fails {worst.name} for {space} "
                f"(worst residual {worst.max_residual:g})",
                report=report,
            )
        return cls(space, tensor)

    @classmethod
    def wrap_trusted(cls, space: CochainSpace, tensor: Tensor) -> "CochainElement":
        """Skip validation; for outputs of operations that preserve it."""
        if tensor.rank != space.tensor_rank or tensor.dim != space.dim:
            raise RankMismatch("tensor shape does not match the space")
        return cls(space, tensor)

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def grade(self) -> int:
        return self.space.grade

    def __add__(self, other: "CochainElement") -> "CochainElement":
        if self.space != other.space:
            raise RankMismatch("elements live in different spaces")
        return CochainElement(self.space, self.tensor + other.tensor)

    def __sub__(self, other: "CochainElement") -> "CochainElement":
        if self.space != other.space:
            raise RankMismatch("elements live in different spaces")
        return CochainElement(self.space, self.tensor - other.tensor)

    def __neg__(self) -> "CochainElement":
        return CochainElement(self.space, -self.tensor)

    def __mul__(self, scalar) -> "CochainElement":
        return CochainElement(self.space, self.tensor * scalar)

    __rmul__ = __mul__


# ---------------------------------------------------------------------------
# Projections and random members
# ---------------------------------------------------------------------------


def project_to_K(t: Tensor, grade: int) -> CochainElement:
    """Orthogonal-style projector onto the skew family at the given grade."""
    space = K(t.dim, grade)
    if t.rank != space.tensor_rank:
        raise RankMismatch(
            f"rank {t.rank} input cannot project to grade {grade} (rank "
            f"{space.tensor_rank})"
        )
    if grade == 0:
        return CochainElement.wrap_trusted(space, t)
    if grade == 1:
        return CochainElement.wrap_trusted(space, symmetrize_last_pair(t))
    partial = skew_symmetrize(t, range(grade))
    projected = partial - skew_symmetrize(partial, range(grade + 1))
    return CochainElement.wrap_trusted(space, projected)


def random_polynomial(
    dim: int,
    rng: random.Random,
    max_degree: int = 3,
    n_terms: int = 3,
    coeff_bound: int = 4,
) -> Polynomial:
    """Small random integer polynomial; may collapse to fewer terms."""
    terms = {}
    for _ in range(n_terms):
        exp = [0] * dim
        for _ in range(rng.randint(0, max_degree)):
            exp[rng.randrange(dim)] += 1
        c = rng.randint(-coeff_bound, coeff_bound)
        if c:
            terms[tuple(exp)] = terms.get(tuple(exp), 0) + c
    return Polynomial(dim, terms)


def random_K_element(
    dim: int, grade: int, rng: random.Random, max_degree: int = 3
) -> CochainElement:
    space = K(dim, grade)
    if grade == 0:
        f = ScalarField.polynomial(random_polynomial(dim, rng, max_degree))
        return CochainElement.wrap_trusted(space, Tensor.scalar(f))
    raw = {}
    for _ in range(max(3, 2 * space.tensor_rank)):
        idx = tuple(rng.randrange(dim) for _ in range(space.tensor_rank))
        raw[idx] = ScalarField.polynomial(random_polynomial(dim, rng, max_degree))
    return project_to_K(Tensor(dim, space.tensor_rank, raw), grade)


def random_G_element(
    dim: int, grade: int, rng: random.Random, max_degree: int = 3
) -> CochainElement:
    return phi(random_K_element(dim, grade, rng, max_degree))


# ---------------------------------------------------------------------------
# Differentials and the isomorphism pair
# ---------------------------------------------------------------------------


def d_K(e: CochainElement) -> CochainElement:
    """Skew-family differential: Hessian at grade 0, d_nabla above."""
    if e.space.kind != KIND_SKEW:
        raise InvalidMember("d_K expects an element of the skew family")
    target = e.space.successor()
    if e.grade == 0:
        return CochainElement.wrap_trusted(target, nabla(nabla(e.tensor)))
    return CochainElement.wrap_trusted(target, d_nabla(e.tensor))


def phi(e: CochainElement) -> CochainElement:
    """Last-pair symmetrization, an isomorphism onto the symmetric family."""
    if e.space.kind != KIND_SKEW:
        raise InvalidMember("phi expects an element of the skew family")
    target = G(e.dim, e.grade)
    if e.grade <= 1:
        return CochainElement.wrap_trusted(target, e.tensor)
    return CochainElement.wrap_trusted(target, symmetrize_last_pair(e.tensor))


def psi(e: CochainElement) -> CochainElement:
    """Inverse of phi: 2q/(q+1) times alternation of the first q slots."""
    if e.space.kind != KIND_SYMMETRIC:
        raise InvalidMember("psi expects an element of the symmetric family")
    target = K(e.dim, e.grade)
    if e.grade <= 1:
        return CochainElement.wrap_trusted(target, e.tensor)
    q = e.grade
    skewed = skew_symmetrize(e.tensor, range(q)) * Fraction(2 * q, q + 1)
    return CochainElement.wrap_trusted(target, skewed)


def d_G(e: CochainElement) -> CochainElement:
    """Symmetric-family differential, conjugated through the isomorphism."""
    return phi(d_K(psi(e)))


def d_G1_explicit(e: CochainElement) -> CochainElement:
    """Grade-1 symmetric differential written out componentwise.

    out[m, n, l] = 1/2 d_m S[n, l] - 1/4 (d_n S[m, l] + d_l S[m, n])
    """
    if e.space.kind != KIND_SYMMETRIC or e.grade != 1:
        raise InvalidMember("explicit formula applies to grade-1 symmetric elements")
    grad = nabla(e.tensor)
    out = (
        grad * Fraction(1, 2)
        - grad.permute_slots((1, 0, 2)) * Fraction(1, 4)
        - grad.permute_slots((2, 0, 1)) * Fraction(1, 4)
    )
    return CochainElement.wrap_trusted(G(e.dim, 2), out)


def skew_reconstruction_residual(e: CochainElement) -> Tensor:
    """Reconstruction identity for the symmetric family at grade q >= 2.

    A member S of grade q is fixed by q/(q+1) times the sum of the two
    alternations of its first q slots, one with each of the last two slots
    held out.  Returns S minus that reconstruction; zero for true members.
    """
    if e.space.kind != KIND_SYMMETRIC or e.grade < 2:
        raise InvalidMember("reconstruction identity needs grade >= 2 symmetric input")
    q = e.grade
    first = skew_symmetrize(e.tensor, range(q))
    swapped = first.permute_slots(tuple(range(q - 1)) + (q, q - 1))
    return e.tensor - (first + swapped) * Fraction(q, q + 1)
