"""Dense-rank tensors with scalar-field entries on flat d-space.

A :class:`Tensor` of rank r holds one :class:`~cochain.fields.ScalarField`
per index tuple in ``{0..d-1}^r``, stored sparsely (missing entries are the
zero field).  Indices are all written downstairs; the flat background does
the raising and lowering elsewhere.

The (anti)symmetrization helpers average over permutations of an arbitrary
subset of slots.  They enumerate index combinations rather than raw index
tuples: for the alternating case only strictly increasing value tuples are
computed, and every other arrangement is filled in by sign.  That turns the
d^r * m! cost of the naive loop into (number of contributing combinations)
* m!, which is what keeps high-grade identity checks affordable.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .errors import RankMismatch
from .fields import ScalarField, signed_field_sum

Index = tuple[int, ...]


def permutation_sign(perm: Iterable[int]) -> int:
    """Sign of a permutation given as a sequence of distinct comparables."""
    perm = tuple(perm)
    inversions = sum(
        1
        for i in range(len(perm))
        for j in range(i + 1, len(perm))
        if perm[i] > perm[j]
    )
    return -1 if inversions % 2 else 1


class Tensor:
    """Immutable rank-r tensor of scalar fields over d coordinates."""

    __slots__ = ("dim", "rank", "entries")

    def __init__(self, dim: int, rank: int, entries: Optional[dict] = None):
        if dim <= 0 or rank < 0:
            raise ValueError("need dim >= 1 and rank >= 0")
        clean: dict[Index, ScalarField] = {}
        for idx, field in (entries or {}).items():
            idx = tuple(idx)
            if len(idx) != rank:
                raise RankMismatch(f"index {idx} does not have rank {rank}")
            if any(not 0 <= i < dim for i in idx):
                raise ValueError(f"index {idx} out of range for dim {dim}")
            if not isinstance(field, ScalarField):
                raise TypeError("tensor entries must be ScalarField")
            if field.dim != dim:
                raise ValueError("entry dimension mismatch")
            if not field.is_structural_zero:
                clean[idx] = field
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "entries", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Tensor is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, dim: int, rank: int) -> "Tensor":
        return cls(dim, rank, {})

    @classmethod
    def scalar(cls, field: ScalarField) -> "Tensor":
        return cls(field.dim, 0, {(): field})

    @classmethod
    def from_function(
        cls, dim: int, rank: int, fn: Callable[[Index], ScalarField]
    ) -> "Tensor":
        entries = {}
        for idx in itertools.product(range(dim), repeat=rank):
            entries[idx] = fn(idx)
        return cls(dim, rank, entries)

    # -- access ------------------------------------------------------------

    def get(self, idx: Index) -> ScalarField:
        field = self.entries.get(tuple(idx))
        return field if field is not None else ScalarField.zero(self.dim)

    def __getitem__(self, idx) -> ScalarField:
        if isinstance(idx, int):
            idx = (idx,)
        return self.get(idx)

    @property
    def is_structural_zero(self) -> bool:
        return not self.entries

    def nonzero_indices(self) -> list[Index]:
        return sorted(self.entries)

    # -- pointwise algebra ---------------------------------------------------

    def _check(self, other: "Tensor"):
        if self.dim != other.dim or self.rank != other.rank:
            raise RankMismatch("tensor shape mismatch")

    def __add__(self, other: "Tensor") -> "Tensor":
        self._check(other)
        merged = dict(self.entries)
        for idx, field in other.entries.items():
            merged[idx] = merged[idx] + field if idx in merged else field
        return Tensor(self.dim, self.rank, merged)

    def __sub__(self, other: "Tensor") -> "Tensor":
        return self + (-other)

    def __neg__(self) -> "Tensor":
        return Tensor(self.dim, self.rank, {i: -f for i, f in self.entries.items()})

    def __mul__(self, scalar) -> "Tensor":
        scalar = Fraction(scalar)
        if scalar == 0:
            return Tensor.zero(self.dim, self.rank)
        return Tensor(
            self.dim, self.rank, {i: f * scalar for i, f in self.entries.items()}
        )

    __rmul__ = __mul__

    def map_entries(self, fn: Callable[[ScalarField], ScalarField]) -> "Tensor":
        return Tensor(self.dim, self.rank, {i: fn(f) for i, f in self.entries.items()})

    def permute_slots(self, perm: tuple[int, ...]) -> "Tensor":
        """result[idx] = self[tuple(idx[perm[k]] for k in range(rank))]."""
        if sorted(perm) != list(range(self.rank)):
            raise ValueError("not a slot permutation")
        # self[J] lands at every I with I[perm[k]] = ... ; rebuild from the
        # output side instead: invert perm so each stored entry moves once.
        inverse = [0] * self.rank
        for k, p in enumerate(perm):
            inverse[p] = k
        out = {}
        for idx, field in self.entries.items():
            key = tuple(idx[inverse[k]] for k in range(self.rank))
            out[key] = field
        return Tensor(self.dim, self.rank, out)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Tensor)
            and self.dim == other.dim
            and self.rank == other.rank
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.dim, self.rank, frozenset(self.entries.items())))

    def __repr__(self) -> str:
        keys = ", ".join(str(k) for k in sorted(self.entries)[:4])
        more = "..." if len(self.entries) > 4 else ""
        return f"Tensor(dim={self.dim}, rank={self.rank}, nonzero=[{keys}{more}])"


# ---------------------------------------------------------------------------
# Derivatives
# ---------------------------------------------------------------------------


def nabla(t: Tensor) -> Tensor:
    """Coordinate gradient; the new derivative slot comes first."""
    out = {}
    for idx, field in t.entries.items():
        for axis in range(t.dim):
            d = field.differentiate(axis)
            if not d.is_structural_zero:
                out[(axis,) + idx] = d
    return Tensor(t.dim, t.rank + 1, out)


# ---------------------------------------------------------------------------
# Symmetrizers
# ---------------------------------------------------------------------------


def _check_positions(t: Tensor, positions) -> tuple[int, ...]:
    positions = tuple(positions)
    if len(set(positions)) != len(positions):
        raise ValueError("positions must be distinct")
    if any(not 0 <= p < t.rank for p in positions):
        raise ValueError("position out of range")
    return positions


def _split_index(idx: Index, positions: tuple[int, ...], rest_slots: tuple[int, ...]):
    return tuple(idx[p] for p in positions), tuple(idx[s] for s in rest_slots)


def _assemble(
    rank: int, positions: tuple[int, ...], rest_slots: tuple[int, ...], vals, rest
) -> Index:
    idx = [0] * rank
    for p, v in zip(positions, vals):
        idx[p] = v
    for s, v in zip(rest_slots, rest):
        idx[s] = v
    return tuple(idx)


def skew_symmetrize(t: Tensor, positions) -> Tensor:
    """Alternating average over all orderings of the given slots.

    Only strictly increasing value tuples are summed explicitly; the other
    orderings are copies up to sign and repeated values force zeros.
    """
    positions = _check_positions(t, positions)
    m = len(positions)
    if m <= 1:
        return t
    rest_slots = tuple(s for s in range(t.rank) if s not in positions)
    factor = Fraction(1, math.factorial(m))

    combos = set()
    for idx in t.entries:
        vals, rest = _split_index(idx, positions, rest_slots)
        if len(set(vals)) == m:
            combos.add((tuple(sorted(vals)), rest))

    perms = list(itertools.permutations(range(m)))
    signs = [permutation_sign(p) for p in perms]
    out = {}
    for combo, rest in sorted(combos):
        fields = []
        for p in perms:
            vals = tuple(combo[k] for k in p)
            fields.append(t.get(_assemble(t.rank, positions, rest_slots, vals, rest)))
        canonical = signed_field_sum(fields, signs, factor)
        if canonical.is_structural_zero:
            continue
        for p, sign in zip(perms, signs):
            vals = tuple(combo[k] for k in p)
            idx = _assemble(t.rank, positions, rest_slots, vals, rest)
            out[idx] = canonical if sign == 1 else -canonical
    return Tensor(t.dim, t.rank, out)


def symmetrize(t: Tensor, positions) -> Tensor:
    """Plain average over all orderings of the given slots."""
    positions = _check_positions(t, positions)
    m = len(positions)
    if m <= 1:
        return t
    rest_slots = tuple(s for s in range(t.rank) if s not in positions)
    factor = Fraction(1, math.factorial(m))

    combos = set()
    for idx in t.entries:
        vals, rest = _split_index(idx, positions, rest_slots)
        combos.add((tuple(sorted(vals)), rest))

    perms = list(itertools.permutations(range(m)))
    ones = [1] * len(perms)
    out = {}
    for combo, rest in sorted(combos):
        fields = []
        arrangements = set()
        for p in perms:
            vals = tuple(combo[k] for k in p)
            arrangements.add(vals)
            fields.append(t.get(_assemble(t.rank, positions, rest_slots, vals, rest)))
        value = signed_field_sum(fields, ones, factor)
        if value.is_structural_zero:
            continue
        for vals in arrangements:
            out[_assemble(t.rank, positions, rest_slots, vals, rest)] = value
    return Tensor(t.dim, t.rank, out)


def symmetrize_last_pair(t: Tensor) -> Tensor:
    if t.rank < 2:
        raise RankMismatch("need rank >= 2 to symmetrize the last two slots")
    return symmetrize(t, (t.rank - 2, t.rank - 1))


def d_nabla(t: Tensor) -> Tensor:
    """Gradient followed by alternation over all but the last slot."""
    if t.rank == 0:
        return nabla(t)
    return skew_symmetrize(nabla(t), tuple(range(t.rank)))
