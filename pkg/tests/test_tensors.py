# tests/test_tensors.py
import itertools
import random
from fractions import Fraction

import pytest

from cochain.errors import RankMismatch
from cochain.fields import Polynomial, ScalarField
from cochain.tensors import (
    Tensor,
    d_nabla,
    nabla,
    permutation_sign,
    skew_symmetrize,
    symmetrize,
    symmetrize_last_pair,
)


def random_tensor(dim, rank, rng, n_entries=5, max_degree=2):
    entries = {}
    for _ in range(n_entries):
        idx = tuple(rng.randrange(dim) for _ in range(rank))
        p = Polynomial.zero(dim)
        exps = tuple(rng.randrange(max_degree + 1) for _ in range(dim))
        c = Fraction(rng.randrange(-4, 5))
        mono = Polynomial.constant(dim, c)
        for axis, e in enumerate(exps):
            mono = mono * Polynomial.coordinate(dim, axis) ** e
        entries[idx] = ScalarField.polynomial(p + mono)
    return Tensor(dim, rank, entries)


# ---------------------------------------------------------
# Brute-force oracles: sum over every permutation of the slots
# ---------------------------------------------------------


def brute_skew(t, positions):
    positions = tuple(positions)
    result = {}
    perms = list(itertools.permutations(range(len(positions))))
    for idx in itertools.product(range(t.dim), repeat=t.rank):
        total = ScalarField.zero(t.dim)
        for perm in perms:
            src = list(idx)
            for k, pos in enumerate(positions):
                src[pos] = idx[positions[perm[k]]]
            total = total + t.get(tuple(src)) * Fraction(permutation_sign(perm))
        total = total * Fraction(1, len(perms))
        if not total.is_structural_zero:
            result[idx] = total
    return Tensor(t.dim, t.rank, result)


def brute_sym(t, positions):
    positions = tuple(positions)
    result = {}
    perms = list(itertools.permutations(range(len(positions))))
    for idx in itertools.product(range(t.dim), repeat=t.rank):
        total = ScalarField.zero(t.dim)
        for perm in perms:
            src = list(idx)
            for k, pos in enumerate(positions):
                src[pos] = idx[positions[perm[k]]]
            total = total + t.get(tuple(src))
        total = total * Fraction(1, len(perms))
        if not total.is_structural_zero:
            result[idx] = total
    return Tensor(t.dim, t.rank, result)


def test_skew_matches_brute_force():
    rng = random.Random(41)
    for dim, rank, m in [(2, 2, 2), (2, 3, 2), (3, 3, 3), (3, 4, 3), (2, 4, 3)]:
        for _ in range(4):
            t = random_tensor(dim, rank, rng)
            positions = tuple(range(m))
            assert skew_symmetrize(t, positions) == brute_skew(t, positions)


def test_skew_over_trailing_positions():
    rng = random.Random(42)
    t = random_tensor(3, 3, rng)
    assert skew_symmetrize(t, (1, 2)) == brute_skew(t, (1, 2))


def test_symmetrize_matches_brute_force():
    rng = random.Random(43)
    for dim, rank, m in [(2, 2, 2), (3, 3, 2), (3, 3, 3), (2, 4, 3)]:
        for _ in range(4):
            t = random_tensor(dim, rank, rng)
            positions = tuple(range(m))
            assert symmetrize(t, positions) == brute_sym(t, positions)


def test_skew_and_sym_are_idempotent_projections():
    rng = random.Random(44)
    for _ in range(5):
        t = random_tensor(3, 3, rng)
        s = skew_symmetrize(t, (0, 1))
        assert skew_symmetrize(s, (0, 1)) == s
        y = symmetrize(t, (1, 2))
        assert symmetrize(y, (1, 2)) == y
        # skew then sym over the same slots annihilates
        assert not symmetrize(s, (0, 1)).nonzero_indices()


def test_skew_known_example():
    # T(0,1) = x0 skews to (x0/2, -x0/2)
    x0 = ScalarField.coordinate(2, 0)
    t = Tensor(2, 2, {(0, 1): x0})
    s = skew_symmetrize(t, (0, 1))
    assert s.get((0, 1)) == x0 * Fraction(1, 2)
    assert s.get((1, 0)) == x0 * Fraction(-1, 2)
    assert s.get((0, 0)).is_structural_zero


def test_permutation_sign():
    assert permutation_sign((0, 1, 2)) == 1
    assert permutation_sign((1, 0, 2)) == -1
    assert permutation_sign((2, 0, 1)) == 1
    assert permutation_sign((0,)) == 1


# ---------------------------------------------------------
# Slot permutation semantics
# ---------------------------------------------------------


def test_permute_slots_definition():
    """result[I] = t[I composed with perm], checked entrywise."""
    rng = random.Random(45)
    for _ in range(5):
        t = random_tensor(3, 3, rng)
        perm = list(range(3))
        rng.shuffle(perm)
        perm = tuple(perm)
        got = t.permute_slots(perm)
        for idx in itertools.product(range(3), repeat=3):
            src = tuple(idx[perm[k]] for k in range(3))
            assert got.get(idx) == t.get(src)


def test_permute_slots_swap_rank_two():
    x = ScalarField.coordinate(2, 0)
    t = Tensor(2, 2, {(0, 1): x})
    swapped = t.permute_slots((1, 0))
    assert swapped.get((1, 0)) == x
    assert swapped.get((0, 1)).is_structural_zero


def test_permute_slots_composition():
    rng = random.Random(46)
    t = random_tensor(2, 3, rng)
    p1 = (1, 2, 0)
    p2 = (2, 0, 1)
    lhs = t.permute_slots(p1).permute_slots(p2)
    composed = tuple(p2[p1[k]] for k in range(3))
    assert lhs == t.permute_slots(composed)


def test_permute_slots_identity():
    rng = random.Random(47)
    t = random_tensor(3, 2, rng)
    assert t.permute_slots((0, 1)) == t


# ---------------------------------------------------------
# Construction and validation
# ---------------------------------------------------------


def test_tensor_drops_structural_zeros():
    z = ScalarField.zero(2)
    x = ScalarField.coordinate(2, 0)
    t = Tensor(2, 2, {(0, 0): z, (0, 1): x})
    assert t.nonzero_indices() == [(0, 1)]


def test_tensor_rejects_bad_indices():
    x = ScalarField.coordinate(2, 0)
    with pytest.raises(RankMismatch):
        Tensor(2, 2, {(0,): x})
    with pytest.raises(ValueError):
        Tensor(2, 2, {(0, 2): x})
    with pytest.raises(ValueError):
        Tensor(2, 2, {(0, -1): x})


def test_tensor_rejects_dim_mismatch():
    x3 = ScalarField.coordinate(3, 0)
    with pytest.raises(ValueError):
        Tensor(2, 2, {(0, 1): x3})


def test_tensor_arithmetic():
    rng = random.Random(48)
    a = random_tensor(2, 2, rng)
    b = random_tensor(2, 2, rng)
    assert a + b == b + a
    assert a - a == Tensor.zero(2, 2)
    assert (a * Fraction(2)) - a == a
    assert -a == a * Fraction(-1)


def test_tensor_scalar_rank_zero():
    f = ScalarField.coordinate(2, 1)
    t = Tensor.scalar(f)
    assert t.rank == 0
    assert t.get(()) == f


# ---------------------------------------------------------
# Derivative operators
# ---------------------------------------------------------


def test_nabla_of_scalar_is_gradient():
    x0 = ScalarField.coordinate(2, 0)
    x1 = ScalarField.coordinate(2, 1)
    t = Tensor.scalar(x0 * x0 * x1)
    g = nabla(t)
    assert g.rank == 1
    assert g.get((0,)) == x0 * x1 * Fraction(2)
    assert g.get((1,)) == x0 * x0


def test_nabla_prepends_derivative_slot():
    rng = random.Random(49)
    t = random_tensor(2, 2, rng)
    g = nabla(t)
    for idx in itertools.product(range(2), repeat=3):
        assert g.get(idx) == t.get(idx[1:]).differentiate(idx[0])


def test_d_nabla_known_example():
    # T(0,1) = x1 gives entries -1/2 and +1/2 at (0,1,1) and (1,0,1)
    x1 = ScalarField.coordinate(2, 1)
    t = Tensor(2, 2, {(0, 1): x1})
    d = d_nabla(t)
    assert d.get((0, 1, 1)) == x1.differentiate(1) * Fraction(-1, 2)
    assert d.get((1, 0, 1)).evaluate((Fraction(0), Fraction(0))) == Fraction(1, 2)
    assert sorted(d.nonzero_indices()) == [(0, 1, 1), (1, 0, 1)]


def test_d_nabla_equals_skew_of_nabla():
    rng = random.Random(50)
    for _ in range(5):
        t = random_tensor(2, 2, rng)
        assert d_nabla(t) == skew_symmetrize(nabla(t), (0, 1))


def test_symmetrize_last_pair():
    rng = random.Random(51)
    t = random_tensor(3, 3, rng)
    s = symmetrize_last_pair(t)
    assert s == symmetrize(t, (1, 2))
    assert s == s.permute_slots((0, 2, 1))
