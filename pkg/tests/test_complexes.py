# tests/test_complexes.py
import itertools
import random
from fractions import Fraction

import pytest

from cochain.complexes import (
    CochainElement,
    CochainSpace,
    CyclicPermutation,
    G,
    K,
    cyclic_sum,
    d_G,
    d_G1_explicit,
    d_K,
    is_member,
    phi,
    project_to_K,
    psi,
    random_G_element,
    random_K_element,
    random_polynomial,
    skew_reconstruction_residual,
)
from cochain.errors import InvalidMember, RankMismatch
from cochain.fields import ScalarField
from cochain.tensors import Tensor, skew_symmetrize


def field(dim, text):
    from cochain.sexpr import parse_field

    return parse_field(text, dim)


# ---------------------------------------------------------
# Space bookkeeping
# ---------------------------------------------------------


def test_space_ranks():
    assert K(3, 0).tensor_rank == 0
    assert G(3, 0).tensor_rank == 0
    assert K(3, 1).tensor_rank == 2
    assert G(3, 2).tensor_rank == 3
    assert K(3, 2).successor() == K(3, 3)


def test_cyclic_permutation_rotates():
    c = CyclicPermutation(3, 1)
    assert c.apply((7, 8, 9)) == (8, 9, 7)
    assert CyclicPermutation(3, 0).apply((7, 8, 9)) == (7, 8, 9)
    assert CyclicPermutation(3, 2).apply((7, 8, 9)) == (9, 7, 8)


# ---------------------------------------------------------
# Membership conditions
# ---------------------------------------------------------


def test_grade_zero_is_any_scalar():
    t = Tensor.scalar(ScalarField.coordinate(2, 0))
    assert is_member(t, K(2, 0)).ok
    assert is_member(t, G(2, 0)).ok


def test_skew_grade_one_is_symmetric_rank_two():
    x = ScalarField.coordinate(2, 0)
    sym = Tensor(2, 2, {(0, 1): x, (1, 0): x})
    asym = Tensor(2, 2, {(0, 1): x})
    assert is_member(sym, K(2, 1)).ok
    report = is_member(asym, K(2, 1))
    assert not report.ok
    assert report.worst().name == "full_alternation_vanishes"


def test_symmetric_grade_one_is_also_symmetric_rank_two():
    x = ScalarField.coordinate(2, 0)
    sym = Tensor(2, 2, {(0, 1): x, (1, 0): x})
    asym = Tensor(2, 2, {(0, 1): x})
    assert is_member(sym, G(2, 1)).ok
    assert not is_member(asym, G(2, 1)).ok


def test_skew_grade_two_conditions():
    # d of a symmetric rank-2 tensor lands in the grade-2 skew space
    x1 = ScalarField.coordinate(2, 1)
    e = CochainElement.create(K(2, 1), Tensor(2, 2, {(0, 0): x1 * x1}))
    t = d_K(e).tensor
    rep = is_member(t, K(2, 2))
    assert rep.ok
    # breaking the first-two-slot skew breaks membership
    bad = t + Tensor(2, 3, {(0, 0, 0): x1})
    assert not is_member(bad, K(2, 2)).ok


def test_symmetric_grade_two_cyclic_condition():
    # S(a,b,c) built to satisfy S[abc] + S[bca] + S[cab] = 0
    x = ScalarField.coordinate(2, 0)
    entries = {
        (0, 0, 1): x,
        (0, 1, 0): x,
        (1, 0, 0): x * Fraction(-2),
    }
    t = Tensor(2, 3, entries)
    assert is_member(t, G(2, 2)).ok
    bad = Tensor(2, 3, {(0, 0, 1): x, (0, 1, 0): x, (1, 0, 0): x})
    rep = is_member(bad, G(2, 2))
    assert not rep.ok
    assert rep.worst().name == "cyclic_sum_vanishes"


def test_symmetric_grade_three_needs_leading_skew():
    rng = random.Random(61)
    e = random_G_element(3, 3, rng)
    rep = is_member(e.tensor, G(3, 3))
    names = {c.name for c in rep.conditions}
    assert "alternating_in_first_slots" in names
    assert rep.ok


def test_rank_mismatch_rejected():
    x = ScalarField.coordinate(2, 0)
    with pytest.raises(RankMismatch):
        is_member(Tensor(2, 2, {(0, 1): x}), K(2, 2))


def test_create_raises_with_report():
    x = ScalarField.coordinate(2, 0)
    with pytest.raises(InvalidMember) as err:
        CochainElement.create(K(2, 1), Tensor(2, 2, {(0, 1): x}))
    assert err.value.report is not None
    assert not err.value.report.ok


def test_cyclic_sum_small_example():
    x = ScalarField.coordinate(2, 0)
    t = Tensor(2, 3, {(0, 0, 1): x})
    c = cyclic_sum(t, 2)
    # rotations of (0,0,1) are (0,1,0) and (1,0,0); all signs +1 for even grade
    assert c.get((0, 0, 1)) == x
    assert c.get((0, 1, 0)) == x
    assert c.get((1, 0, 0)) == x


# ---------------------------------------------------------
# Projections and generators
# ---------------------------------------------------------


def test_project_to_K_produces_members():
    rng = random.Random(62)
    for dim in (2, 3):
        for grade in (1, 2, 3):
            rank = grade + 1
            entries = {}
            for _ in range(5):
                idx = tuple(rng.randrange(dim) for _ in range(rank))
                entries[idx] = ScalarField.polynomial(random_polynomial(dim, rng))
            raw = Tensor(dim, rank, entries)
            e = project_to_K(raw, grade)
            assert is_member(e.tensor, K(dim, grade)).ok


def test_project_to_K_fixes_members():
    rng = random.Random(63)
    for grade in (1, 2):
        e = random_K_element(3, grade, rng)
        again = project_to_K(e.tensor, grade)
        assert again.tensor == e.tensor


def test_random_generators_produce_members():
    rng = random.Random(64)
    for dim in (2, 3, 4):
        for grade in (0, 1, 2, 3):
            ek = random_K_element(dim, grade, rng)
            assert is_member(ek.tensor, K(dim, grade)).ok
            eg = random_G_element(dim, grade, rng)
            assert is_member(eg.tensor, G(dim, grade)).ok


# ---------------------------------------------------------
# The two differentials and the isomorphism pair
# ---------------------------------------------------------


def test_d_K_on_scalar_is_hessian():
    # grade 0 to grade 1: unnormalized second derivatives
    f = field(2, "(* (^ x0 2) x1)")
    e = CochainElement.create(K(2, 0), Tensor.scalar(f))
    h = d_K(e).tensor
    two = ScalarField.constant(2, Fraction(2))
    assert h.get((0, 0)) == two * ScalarField.coordinate(2, 1)
    assert h.get((0, 1)) == two * ScalarField.coordinate(2, 0)
    assert h.get((1, 0)) == h.get((0, 1))
    assert h.get((1, 1)).is_structural_zero


def test_d_K_lands_in_next_grade():
    rng = random.Random(65)
    for dim in (2, 3):
        for grade in (0, 1, 2):
            e = random_K_element(dim, grade, rng)
            out = d_K(e)
            assert out.space == K(dim, grade + 1)
            assert is_member(out.tensor, K(dim, grade + 1)).ok


def test_d_K_squares_to_zero():
    rng = random.Random(66)
    for dim in (2, 3):
        for grade in (0, 1, 2):
            e = random_K_element(dim, grade, rng)
            dd = d_K(d_K(e))
            assert not dd.tensor.nonzero_indices()


def test_phi_known_example():
    # the skew pair (s/2, -s/2) spreads symmetrically as s/4, s/4, -s/2
    x1 = ScalarField.coordinate(2, 1)
    half = x1 * Fraction(1, 2)
    t = Tensor(2, 3, {(0, 1, 0): half, (1, 0, 0): -half})
    g = phi(CochainElement.create(K(2, 2), t))
    assert g.space == G(2, 2)
    quarter = x1 * Fraction(1, 4)
    assert g.tensor.get((0, 0, 1)) == quarter
    assert g.tensor.get((0, 1, 0)) == quarter
    assert g.tensor.get((1, 0, 0)) == -half
    assert len(g.tensor.nonzero_indices()) == 3
    # symmetric in last two
    for idx in itertools.product(range(2), repeat=3):
        swapped = (idx[0], idx[2], idx[1])
        assert g.tensor.get(idx) == g.tensor.get(swapped)


def test_phi_psi_inverse_on_random_elements():
    rng = random.Random(67)
    for dim in (2, 3):
        for grade in (0, 1, 2, 3):
            ek = random_K_element(dim, grade, rng)
            assert psi(phi(ek)).tensor == ek.tensor
            eg = random_G_element(dim, grade, rng)
            assert phi(psi(eg)).tensor == eg.tensor


def test_phi_psi_identity_below_grade_two():
    rng = random.Random(68)
    for grade in (0, 1):
        e = random_K_element(3, grade, rng)
        assert phi(e).tensor == e.tensor
        g = random_G_element(3, grade, rng)
        assert psi(g).tensor == g.tensor


def test_d_G_matches_explicit_grade_one_formula():
    rng = random.Random(69)
    for dim in (2, 3, 4):
        for _ in range(10):
            s = random_G_element(dim, 1, rng)
            assert d_G(s).tensor == d_G1_explicit(s).tensor


def test_d_G1_explicit_known_values():
    # S(0,0) = x1 in dim 2: nonzero out entries 1/2 and -1/4
    x1 = ScalarField.coordinate(2, 1)
    s = CochainElement.create(G(2, 1), Tensor(2, 2, {(0, 0): x1}))
    out = d_G1_explicit(s).tensor
    assert out.get((1, 0, 0)).evaluate((0, 0)) == Fraction(1, 2)
    assert out.get((0, 1, 0)).evaluate((0, 0)) == Fraction(-1, 4)
    assert out.get((0, 0, 1)).evaluate((0, 0)) == Fraction(-1, 4)


def test_d_G_squares_to_zero():
    rng = random.Random(70)
    for dim in (2, 3):
        for grade in (0, 1, 2):
            e = random_G_element(dim, grade, rng)
            dd = d_G(d_G(e))
            assert not dd.tensor.nonzero_indices()


def test_d_G_lands_in_symmetric_space():
    rng = random.Random(71)
    for dim in (2, 3):
        for grade in (0, 1, 2):
            out = d_G(random_G_element(dim, grade, rng))
            assert out.space == G(dim, grade + 1)
            assert is_member(out.tensor, G(dim, grade + 1)).ok


# ---------------------------------------------------------
# Recovering a symmetric element from its leading skew part
# ---------------------------------------------------------


def test_skew_reconstruction_residual_vanishes_on_members():
    rng = random.Random(72)
    for dim in (2, 3):
        for grade in (2, 3):
            e = random_G_element(dim, grade, rng)
            res = skew_reconstruction_residual(e)
            assert not res.nonzero_indices()


def test_skew_reconstruction_detects_non_members():
    # symmetric-pair tensor failing the cyclic condition reconstructs wrong
    x = ScalarField.coordinate(2, 0)
    bad = Tensor(2, 3, {(0, 0, 1): x, (0, 1, 0): x, (1, 0, 0): x})
    e = CochainElement.wrap_trusted(G(2, 2), bad)
    res = skew_reconstruction_residual(e)
    assert res.nonzero_indices()
