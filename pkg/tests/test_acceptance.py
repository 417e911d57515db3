# tests/test_acceptance.py
#
# The eight binding checks for this package, one test per criterion.
# Symbolic identities must hold exactly (residual 0 in rational arithmetic);
# sampled spacetime residuals are bounded by 1e-9, pinned spot values by 1e-12.
import json
import os
import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from cochain.complexes import (
    G,
    K,
    d_G,
    d_G1_explicit,
    d_K,
    is_member,
    phi,
    psi,
    random_G_element,
    random_K_element,
    random_polynomial,
    skew_reconstruction_residual,
)
from cochain.fields import ScalarField
from cochain.poincare import (
    affine_kernel_basis,
    exterior_derivative,
    ray_homotopy,
    solve_potential,
)
from cochain.policy import EqualityPolicy
from cochain.spacetime import (
    builtin_metric,
    christoffel_lowered,
    reference_christoffel_table,
    reference_field_strength_table,
    symmetric_free_part,
    tensor_match_residual,
)
from cochain.tensors import Tensor, skew_symmetrize

SWEEP_DIMS = (2, 3, 4)
SWEEP_GRADES = (0, 1, 2, 3)
MEMBERS_PER_CELL = 50
SAMPLED_TOLERANCE = 1e-9
SPOT_TOLERANCE = 1e-12
SPACETIME_POLICY = EqualityPolicy(points=100, bound=9, tolerance=SAMPLED_TOLERANCE, seed=0)


def test_criterion_1_differential_squares_to_zero():
    """d then d annihilates every skew-family member, exactly."""
    rng = random.Random(101)
    start = time.perf_counter()
    checked = 0
    for dim in SWEEP_DIMS:
        for grade in SWEEP_GRADES:
            for _ in range(MEMBERS_PER_CELL):
                e = random_K_element(dim, grade, rng, max_degree=3)
                twice = d_K(d_K(e))
                assert not twice.tensor.nonzero_indices(), (dim, grade)
                checked += 1
    elapsed = time.perf_counter() - start
    assert checked == len(SWEEP_DIMS) * len(SWEEP_GRADES) * MEMBERS_PER_CELL
    assert elapsed <= 60.0, f"sweep took {elapsed:.1f}s"


def test_criterion_2_conjugation_pair_is_bijective():
    """psi after phi and phi after psi are the identity; the grade >= 2
    reconstruction residual vanishes on every generated symmetric member."""
    rng = random.Random(102)
    for dim in SWEEP_DIMS:
        for grade in SWEEP_GRADES:
            for _ in range(MEMBERS_PER_CELL):
                ek = random_K_element(dim, grade, rng, max_degree=3)
                assert psi(phi(ek)).tensor == ek.tensor, (dim, grade)
                eg = random_G_element(dim, grade, rng, max_degree=3)
                assert phi(psi(eg)).tensor == eg.tensor, (dim, grade)
                if grade >= 2:
                    residual = skew_reconstruction_residual(eg)
                    assert not residual.nonzero_indices(), (dim, grade)


def test_criterion_3_symmetric_differential_matches_explicit_formula():
    """The conjugated differential agrees with its explicit grade-1 form."""
    rng = random.Random(103)
    for trial in range(50):
        dim = SWEEP_DIMS[trial % len(SWEEP_DIMS)]
        s = random_G_element(dim, 1, rng, max_degree=3)
        composed = d_G(s)
        explicit = d_G1_explicit(s)
        assert composed.tensor == explicit.tensor, (dim, trial)
        assert composed.space == G(dim, 2)


def test_criterion_4_potentials_recover_exact_cocycles():
    """Closed elements admit potentials with zero residual and zero full
    alternation; the grade-0 kernel is the affine functions."""
    rng = random.Random(104)
    for dim in SWEEP_DIMS:
        for grade in (2, 3):
            for _ in range(MEMBERS_PER_CELL):
                seed_elem = random_K_element(dim, grade - 1, rng, max_degree=3)
                target = d_K(seed_elem)
                result = solve_potential(target)
                assert result.residual == 0.0, (dim, grade)
                assert d_K(result.potential).tensor == target.tensor, (dim, grade)
                a = result.potential.tensor
                assert not skew_symmetrize(a, range(a.rank)).nonzero_indices()
    for dim in SWEEP_DIMS:
        basis = affine_kernel_basis(dim)
        assert len(basis) == dim + 1
        from cochain.complexes import CochainElement

        for b in basis:
            elem = CochainElement.wrap_trusted(K(dim, 0), Tensor.scalar(b))
            assert not d_K(elem).tensor.nonzero_indices()
        # independence: evaluation matrix at affine points is invertible
        pts = [tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)]
        pts.append(tuple([Fraction(0)] * dim))
        matrix = [[b.evaluate(pt) for b in basis] for pt in pts]
        assert _determinant(matrix) != 0


def test_criterion_5_christoffel_components_match_closed_forms():
    """Computed connection components reproduce the four closed-form
    families at 100 seeded points within 1e-9."""
    for name in ("mp", "schwarzschild"):
        m = builtin_metric(name)
        computed = christoffel_lowered(m)
        table = reference_christoffel_table(m)
        worst, witness, n_components = tensor_match_residual(
            computed, table, SPACETIME_POLICY
        )
        assert n_components == 30, name
        assert worst <= SAMPLED_TOLERANCE, (name, worst, witness)


def test_criterion_6_field_strength_is_the_potential_coboundary():
    """F equals d_G of the constructed potential at 100 seeded points for
    all three curved families; pinned spot values hold to 1e-12."""
    for name in ("mp", "extreme_rn", "schwarzschild"):
        m = builtin_metric(name)
        decomposition = symmetric_free_part(christoffel_lowered(m))
        field_strength = decomposition.field_strength
        from cochain.spacetime import build_potential

        potential = build_potential(m)
        coboundary = d_G(potential.element)
        worst, witness, _ = tensor_match_residual(
            field_strength.tensor, coboundary.tensor, SPACETIME_POLICY
        )
        assert worst <= SAMPLED_TOLERANCE, (name, worst, witness)

    # spot values for the default mp metric at spatial point (1, 2, 2)
    m = builtin_metric("mp")
    oracle = reference_field_strength_table(m)
    computed = symmetric_free_part(christoffel_lowered(m)).field_strength.tensor
    point = (Fraction(3), Fraction(1), Fraction(2), Fraction(2))
    for index, pinned in [
        ((1, 0, 0), Fraction(-337, 13824)),
        ((1, 2, 2), Fraction(-1, 27)),
    ]:
        got = computed.get(index).evaluate(point)
        via_oracle = oracle.get(index).evaluate(point)
        assert abs(got - pinned) <= SPOT_TOLERANCE, index
        assert abs(via_oracle - pinned) <= SPOT_TOLERANCE, index


def test_criterion_7_homotopy_splits_the_identity():
    """d compose h plus h compose d reproduces every skew polynomial form."""
    rng = random.Random(107)
    combos = [(dim, p) for dim in SWEEP_DIMS for p in (1, 2, 3) if p <= dim]
    for trial in range(50):
        dim, p = combos[trial % len(combos)]
        entries = {}
        for _ in range(4):
            idx = tuple(rng.randrange(dim) for _ in range(p))
            entries[idx] = ScalarField.polynomial(random_polynomial(dim, rng))
        form = Tensor(dim, p, entries)
        if p > 1:
            form = skew_symmetrize(form, range(p))
        left = exterior_derivative(ray_homotopy(form, p), p - 1)
        right = ray_homotopy(exterior_derivative(form, p), p + 1)
        assert left + right == form, (dim, p, trial)


def test_criterion_8_cli_reports_are_deterministic_and_honest(tmp_path):
    """Same seed, same bytes; a perturbed tensor entry exits 1 with a witness;
    malformed input exits 2."""
    args = [
        sys.executable, "-m", "cochain.cli",
        "check-complex", "--dim", "3", "--grade", "2",
        "--trials", "10", "--seed", "5", "--json",
    ]
    env = dict(os.environ)
    env.pop("COCHAIN_SEED", None)
    first = subprocess.run(args, capture_output=True, text=True, env=env)
    second = subprocess.run(args, capture_output=True, text=True, env=env)
    assert first.returncode == 0, first.stderr
    assert first.stdout == second.stdout
    assert json.loads(first.stdout)["schema"] == "v1"

    doc = {
        "dim": 2,
        "rank": 3,
        "space": "K",
        "grade": 2,
        "entries": [
            {"index": [0, 1, 1], "expr": "(* -1/2 x1)"},
            {"index": [1, 0, 1], "expr": "(* 1/2 x1)"},
        ],
    }
    clean = tmp_path / "cocycle.json"
    clean.write_text(json.dumps(doc))
    ok = subprocess.run(
        [sys.executable, "-m", "cochain.cli", "poincare",
         "--in", str(clean), "--out", str(tmp_path / "pot.json")],
        capture_output=True, text=True, env=env,
    )
    assert ok.returncode == 0, ok.stderr

    # perturb one entry by 1: the membership claim now fails
    doc["entries"][0]["expr"] = "(+ 1 (* -1/2 x1))"
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps(doc))
    bad = subprocess.run(
        [sys.executable, "-m", "cochain.cli", "poincare",
         "--in", str(broken), "--out", str(tmp_path / "pot2.json")],
        capture_output=True, text=True, env=env,
    )
    assert bad.returncode == 1
    assert "witness" in bad.stderr

    junk = tmp_path / "junk.json"
    junk.write_text("{")
    malformed = subprocess.run(
        [sys.executable, "-m", "cochain.cli", "poincare",
         "--in", str(junk), "--out", str(tmp_path / "pot3.json")],
        capture_output=True, text=True, env=env,
    )
    assert malformed.returncode == 2


def _determinant(matrix):
    n = len(matrix)
    m = [row[:] for row in matrix]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        for r in range(col + 1, n):
            factor = m[r][col] / m[col][col]
            m[r] = [a - factor * b for a, b in zip(m[r], m[col])]
    return det
