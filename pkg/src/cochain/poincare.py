"""Constructive exactness on d-space for polynomial cochains.

The engine is the classical ray homotopy for the de Rham complex,

    (h omega)_{m2..mp}(x) = sum_a x^a * Int_0^1 t^(p-1) omega_{a m2..mp}(t x) dt,

which for polynomial entries is exact rational arithmetic: a monomial of
total degree m picks up the factor 1/(p + m).  Against the unnormalized
exterior derivative

    (d omega)_{m0..mp} = sum_j (-1)^j  d_{m_j} omega_{m0..^j..mp}

it satisfies d o h + h o d = identity, so h inverts d on closed forms.

Tensors here may carry trailing passenger slots (the symmetric index of
the skew complex); both operators act on a leading form block and carry
the passengers along unchanged.

`solve_potential` chains the homotopy into a potential for a closed
element of the skew complex whose differential normalizes the alternation
(the grade-q differential equals d/q on the leading block), then repairs
the full-alternation constraint with one more homotopy application.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .complexes import K, CochainElement, d_K
from .errors import InvalidMember, NonPolynomial, NotClosed
from .fields import ScalarField, homotopy_scale_integral, signed_field_sum
from .tensors import Tensor, d_nabla, nabla, skew_symmetrize


def _require_polynomial(t: Tensor, what: str):
    for idx in t.nonzero_indices():
        if not t.get(idx).is_polynomial:
            raise NonPolynomial(f"{what} requires polynomial entries (index {idx})")


def exterior_derivative(t: Tensor, form_slots: int) -> Tensor:
    """Unnormalized exterior derivative on the leading form block."""
    if not 0 <= form_slots <= t.rank:
        raise ValueError("form block exceeds the rank")
    buckets: dict[tuple, list] = {}
    for idx, f in t.entries.items():
        head, tail = idx[:form_slots], idx[form_slots:]
        for axis in range(t.dim):
            df = f.differentiate(axis)
            if df.is_structural_zero:
                continue
            for j in range(form_slots + 1):
                out_idx = head[:j] + (axis,) + head[j:] + tail
                sign = -1 if j % 2 else 1
                buckets.setdefault(out_idx, []).append((sign, df))
    entries = {}
    for idx, parts in buckets.items():
        entries[idx] = signed_field_sum(
            [f for _, f in parts], [s for s, _ in parts], Fraction(1)
        )
    return Tensor(t.dim, t.rank + 1, entries)


def ray_homotopy(t: Tensor, form_slots: int) -> Tensor:
    """Contract the first form slot with x and integrate along rays."""
    if form_slots < 1:
        raise ValueError("need at least one form slot to contract")
    if form_slots > t.rank:
        raise ValueError("form block exceeds the rank")
    _require_polynomial(t, "ray homotopy")
    out: dict[tuple, ScalarField] = {}
    for idx, f in t.entries.items():
        axis, rest = idx[0], idx[1:]
        piece = ScalarField.coordinate(t.dim, axis) * homotopy_scale_integral(
            f, form_slots - 1
        )
        out[rest] = out[rest] + piece if rest in out else piece
    return Tensor(t.dim, t.rank - 1, out)


def closedness_residual(t: Tensor, form_slots: int) -> Tensor:
    """Alternation of the gradient over the form block plus the new slot."""
    return skew_symmetrize(nabla(t), range(form_slots + 1))


def de_rham_homotopy(
    omega: Tensor, form_slots: int, *, check_closed: bool = True
) -> Tensor:
    """Potential of a closed form family: d(h omega) = omega exactly.

    With check_closed off this is the raw homotopy operator, useful for
    the two-sided identity d o h + h o d = id on arbitrary forms.
    """
    _require_polynomial(omega, "homotopy")
    if check_closed:
        residual = closedness_residual(omega, form_slots)
        if not residual.is_structural_zero:
            raise NotClosed(
                "input form family is not closed in its form block",
                residual=residual,
            )
    return ray_homotopy(omega, form_slots)


@dataclass(frozen=True)
class PotentialResult:
    """Potential for a closed skew-complex element, with its audit trail."""

    potential: CochainElement
    correction: Optional[Tensor]
    residual: float


def solve_potential(element: CochainElement) -> PotentialResult:
    """Invert the skew-complex differential on a closed polynomial element.

    Grade 1 (symmetric rank 2, the Hessian image): two nested homotopy
    passes produce a scalar potential.  Grade q >= 2: one homotopy pass
    per trailing slot gives a raw potential A with d A = input; a second
    homotopy on the full alternation of A yields the correction that
    restores the vanishing-alternation constraint without disturbing the
    differential.  Everything is exact; the returned residual is the
    worst coefficient of d(potential) - input and must be zero.
    """
    space = element.space
    if space.kind != "K":
        raise InvalidMember("potentials are solved in the skew complex")
    q = space.grade
    if q < 1:
        raise ValueError("grade must be at least 1")
    t = element.tensor
    _require_polynomial(t, "solve_potential")

    closure = d_K(element).tensor
    if not closure.is_structural_zero:
        raise NotClosed("element is not closed under the differential", residual=closure)

    correction: Optional[Tensor] = None
    if q == 1:
        # T_{mn} = d_m d_n f: integrate once per trailing slot, then once more.
        gradient = ray_homotopy(t, 1)
        scalar = ray_homotopy(gradient, 1)
        potential = CochainElement.wrap_trusted(K(t.dim, 0), scalar)
    else:
        # d_nabla equals (unnormalized d)/q on the leading block, so feed q*T.
        raw = ray_homotopy(t * q, q)
        alternation = skew_symmetrize(raw, range(q))
        if not alternation.is_structural_zero:
            correction = de_rham_homotopy(alternation * q, q)
            fixed = raw - d_nabla(correction)
        else:
            fixed = raw
        potential = CochainElement.wrap_trusted(K(t.dim, q - 1), fixed)

    check = d_K(potential).tensor - t
    worst = 0.0
    for idx in check.nonzero_indices():
        entry = check.get(idx)
        if entry.is_polynomial:
            worst = max(worst, float(entry.backend.max_abs_coeff()))
        else:  # pragma: no cover - polynomial-only path
            worst = max(worst, 1.0)
    return PotentialResult(potential, correction, worst)


def _determinant(rows: list[list[Fraction]]) -> Fraction:
    """Exact determinant by fraction-free elimination on a copy."""
    n = len(rows)
    m = [list(r) for r in rows]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = Fraction(1) / m[col][col]
        for r in range(col + 1, n):
            factor = m[r][col] * inv
            if factor == 0:
                continue
            for c in range(col, n):
                m[r][c] -= factor * m[col][c]
    return det


def affine_kernel_basis(dim: int) -> list[ScalarField]:
    """The kernel of the grade-0 differential: constants and coordinates.

    Returns dim+1 fields and proves their independence by an exact Gram
    determinant over the monomial coefficient vectors.
    """
    if dim < 1:
        raise ValueError("dim must be at least 1")
    basis = [ScalarField.constant(dim, 1)]
    basis.extend(ScalarField.coordinate(dim, axis) for axis in range(dim))

    monomials = sorted({exp for f in basis for exp, _ in f.backend.items()})
    vectors = [
        [f.backend.coefficient(exp) for exp in monomials] for f in basis
    ]
    gram = [
        [sum(a * b for a, b in zip(u, v)) for v in vectors] for u in vectors
    ]
    if _determinant(gram) == 0:  # pragma: no cover - basis is independent
        raise ArithmeticError("affine kernel basis is degenerate")
    return basis
