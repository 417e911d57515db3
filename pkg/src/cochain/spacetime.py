"""Isotropic metrics on flat spacetime and their gravitational potential.

The line element is  f(H) dt^2 - g(H) dx^2  on coordinates (t, x1, x2, x3),
with f and g smooth profiles of a single variable and H a function of the
spatial coordinates only.  The Levi-Civita connection is computed upstairs
and then lowered with the flat diagonal form diag(+1, -1, -1, -1) rather
than with the metric itself; the whole construction depends on that
choice.

Splitting off the total symmetrization leaves the symmetric-free part F,
a grade-2 element of the symmetric cochain family.  The claim under test:
F is the coboundary of the grade-1 potential

    A = u(H) dt^2 + v(H) dx^2,   u' = -2f'/(3f) - 2f'/(3g),  v = (4/3) log g.

u is only ever differentiated, so it is stored as a formal antiderivative
of u'; a closed form is attached where one is known.

Profiles are expression trees in a single placeholder variable (coordinate
0 of a 1-dimensional space stands for H); composing with the actual H
field happens on demand.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .complexes import CochainElement, d_G
from .complexes import G as G_space
from .complexes import tensor_zero_outcome
from .errors import (
    BadParameter,
    NotConnectionShaped,
    SingularMetric,
    SingularPoint,
)
from .fields import (
    Const,
    Coord,
    Expr,
    FormalPrimitive,
    ScalarField,
    differentiate_expr,
    ex_intpow,
    ex_log,
    ex_neg,
    ex_product,
    ex_quotient,
    ex_sqrt,
    ex_sum,
    substitute,
    ZERO,
    ONE,
)
from .policy import EqualityPolicy, relative_residual, sample_radial_points
from .report import CheckResult, VerificationReport
from .tensors import Tensor, symmetrize, symmetrize_last_pair

DIM = 4
TIME_AXIS = 0
SPATIAL_AXES = (1, 2, 3)
ETA_DIAGONAL = (Fraction(1), Fraction(-1), Fraction(-1), Fraction(-1))

# The profile placeholder: coordinate 0 of a one-variable expression.
H_VAR = Coord(0)


def spatial_radius() -> Expr:
    return ex_sqrt(ex_sum([ex_intpow(Coord(a), 2) for a in SPATIAL_AXES]))


@dataclass(frozen=True)
class IsotropicMetric:
    """diag(f(H), -g(H), -g(H), -g(H)) with H a function of space only."""

    name: str
    f_profile: Expr
    g_profile: Expr
    H: ScalarField
    params: tuple[tuple[str, Fraction], ...] = ()

    def __post_init__(self):
        if self.H.dim != DIM:
            raise BadParameter("H must be a field over the 4 coordinates")
        if not self.H.differentiate(TIME_AXIS).is_structural_zero:
            raise BadParameter("H must not depend on the time coordinate")
        if self.f_profile == ZERO or self.g_profile == ZERO:
            raise SingularMetric("metric profile vanishes identically")

    def compose(self, profile: Expr) -> ScalarField:
        """profile(H) as a field over the 4 coordinates."""
        return ScalarField(DIM, substitute(profile, {0: self.H.expr}))

    @property
    def f_field(self) -> ScalarField:
        return self.compose(self.f_profile)

    @property
    def g_field(self) -> ScalarField:
        return self.compose(self.g_profile)

    def params_dict(self) -> dict:
        return {k: v for k, v in self.params}


def flat_background() -> Tensor:
    """The constant lowering form diag(+1, -1, -1, -1)."""
    entries = {
        (mu, mu): ScalarField.constant(DIM, ETA_DIAGONAL[mu]) for mu in range(DIM)
    }
    return Tensor(DIM, 2, entries)


# ---------------------------------------------------------------------------
# Built-in metrics
# ---------------------------------------------------------------------------


def builtin_metric(
    name: str,
    *,
    mass: Union[Fraction, int, str] = Fraction(1),
    omega: Union[Fraction, int, str] = Fraction(4),
    H: Optional[Union[ScalarField, Expr]] = None,
    f: Optional[Expr] = None,
    g: Optional[Expr] = None,
) -> IsotropicMetric:
    """Construct one of the named metric families.

    mp            f = H^-2, g = H^2, default H = 1 + 1/r
    extreme_rn    the mp family with H = 1 + mass/r
    schwarzschild H = 1 - (omega/4)/r, f = (2-H)^2 H^-2, g = H^4
    flat          f = g = 1
    custom        caller supplies f, g (profiles in H) and the H field
    """
    mass = Fraction(mass)
    omega = Fraction(omega)
    if isinstance(H, Expr):
        H = ScalarField(DIM, H)

    def one_over_r(scale: Fraction) -> ScalarField:
        return ScalarField(
            DIM, ex_sum([ONE, ex_quotient(Const(scale), spatial_radius())])
        )

    if name == "mp":
        field = H if H is not None else one_over_r(Fraction(1))
        return IsotropicMetric(
            "mp", ex_intpow(H_VAR, -2), ex_intpow(H_VAR, 2), field
        )
    if name == "extreme_rn":
        if mass <= 0:
            raise BadParameter("mass must be positive")
        if H is not None:
            raise BadParameter("extreme_rn fixes H = 1 + mass/r")
        return IsotropicMetric(
            "extreme_rn",
            ex_intpow(H_VAR, -2),
            ex_intpow(H_VAR, 2),
            one_over_r(mass),
            params=(("mass", mass),),
        )
    if name == "schwarzschild":
        if omega <= 0:
            raise BadParameter("omega must be positive")
        if H is not None:
            raise BadParameter("schwarzschild fixes H = 1 - (omega/4)/r")
        field = one_over_r(-omega / 4)
        f_prof = ex_product(
            [ex_intpow(ex_sum([Const(Fraction(2)), ex_neg(H_VAR)]), 2),
             ex_intpow(H_VAR, -2)]
        )
        return IsotropicMetric(
            "schwarzschild", f_prof, ex_intpow(H_VAR, 4), field,
            params=(("omega", omega),),
        )
    if name == "flat":
        field = H if H is not None else ScalarField.coordinate(DIM, 1)
        return IsotropicMetric("flat", ONE, ONE, field)
    if name == "custom":
        if f is None or g is None or H is None:
            raise BadParameter("custom metric needs f, g and H")
        return IsotropicMetric("custom", f, g, H)
    raise BadParameter(f"unknown metric name {name!r}")


BUILTIN_NAMES = ("mp", "extreme_rn", "schwarzschild", "flat")


# ---------------------------------------------------------------------------
# Connection and its symmetric-free part
# ---------------------------------------------------------------------------


def christoffel_lowered(m: IsotropicMetric) -> Tensor:
    """Levi-Civita symbols of the diagonal metric, lowered with the flat form.

    Upstairs the standard formula collapses for a diagonal metric; the
    first index is then lowered with diag(+1,-1,-1,-1), NOT with the
    metric itself.
    """
    metric_diag = [m.f_field, -m.g_field, -m.g_field, -m.g_field]
    entries = {}
    for tau in range(DIM):
        for nu in range(DIM):
            for lam in range(DIM):
                parts = []
                if tau == lam:
                    parts.append(metric_diag[tau].differentiate(nu))
                if tau == nu:
                    parts.append(metric_diag[tau].differentiate(lam))
                if nu == lam:
                    parts.append(-metric_diag[nu].differentiate(tau))
                total = None
                for p in parts:
                    total = p if total is None else total + p
                if total is None or total.is_structural_zero:
                    continue
                upper = total / (metric_diag[tau] * 2)
                lowered = upper * ETA_DIAGONAL[tau]
                if not lowered.is_structural_zero:
                    entries[(tau, nu, lam)] = lowered
    return Tensor(DIM, 3, entries)


@dataclass(frozen=True)
class ConnectionDecomposition:
    gamma_lowered: Tensor
    symmetric_part: Tensor
    field_strength: CochainElement


def symmetric_free_part(
    gamma: Tensor, policy: Optional[EqualityPolicy] = None
) -> ConnectionDecomposition:
    """Split off the full symmetrization, leaving a grade-2 symmetric-family element."""
    if gamma.dim != DIM or gamma.rank != 3:
        raise NotConnectionShaped("expected a rank-3 tensor over 4 coordinates")
    residual = gamma - symmetrize_last_pair(gamma)
    ok, worst, witness = tensor_zero_outcome(residual, policy)
    if not ok:
        raise NotConnectionShaped(
            f"connection is not symmetric in its last two slots "
            f"(worst residual {worst:g}, witness {witness})"
        )
    sym = symmetrize(gamma, (0, 1, 2))
    strength = gamma - sym
    element = CochainElement.wrap_trusted(G_space(DIM, 2), strength)
    return ConnectionDecomposition(gamma, sym, element)


# ---------------------------------------------------------------------------
# Reference tables (independent closed forms, used as oracles)
# ---------------------------------------------------------------------------


def _profile_derivative(m: IsotropicMetric, profile: Expr) -> ScalarField:
    """(d profile / dH) composed with H, as a 4-coordinate field."""
    return m.compose(differentiate_expr(profile, 0))


def reference_christoffel_table(m: IsotropicMetric) -> Tensor:
    """The closed-form nonzero symbols of the isotropic family.

    Built directly from log-derivatives of the profiles, independently of
    the generic Levi-Civita computation, so the two can cross-check.
    """
    f4, g4 = m.f_field, m.g_field
    df4, dg4 = _profile_derivative(m, m.f_profile), _profile_derivative(m, m.g_profile)
    half = Fraction(1, 2)
    entries = {}
    for j in SPATIAL_AXES:
        dHj = m.H.differentiate(j)
        if dHj.is_structural_zero:
            continue
        dlogf = df4 * dHj / f4
        dlogg = dg4 * dHj / g4
        tjt = dlogf * half
        if not tjt.is_structural_zero:
            entries[(0, j, 0)] = tjt
            entries[(0, 0, j)] = tjt
        jtt = -(df4 * dHj / g4) * half
        if not jtt.is_structural_zero:
            entries[(j, 0, 0)] = jtt
        minus_half_dlogg = dlogg * -half
        if not minus_half_dlogg.is_structural_zero:
            for k in SPATIAL_AXES:
                entries[(k, j, k)] = minus_half_dlogg
                entries[(k, k, j)] = minus_half_dlogg
            for k in SPATIAL_AXES:
                if k != j:
                    entries[(j, k, k)] = dlogg * half
    return Tensor(DIM, 3, entries)


def u_prime_profile(m: IsotropicMetric) -> Expr:
    """u' = -2f'/(3f) - 2f'/(3g), in the single profile variable."""
    df = differentiate_expr(m.f_profile, 0)
    c = Const(Fraction(-2, 3))
    return ex_sum(
        [
            ex_product([c, ex_quotient(df, m.f_profile)]),
            ex_product([c, ex_quotient(df, m.g_profile)]),
        ]
    )


def v_profile(m: IsotropicMetric) -> Expr:
    """v = (4/3) log g, in the single profile variable."""
    return ex_product([Const(Fraction(4, 3)), ex_log(m.g_profile)])


def reference_field_strength_table(m: IsotropicMetric) -> Tensor:
    """Closed-form symmetric-free part, straight from the u', v profiles."""
    up4 = m.compose(u_prime_profile(m))
    vp4 = m.compose(differentiate_expr(v_profile(m), 0))
    quarter = Fraction(1, 4)
    entries = {}
    for j in SPATIAL_AXES:
        dHj = m.H.differentiate(j)
        if dHj.is_structural_zero:
            continue
        du = up4 * dHj
        dv = vp4 * dHj
        if not du.is_structural_zero:
            entries[(0, j, 0)] = du * -quarter
            entries[(0, 0, j)] = du * -quarter
            entries[(j, 0, 0)] = du * Fraction(1, 2)
        if not dv.is_structural_zero:
            for k in SPATIAL_AXES:
                if k == j:
                    continue
                entries[(k, j, k)] = dv * -quarter
                entries[(k, k, j)] = dv * -quarter
                entries[(j, k, k)] = dv * Fraction(1, 2)
    return Tensor(DIM, 3, entries)


# ---------------------------------------------------------------------------
# The potential and its verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Potential:
    """A = u(H) dt^2 + v(H) dx^2 as a grade-1 symmetric-family element."""

    element: CochainElement
    u_prime: Expr
    v: Expr
    u_closed: Optional[Expr] = None


def _mp_closed_u(m: IsotropicMetric) -> Optional[Expr]:
    # For f = H^-2, g = H^2 the antiderivative of u' is known:
    # u = (4/3) log H - (1/3) H^-4; checked by differentiating back.
    if m.f_profile == ex_intpow(H_VAR, -2) and m.g_profile == ex_intpow(H_VAR, 2):
        return ex_sum(
            [
                ex_product([Const(Fraction(4, 3)), ex_log(H_VAR)]),
                ex_product([Const(Fraction(-1, 3)), ex_intpow(H_VAR, -4)]),
            ]
        )
    return None


def build_potential(m: IsotropicMetric) -> Potential:
    up = u_prime_profile(m)
    vp = v_profile(m)
    if up == ZERO:
        u_field = ScalarField.zero(DIM)
    else:
        u_field = ScalarField(
            DIM, FormalPrimitive(substitute(up, {0: m.H.expr}), m.H.expr)
        )
    v_field = m.compose(vp)
    entries = {(0, 0): u_field}
    for j in SPATIAL_AXES:
        entries[(j, j)] = v_field
    element = CochainElement.wrap_trusted(
        G_space(DIM, 1), Tensor(DIM, 2, entries)
    )
    return Potential(element, up, vp, _mp_closed_u(m))


def tensor_match_residual(
    a: Tensor, b: Tensor, policy: EqualityPolicy
) -> tuple[float, Optional[dict], int]:
    """Worst relative residual between two tensors at shared sample points.

    Every component is evaluated at the same seeded radial points; a point
    is discarded if any component of either side is singular there.
    Returns (worst residual, witness for it, components checked).
    """
    indices = sorted(set(a.nonzero_indices()) | set(b.nonzero_indices()))
    rng = random.Random(policy.seed)
    accepted = 0
    worst = 0.0
    witness = None
    budget = policy.points * 60
    while accepted < policy.points and budget > 0:
        budget -= 1
        (point,) = sample_radial_points(1, policy.bound, rng)
        try:
            point_worst = 0.0
            point_witness = None
            for idx in indices:
                va = a.get(idx).evaluate(point)
                vb = b.get(idx).evaluate(point)
                r = relative_residual(va, vb)
                if r > point_worst:
                    point_worst = r
                    point_witness = {
                        "index": list(idx),
                        "point": [str(c) for c in point.coordinates],
                        "left": str(va),
                        "right": str(vb),
                    }
        except SingularPoint:
            continue
        accepted += 1
        if point_worst > worst:
            worst = point_worst
            witness = point_witness
    if accepted < policy.points:
        raise SingularPoint("could not collect enough regular sample points")
    return worst, witness, len(indices)


def verify_potential(
    m: IsotropicMetric, policy: Optional[EqualityPolicy] = None
) -> VerificationReport:
    """Check F = d_G A componentwise at seeded rational sample points."""
    if policy is None:
        policy = EqualityPolicy.spacetime()
    decomposition = symmetric_free_part(christoffel_lowered(m))
    potential = build_potential(m)
    coboundary = d_G(potential.element)

    worst, witness, n_components = tensor_match_residual(
        decomposition.field_strength.tensor, coboundary.tensor, policy
    )
    report = VerificationReport(
        "field strength against potential coboundary",
        context={
            "metric": m.name,
            "points": policy.points,
            "tolerance": policy.tolerance,
            "seed": policy.seed,
        },
    )
    report.add(
        CheckResult(
            "field_strength_equals_potential_coboundary",
            worst <= policy.tolerance,
            worst,
            witness if worst > policy.tolerance else None,
            detail=f"{n_components} nonzero components at {policy.points} points",
        )
    )
    return report


def table_report(
    m: IsotropicMetric, policy: Optional[EqualityPolicy] = None
) -> VerificationReport:
    """Cross-check computed connection and field strength against the
    closed-form reference tables."""
    if policy is None:
        policy = EqualityPolicy.spacetime()
    gamma = christoffel_lowered(m)
    decomposition = symmetric_free_part(gamma)
    report = VerificationReport(
        "connection and field strength against reference tables",
        context={
            "metric": m.name,
            "points": policy.points,
            "tolerance": policy.tolerance,
            "seed": policy.seed,
        },
    )
    for name, computed, reference in (
        ("christoffel_matches_table", gamma, reference_christoffel_table(m)),
        (
            "field_strength_matches_table",
            decomposition.field_strength.tensor,
            reference_field_strength_table(m),
        ),
    ):
        worst, witness, n_components = tensor_match_residual(
            computed, reference, policy
        )
        report.add(
            CheckResult(
                name,
                worst <= policy.tolerance,
                worst,
                witness if worst > policy.tolerance else None,
                detail=f"{n_components} components",
            )
        )
    return report


def check_harmonic(
    H: ScalarField, policy: Optional[EqualityPolicy] = None
) -> VerificationReport:
    """Informational: does the spatial Laplacian of H vanish?"""
    from .policy import compare

    lap = None
    for j in SPATIAL_AXES:
        second = H.differentiate(j).differentiate(j)
        lap = second if lap is None else lap + second
    outcome = compare(lap, ScalarField.zero(H.dim), policy)
    report = VerificationReport("harmonicity of H")
    report.add(
        CheckResult(
            "spatial_laplacian_vanishes",
            outcome.equal,
            outcome.max_residual,
            outcome.witness,
        )
    )
    return report
