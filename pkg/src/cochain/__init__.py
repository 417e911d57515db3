"""Cochain complexes over flat space with exact symbolic scalars.

Two isomorphic graded complexes (one alternating-flavored, one with a
symmetric last index pair), constructive potentials for closed elements,
and the worked spacetime application: the symmetric-free part of an
isotropic metric's connection is the coboundary of an explicit
gravitational potential.
"""

from ._kernels import backend_name
from .complexes import (
    CochainElement,
    CochainSpace,
    CyclicPermutation,
    G,
    K,
    MembershipReport,
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
    skew_reconstruction_residual,
)
from .errors import (
    BadParameter,
    CochainError,
    ExprSyntaxError,
    IncomparableBackends,
    InvalidMember,
    MembershipError,
    NonPolynomial,
    NotClosed,
    NotConnectionShaped,
    RankMismatch,
    SchemaError,
    SingularMetric,
    SingularPoint,
    Unevaluable,
)
from .fields import (
    Expr,
    FormalPrimitive,
    Point,
    Polynomial,
    ScalarField,
    differentiate,
    evaluate,
    homotopy_scale_integral,
)
from .poincare import (
    PotentialResult,
    affine_kernel_basis,
    de_rham_homotopy,
    exterior_derivative,
    ray_homotopy,
    solve_potential,
)
from .policy import EqualityPolicy, compare, equals
from .report import CheckResult, VerificationReport
from .sexpr import emit_scalar, parse_field, parse_scalar
from .spacetime import (
    ConnectionDecomposition,
    IsotropicMetric,
    Potential,
    build_potential,
    builtin_metric,
    check_harmonic,
    christoffel_lowered,
    reference_christoffel_table,
    reference_field_strength_table,
    symmetric_free_part,
    verify_potential,
)
from .tensor_io import emit_metric, emit_tensor, parse_metric, parse_tensor
from .tensors import (
    Tensor,
    d_nabla,
    nabla,
    skew_symmetrize,
    symmetrize,
    symmetrize_last_pair,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
