"""Exception types shared across the package.

The CLI maps these onto exit codes: schema/parse problems exit 2, violated
identities (membership, closedness, verification residuals) exit 1.
"""

from __future__ import annotations


class CochainError(Exception):
    """Base class for all package-specific errors."""


class SingularPoint(CochainError):
    """Evaluation hit a singular locus (zero denominator, log/sqrt domain)."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class Unevaluable(CochainError):
    """A formal primitive was reached during evaluation."""


class IncomparableBackends(CochainError):
    """Neither exact normalization nor a shared sample domain exists."""


class NonPolynomial(CochainError):
    """Operation requires the exact polynomial backend."""


class RankMismatch(CochainError):
    """Tensor rank does not match the requested cochain space."""


class InvalidMember(CochainError):
    """Tensor fails the symmetry/membership conditions of its space."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotClosed(CochainError):
    """Input to a potential construction is not a cocycle."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NotConnectionShaped(CochainError):
    """Rank-3 input is not symmetric in its last two indices."""


class SingularMetric(CochainError):
    """Metric coefficient f or g vanishes on the sample domain."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class BadParameter(CochainError):
    """Invalid metric name or non-positive metric parameter."""


class SchemaError(CochainError):
    """Structurally invalid JSON document; `path` locates the offender."""

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class MembershipError(InvalidMember):
    """Parsed tensor claims a space whose conditions it violates."""


class ExprSyntaxError(SchemaError):
    """Malformed s-expression; `position` is the character offset."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at offset {position})")
        self.position = position
