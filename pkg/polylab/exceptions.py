"""Exception hierarchy shared by the numerical, symbolic and exact modules."""

from __future__ import annotations

from typing import Any


class LabError(Exception):
    """Base class for every error raised by the lab."""


class LatticeError(LabError):
    """Raised for invalid lattice input."""


class DegenerateLatticeError(LatticeError):
    """The periods are collinear or too close to collinear to reduce reliably."""


class PrecisionLossError(LabError):
    """Two independent evaluation routes disagree beyond tolerance."""

    def __init__(self, message: str, residual: float | None = None) -> None:
        super().__init__(message)
        self.residual = residual


class TruncationError(LabError):
    """A series did not reach its target accuracy within the truncation bound."""


class SingularSignal(LabError):
    """Typed signal for evaluations at or near a singular locus.

    This is not a numeric failure: the input lies on (or too close to) a
    divisor of the function being evaluated.
    """

    def __init__(self, message: str, point: complex | None = None) -> None:
        super().__init__(message)
        self.point = point


class SingularInputError(SingularSignal):
    """The point violates the exclusion radius around the lattice."""


class PoleSignal(SingularSignal):
    """Evaluation at a pole."""


class ZeroSignal(SingularSignal):
    """Evaluation at an exact zero."""


class RewriteError(LabError):
    """Base class for errors of the current calculus."""


class TermTypeError(RewriteError):
    """Bidegree or ambient-space mismatch between terms."""


class AdmissibilityError(RewriteError):
    """A wedge product of currents with clashing wavefront tags."""

    def __init__(self, message: str, tags: Any = None) -> None:
        super().__init__(message)
        self.tags = tags


class DerivationFailure(RewriteError):
    """A derivation did not connect its endpoints.

    The best normal forms reached for both sides are attached.
    """

    def __init__(self, message: str, lhs_normal: Any = None, rhs_normal: Any = None) -> None:
        super().__init__(message)
        self.lhs_normal = lhs_normal
        self.rhs_normal = rhs_normal


class RewriteBudgetExceeded(RewriteError):
    """Normalization did not terminate within the configured step budget."""


class CohomologyError(LabError):
    """Base class for errors of the exact linear algebra layer."""


class SmithFormError(CohomologyError):
    """A Smith normal form failed its recomputation check."""


class ResidueInfeasibleError(CohomologyError):
    """The requested residue is not in the image of the residue map."""


class TraceGcdError(CohomologyError):
    """The trace degree is not coprime to the level of the punctures."""


class BudgetExceededError(CohomologyError):
    """A configuration exceeds the size budget of the exact layer."""


class ExactnessError(CohomologyError):
    """An assembled long exact sequence failed a kernel/image check."""


__all__ = [
    "LabError",
    "LatticeError",
    "DegenerateLatticeError",
    "PrecisionLossError",
    "TruncationError",
    "SingularSignal",
    "SingularInputError",
    "PoleSignal",
    "ZeroSignal",
    "RewriteError",
    "TermTypeError",
    "AdmissibilityError",
    "DerivationFailure",
    "RewriteBudgetExceeded",
    "CohomologyError",
    "SmithFormError",
    "ResidueInfeasibleError",
    "TraceGcdError",
    "BudgetExceededError",
    "ExactnessError",
]
