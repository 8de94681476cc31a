"""Exception types raised across the package."""

from __future__ import annotations


class SliceRankError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(SliceRankError, ValueError):
    pass


class LinearlyDependentInput(SliceRankError, ValueError):
    pass


class SingularMatrix(SliceRankError, ValueError):
    pass


class BudgetExceeded(SliceRankError):
    """An enumeration would exceed its configured budget.

    ``lower_bound`` is the best lower bound proven before giving up (every
    candidate below it was checked and failed), or ``None`` when no search
    was attempted.
    """

    def __init__(self, message: str, lower_bound: int | None = None):
        super().__init__(message)
        self.lower_bound = lower_bound


# transforms
class SingularChange(SingularMatrix):
    pass


class InvalidPartition(SliceRankError, ValueError):
    pass


class NonZeroShiftSum(SliceRankError, ValueError):
    pass


# zero form
class NotZero(SliceRankError, ValueError):
    pass


class DependentFamilies(SliceRankError, ValueError):
    pass


class MismatchedOneVariableFunctions(SliceRankError, ValueError):
    pass


class DifferentTensors(SliceRankError, ValueError):
    pass


# sunflower
class HypothesesViolated(SliceRankError, ValueError):
    def __init__(self, message: str, violations: list[str] | None = None):
        super().__init__(message)
        self.violations = list(violations or [])


class InternalContradiction(SliceRankError, RuntimeError):
    pass


class DimsTooSmall(SliceRankError, ValueError):
    pass


# enumeration
class NotOfRankK(SliceRankError, ValueError):
    pass


class PreconditionFailed(SliceRankError, ValueError):
    pass
