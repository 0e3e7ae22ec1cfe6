"""Exception hierarchy shared by every stromver module."""

from __future__ import annotations


class StromverError(Exception):
    """Base class for all errors raised by this package."""


class DivisionByZero(StromverError, ZeroDivisionError):
    """Inverse of the zero scalar was requested."""


class DimensionMismatch(StromverError, ValueError):
    pass


class AlgebraViolation(StromverError, ValueError):
    """Structure constants or Hermitian data failed validation.

    ``violation`` names the failed invariant (``"antisymmetry"``,
    ``"jacobi"``, ``"unimodularity"``, ``"hermitian-symmetry"``,
    ``"positive-definite"``, ``"dagger"``, ``"schema"``).
    """

    def __init__(self, violation: str, detail: str = "") -> None:
        self.violation = violation
        self.detail = detail
        msg = f"{violation} violated"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class InvalidAlgebra(StromverError, ValueError):
    pass


class AmbientMismatch(StromverError, ValueError):
    pass


class SingularMetric(StromverError, ValueError):
    pass


class MalformedRecipe(StromverError, ValueError):
    pass


class InvalidRank(StromverError, ValueError):
    pass


class IndeterminateRank(StromverError, ArithmeticError):
    """Floating rank decision fell inside the ambiguity gap."""

    def __init__(self, message: str, singular_values=None) -> None:
        super().__init__(message)
        self.singular_values = singular_values


class OutOfModel(StromverError, ValueError):
    """Input is not right-translation invariant (not representable here)."""


class InvalidInstance(StromverError, ValueError):
    pass
