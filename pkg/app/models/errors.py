"""
Exception hierarchy for the algebra toolkit.

Every error carries a machine-readable code and a details dictionary so that
services and the CLI can turn it into an ErrorResponse payload.
"""
from typing import Any, Dict, Optional

from app.models.schemas import ErrorResponse


class AlgebraError(Exception):
    """Base class for all toolkit errors."""
    code = "ALGEBRA_ERROR"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_response(self) -> ErrorResponse:
        """Convert the error to the response schema."""
        return ErrorResponse(error=self.code, details={"message": self.message, **self.details})


class InputError(AlgebraError):
    code = "INPUT_ERROR"


class CapExceeded(AlgebraError):
    code = "CAP_EXCEEDED"


class InvalidGenerator(AlgebraError):
    code = "INVALID_GENERATOR"


class NotSemisimple(AlgebraError):
    code = "NOT_SEMISIMPLE"


class ResidueNotSemisimple(AlgebraError):
    code = "RESIDUE_NOT_SEMISIMPLE"


class NotCoprime(AlgebraError):
    code = "NOT_COPRIME"


class NotCommuting(AlgebraError):
    code = "NOT_COMMUTING"


class EigenvaluesNotRational(AlgebraError):
    code = "EIGENVALUES_NOT_RATIONAL"


class NotSplit(AlgebraError):
    """A linear system over a chain ring has no unit pivot left."""
    code = "NOT_SPLIT"


class RandomnessExhausted(AlgebraError):
    code = "RANDOMNESS_EXHAUSTED"


class SubsetBudgetExceeded(AlgebraError):
    code = "SUBSET_BUDGET_EXCEEDED"


class ResidueConditionViolated(AlgebraError):
    code = "RESIDUE_CONDITION"


class InvariantViolation(AlgebraError):
    code = "INVARIANT_VIOLATION"
