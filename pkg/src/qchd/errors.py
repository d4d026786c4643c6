"""Exception types shared across the toolkit."""


class QchdError(Exception):
    """Base class for all toolkit errors."""


class NonHermitianError(QchdError):
    """Matrix fails the Hermiticity tolerance."""


class DimensionMismatchError(QchdError):
    """Operands have incompatible dimensions."""


class AlphaOutOfRangeError(QchdError):
    """Renyi order alpha outside the open interval (0, 1)."""


class ParameterOutOfRangeError(QchdError):
    """Channel or formula parameter outside its admissible range."""


class BudgetExceededError(QchdError):
    """Requested computation exceeds the configured size cap."""


class ABOutOfRangeError(QchdError):
    """(a, b) pair outside the admissible band for the Chernoff objective."""


class NotPositiveError(QchdError):
    """Kraus-product combination is not positive definite."""


class FormatError(QchdError):
    """Input file violates a structural or physical invariant."""


class UnknownExampleError(QchdError):
    """Unrecognized reproduction target."""
