"""Exception hierarchy shared by all modules.

``DomainError`` subclasses map to CLI exit code 1, ``PrecisionError``
subclasses to exit code 2.
"""


class AnticycloError(Exception):
    pass


class DomainError(AnticycloError, ValueError):
    pass


class PrecisionError(AnticycloError, ArithmeticError):
    pass


class NonUnit(DomainError):
    pass


class NotRational(DomainError):
    pass


class NotPrimitive(DomainError):
    pass


class NotDefinite(DomainError):
    pass


class DiscMismatch(DomainError):
    pass


class BoundExceeded(DomainError):
    pass


class NotSplit(DomainError):
    pass


class Ramified(DomainError):
    pass


class ConductorMismatch(DomainError):
    pass


class UnitObstruction(DomainError):
    pass


class NotInGroup(DomainError):
    pass


class OddExponent(DomainError):
    pass


class BadPrime(DomainError):
    pass


class NotStable(DomainError):
    pass


class NoConvergence(DomainError):
    pass


class BranchMismatch(DomainError):
    pass


class PrecisionLoss(PrecisionError):
    """Raised when a division by p^k is not exact to the available precision."""

    def __init__(self, message, deficit=None):
        super().__init__(message)
        self.deficit = deficit


class PrecisionExhausted(PrecisionError):
    pass


class TruncationError(PrecisionError):
    pass
