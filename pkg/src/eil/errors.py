"""Exception types shared across the package."""


class EILError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(EILError, ValueError):
    pass


class SingularMatrix(EILError, ZeroDivisionError):
    pass


class MatrixFormatError(EILError, ValueError):
    pass


class EntryOutOfBox(EILError, ValueError):
    """Some entry lies outside the closed interval [0, 1]."""


class ParityMismatch(EILError, ValueError):
    pass


class NotHadamard(EILError, ValueError):
    pass


class NotNormalized(EILError, ValueError):
    pass


class UnsupportedOrder(EILError, ValueError):
    """No implemented construction reaches the requested order."""


class OrderTooLarge(EILError, ValueError):
    pass


class InvalidParameter(EILError, ValueError):
    pass


class SingularIterate(EILError, ArithmeticError):
    """A descent iterate became numerically singular and restarts ran out."""


class IdentityViolated(EILError, AssertionError):
    """An identity that holds for every valid input failed.

    This always indicates an implementation bug, never bad data.
    """


class ChainBroken(EILError, AssertionError):
    """Equality held but a later step of the equality chain did not."""
