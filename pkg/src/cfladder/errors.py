"""Exception types raised by cfladder."""


class CubeError(ValueError):
    """m is a perfect cube (or smaller than 2), so its cube root is rational."""


class ZeroDenominator(ZeroDivisionError):
    pass


class DivisionByZero(ZeroDivisionError):
    pass


class MixedField(ValueError):
    """Operands live in Q(cbrt(m)) for different m."""


class IndexOutOfRange(IndexError):
    pass


class CertificateFailure(ArithmeticError):
    """A ladder certificate could not be reproduced exactly.

    Never expected on valid input; signals an implementation bug.
    """


class NotConsecutive(ValueError):
    pass


class DomainError(ValueError):
    pass


class EmptyHistogram(ValueError):
    pass
