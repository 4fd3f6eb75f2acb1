"""Exception types raised across the package."""


class InvalidParameters(ValueError):
    """Class parameters outside -1 <= B < A <= 1, 0 <= beta < 1, p >= 1."""


class DivisionByZeroLeadingCoefficient(ZeroDivisionError):
    pass


class PreconditionViolated(ValueError):
    pass


class CaseMismatch(ValueError):
    """An extremal family was asked to witness a case it does not attain."""


class DegenerateDenominator(ArithmeticError):
    """M - B*q(z) vanished on the sample grid."""


class NotAFalsificationRegime(ValueError):
    pass


class TruncationWarning(UserWarning):
    """A sample radius was dropped because the series tail was not resolved."""
