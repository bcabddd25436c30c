"""Exception hierarchy.

Every construction or evaluation failure raises a subclass of
:class:`MeritError`; the CLI prints the class name on stderr.
"""


class MeritError(Exception):
    """Base class for all package errors."""


class NotPrime(MeritError, ValueError):
    pass


class NoGenerator(MeritError, RuntimeError):
    pass


class TooLarge(MeritError, ValueError):
    pass


class BadDegree(MeritError, ValueError):
    pass


class NotSubfield(MeritError, ValueError):
    pass


class TrivialChar(MeritError, ValueError):
    pass


class PermutedMultisets(MeritError, ValueError):
    pass


class BadModulus(MeritError, ValueError):
    pass


class BadS(MeritError, ValueError):
    pass


class NotHallPrime(MeritError, ValueError):
    pass


class NeitherIsDiffSet(MeritError, RuntimeError):
    pass


class BadB(MeritError, ValueError):
    pass


class EvenCharacteristic(MeritError, ValueError):
    pass


class PrecisionLoss(MeritError, ArithmeticError):
    pass


class DegenerateDenominator(MeritError, ZeroDivisionError):
    pass


class BadT(MeritError, ValueError):
    pass


class OutOfRange(MeritError, ValueError):
    pass


class NotAdditive(MeritError, ValueError):
    pass


class UnknownFamily(MeritError, ValueError):
    pass


class WrongForm(MeritError, ValueError):
    pass


class WrongParity(MeritError, ValueError):
    pass
