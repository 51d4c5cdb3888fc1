"""Exception hierarchy shared by the whole package."""


class SigmaHeatError(Exception):
    pass


class InvalidGenusError(SigmaHeatError, ValueError):
    pass


class GenusMismatchError(SigmaHeatError, ValueError):
    """Operands were built over different variable sets."""


class IndexRangeError(SigmaHeatError, IndexError):
    pass


class DivisionByZeroError(SigmaHeatError, ZeroDivisionError):
    pass


class UnsupportedDivisorError(SigmaHeatError, ValueError):
    """Divisor whose leading coefficient is not a rational constant."""


class ExactDivisionError(SigmaHeatError, ArithmeticError):
    pass


class RecurrenceNotApplicableError(SigmaHeatError, ValueError):
    pass


class BasisDegenerateError(SigmaHeatError, ArithmeticError):
    pass


class NotInSpanError(SigmaHeatError, ArithmeticError):
    """No polynomial solution of the basis expansion exists."""


class InternalConsistencyError(SigmaHeatError, AssertionError):
    pass


class ParseError(SigmaHeatError, ValueError):
    pass


class FixtureParseError(ParseError):
    pass
