"""Exception hierarchy.

Input problems derive from :class:`NewtonLabError` (a ``ValueError``); broken
internal consistency derives from :class:`InternalError` (an
``AssertionError``).  The CLI maps the first to exit status 1 and the second
to exit status 2.
"""


class NewtonLabError(ValueError):
    pass


class InternalError(AssertionError):
    pass


# polygon
class SlopeOutOfRange(NewtonLabError):
    pass


class NotSymmetric(NewtonLabError):
    pass


class DomainError(NewtonLabError):
    pass


class DomainMismatch(NewtonLabError):
    pass


class EmptyPolygon(NewtonLabError):
    pass


# strata
class GenusTooSmall(NewtonLabError):
    pass


class EmptyInput(NewtonLabError):
    pass


# covers
class IrreduciblePoleUnsupported(NewtonLabError):
    pass


class NotReduced(NewtonLabError):
    pass


class NegativeGenus(NewtonLabError):
    pass


class BaseNotOrdinary(NewtonLabError):
    pass


class HeightMismatch(InternalError):
    pass


# families
class Inadmissible(NewtonLabError):
    def __init__(self, message, slack=None):
        super().__init__(message)
        self.slack = slack


class ConductorDivisibleByP(NewtonLabError):
    pass


class NonIntegralA(InternalError):
    pass


class SlopeSetMismatch(NewtonLabError):
    pass


# zeta
class DegreeTooLarge(NewtonLabError):
    pass


class FieldGuard(NewtonLabError):
    pass


class RoundTripFailure(InternalError):
    pass


class CounterexampleFound(InternalError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
