"""Exception hierarchy.

Two families: ``InvalidInput`` for malformed or out-of-domain inputs that the
caller should fix, and ``NumericalError`` for failures of a numerical
procedure on otherwise valid inputs.
"""


class LatGaussError(Exception):
    pass


class InvalidInput(LatGaussError, ValueError):
    pass


class ConjugateExponentError(InvalidInput):
    pass


class NumericalError(LatGaussError, ArithmeticError):
    pass


class DomainError(NumericalError):
    """A combination of natural parameters left the positive-definite cone."""


class PointBudgetExceeded(NumericalError):
    pass


class RadiusCapExceeded(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


class SingularHessian(NumericalError):
    pass


class DomainExit(NoConvergence):
    """Every damped Newton step left the positive-definite cone."""


class DegenerateSample(NumericalError):
    pass


class NoSignChange(NumericalError):
    pass


class TailTooFat(NumericalError):
    pass


class AcceptanceStall(NumericalError):
    pass
