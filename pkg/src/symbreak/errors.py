"""Exception hierarchy shared by all modules."""


class SymbreakError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(SymbreakError, ValueError):
    """Invalid parameters or violated preconditions."""


class NumericalError(SymbreakError, ArithmeticError):
    """A numerical procedure could not deliver a trustworthy result."""


# numerics
class NoSignChange(ValidationError):
    pass


class MaxIterations(NumericalError):
    """Bracket failed to shrink to a root; usually a pole inside the bracket."""


class ConvergenceFailure(NumericalError):
    pass


class NonFinite(NumericalError):
    pass


class GridMismatch(ValidationError):
    pass


# classical
class NotAMaximum(ValidationError):
    pass


class ToleranceAmbiguous(NumericalError):
    pass


class NoTurningPoints(ValidationError):
    pass


class AtSeparatrix(NoTurningPoints):
    pass


class EnergyBelowMinimum(ValidationError):
    pass


# qm1d
class NotNormalized(ValidationError):
    pass


class PotentialNotSymmetric(ValidationError):
    pass


# doublewell
class OutOfRange(ValidationError):
    pass


class BracketFailure(NumericalError):
    pass


class MatchingMismatch(NumericalError):
    pass


# output / cli
class EmptyFigure(ValidationError):
    pass


class UsageError(ValidationError):
    pass


class IoFailure(SymbreakError, OSError):
    """An output file could not be written."""
