"""Exception types shared across the package."""


class MacfockError(Exception):
    """Base class for all package-specific errors."""


class DivisionByZero(MacfockError, ZeroDivisionError):
    """Division by the exact zero scalar."""


class DenominatorVanishes(MacfockError):
    """A substitution sent a denominator to the zero polynomial."""


class PoleAtPoint(MacfockError, ZeroDivisionError):
    """Numeric evaluation hit a zero of the denominator."""


class NonzeroCharge(MacfockError):
    """A Maya diagram with nonzero charge where a partition state is required."""


class ArityMismatch(MacfockError):
    """Operand shapes disagree (variable counts, level counts, rank lists)."""


class SingularGram(MacfockError):
    """A Gram matrix that must be invertible is singular."""


class NotSymmetric(MacfockError):
    """A polynomial that must be symmetric in its variables is not."""


class NonPolynomialResult(MacfockError):
    """An operator that must preserve polynomiality left a remainder."""


class WindowTooSmall(MacfockError):
    """A Laurent window or truncation order was exceeded by a real contribution."""


class UnsupportedObservable(MacfockError):
    """An observable name outside the implemented families."""


class SingularSystem(MacfockError):
    """A linear system that must have a unique solution does not."""
