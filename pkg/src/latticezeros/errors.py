"""Exception and warning types shared by all modules."""


class LatticeZerosError(Exception):
    """Base class for errors raised by this package."""


class DomainError(LatticeZerosError, ValueError):
    """An argument lies outside the domain an operation supports."""


class PoleError(DomainError):
    """Evaluation requested at a pole of the function."""


class UnsupportedShape(DomainError):
    """No closed-form reference exists for the requested period ratio."""


class ConvergenceError(LatticeZerosError, ArithmeticError):
    """A series or quadrature did not reach its tolerance within its limits."""


class NoConvergence(ConvergenceError):
    """Newton refinement failed; callers should fall back to bracketing."""


class AccuracyError(LatticeZerosError, ArithmeticError):
    """A computed quantity violated a structural accuracy check."""


class BoundaryZeroError(LatticeZerosError):
    """A zero sits on a contour and perturbing the contour did not help."""


class WindowError(LatticeZerosError):
    """A t-window does not isolate a single zero cluster."""


class BracketError(LatticeZerosError):
    """Bisection endpoints do not straddle a transition."""


class AccuracyWarning(UserWarning):
    """Result returned, but its accuracy is below the requested target."""
