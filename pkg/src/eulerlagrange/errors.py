"""Exception hierarchy.

Two roots: :class:`InputError` for arguments outside a routine's domain
(the caller's fault) and :class:`NumericalError` for iterations that failed
on legal input. The CLI maps them to exit codes 2 and 3.
"""


class EulerLagrangeError(Exception):
    """Base class for every error raised by this package."""


class InputError(EulerLagrangeError, ValueError):
    pass


class NumericalError(EulerLagrangeError, ArithmeticError):
    pass


# numerics
class NoSignChange(InputError):
    pass


class NonFinite(NumericalError):
    pass


class MaxIterExceeded(NumericalError):
    pass


class Singular(NumericalError):
    pass


class SeedNotOnCurve(InputError):
    pass


class GradientVanished(NumericalError):
    """Gradient norm fell below 1e-12; the curve may have a singular point here."""


# euler_family / lagrange
class BracketFailure(NumericalError):
    pass


class OutOfRange(InputError):
    pass


class MassOutOfRange(InputError):
    pass


class DegenerateFamily(InputError):
    pass


# el_points / verify
class Collision(InputError):
    pass


class Pole(NumericalError):
    """A closed-form branch function was evaluated on a zero of its denominator."""

    def __init__(self, message, which=None):
        super().__init__(message)
        self.which = which


class RootNotFound(NumericalError):
    pass


class AmbiguousRoots(NumericalError):
    """More than one root on a bracket expected to hold exactly one."""

    def __init__(self, message, roots=()):
        super().__init__(message)
        self.roots = list(roots)


class ResidualGateFailed(NumericalError):
    pass


class CollisionDuringIntegration(NumericalError):
    def __init__(self, message, step=None, time=None):
        super().__init__(message)
        self.step = step
        self.time = time


class StepTooLarge(RuntimeWarning):
    """Energy of the massive subsystem drifted more than 1e-6 relative."""
