"""Exception types raised by the solvers."""


class DomainError(ValueError):
    """An argument or evaluation point lies outside a curve's or model's domain."""


class BracketError(ValueError):
    """A root-finding bracket does not enclose a sign change."""


class ConvergenceError(RuntimeError):
    """An iterative method stopped before meeting its tolerance.

    The last iterate is kept on ``last`` so callers can report it.
    """

    def __init__(self, message, last=None):
        super().__init__(message)
        self.last = last


class DegeneracyError(ArithmeticError):
    """A denominator or curvature condition that must be strictly signed is not."""


class UnsupportedConfigurationError(ValueError):
    """The model is only available for a narrower class of curves."""


class ConfigError(ValueError):
    """A scenario configuration failed validation; ``field`` names the offender."""

    def __init__(self, message, field=None):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field
