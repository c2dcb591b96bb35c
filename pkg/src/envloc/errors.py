"""Exception types shared across the package."""


class EnvlocError(Exception):
    """Base class for all package-specific errors."""


class DomainError(EnvlocError, ValueError):
    """A parameter or state violates a documented invariant."""


class NumericalInstabilityError(EnvlocError, ArithmeticError):
    """An intermediate quantity left its valid range by more than the
    rounding tolerance, so the result cannot be trusted."""


class DegenerateSpecError(DomainError):
    """Target and background occupations coincide; the count-based
    decision rule is vacuous."""


class UnsupportedProtocolError(DomainError):
    """The requested receiver protocol does not exist for this channel
    class (the anti-squeezing step diverges for additive noise)."""


class DegenerateScenarioWarning(UserWarning):
    """Scenario built with identical target and background noise."""
