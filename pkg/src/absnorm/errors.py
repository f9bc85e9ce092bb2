"""Exception types shared across the package."""


class AbsnormError(Exception):
    """Base class for all package errors."""


class SpecError(AbsnormError, ValueError):
    """A norm specification is structurally invalid."""


class SpecParseError(SpecError):
    """The mini-language text could not be parsed.

    ``position`` is the character offset into the original text where the
    problem starts; it is embedded in the message for CLI display.
    """

    def __init__(self, message, position, text=""):
        self.position = position
        self.text = text
        super().__init__(f"spec parse error at position {position}: {message}")


class DomainError(AbsnormError, ValueError):
    """An input lies outside an operation's domain."""


class ConcavityViolationError(AbsnormError, ArithmeticError):
    """Numerical evidence contradicts concavity of the boundary curve.

    Raised when one-sided difference quotients cross beyond the certified
    root-finding allowance, which signals an invalid norm specification.
    """


class DegenerateFunctionalError(AbsnormError, ArithmeticError):
    """A support-functional denominator collapsed (cannot occur for valid specs)."""


class UndecidedCaseError(AbsnormError):
    """An endpoint support-set case is ambiguous within tolerance.

    Carries the candidate case labels so callers can inspect both readings.
    """

    def __init__(self, message, candidates):
        self.candidates = tuple(candidates)
        super().__init__(f"{message} (candidates: {', '.join(self.candidates)})")


class PreconditionError(AbsnormError):
    """A documented precondition of an operation does not hold."""
