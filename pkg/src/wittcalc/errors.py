"""Exception hierarchy.

Everything raised on purpose by the library derives from ``WittcalcError``;
the CLI maps ``DomainError`` subclasses to exit code 1 and ``UsageError``
subclasses to exit code 2.
"""


class WittcalcError(Exception):
    pass


class DomainError(WittcalcError, ValueError):
    """A mathematically invalid input (wrong valuation, non-closed form, ...)."""


class UsageError(WittcalcError, ValueError):
    """Malformed or inconsistent input that never reached the mathematics."""


class ParameterError(UsageError):
    """Mismatched or out-of-range parameters (p, n, level, context)."""


class Unsupported(DomainError):
    pass


class NotInGhostImage(DomainError):
    pass


class NotClosed(DomainError):
    pass


class NotIntegral(DomainError):
    pass


class PrecisionLoss(DomainError):
    pass


class LevelTooLow(DomainError):
    pass


class ParseError(UsageError):
    """Syntax error carrying the 0-based character offset of the problem."""

    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.reason = message


class ContextMismatch(UsageError):
    pass
