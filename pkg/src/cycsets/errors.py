"""Shared exception types; the CLI maps these onto exit codes."""


class PreconditionError(ValueError):
    """An operation's stated precondition does not hold (CLI exit code 2)."""


class BudgetExceededError(RuntimeError):
    """A search/enumeration exceeded its configured budget (CLI exit code 3).

    Carries whatever partial bounds were known when the budget ran out, so
    callers can still report best-known upper/lower bounds.
    """

    def __init__(self, message, lower=None, upper=None):
        super().__init__(message)
        self.lower = lower
        self.upper = upper


class VerificationError(AssertionError):
    """A verification suite found a violated claim (CLI exit code 4)."""
