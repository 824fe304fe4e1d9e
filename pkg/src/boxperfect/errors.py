"""Exception types shared across the package."""


class BoxPerfectError(Exception):
    """Base class for every error raised by this package."""


class PreconditionError(BoxPerfectError, ValueError):
    """An input violates a documented precondition."""


class BudgetExceeded(BoxPerfectError):
    """A search would exceed a configured budget.

    `budget` names the config key so callers can report which limit was hit.
    """

    def __init__(self, budget: str, limit, detail: str = ""):
        self.budget = budget
        self.limit = limit
        msg = f"budget {budget}={limit} exceeded"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class ParseError(BoxPerfectError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InternalCheckError(BoxPerfectError, AssertionError):
    """A runtime self-check failed. This always indicates a bug."""
