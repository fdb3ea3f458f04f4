"""Exception hierarchy shared by every module.

Each error carries the process exit code the CLI reports for it.
"""

from typing import Optional

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_BUDGET_EXCEEDED = 3


class VoronoiGameError(Exception):
    exit_code = EXIT_INPUT_ERROR


class InvalidInstanceError(VoronoiGameError):
    """Malformed instance, profile or distribution."""


class DuplicatePointError(InvalidInstanceError):
    pass


class DegenerateGeometryError(VoronoiGameError):
    """Float input not in general position."""


class PreconditionError(VoronoiGameError):
    pass


class ParseError(VoronoiGameError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        location = ""
        if line is not None:
            location = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(f"{location}{message}")


class BudgetExceededError(VoronoiGameError):
    exit_code = EXIT_BUDGET_EXCEEDED

    def __init__(self, what: str, required: int, budget: int):
        self.what = what
        self.required = required
        self.budget = budget
        super().__init__(f"{what} needs {required} evaluations, budget is {budget}")

    def __reduce__(self):
        # rebuilt from its fields when raised inside a worker process
        return type(self), (self.what, self.required, self.budget)
