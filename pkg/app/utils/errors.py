"""
Exception hierarchy shared by services and commands
"""


class DifactorError(Exception):
    """Base class for every error raised on purpose by this package"""


class PreconditionError(DifactorError, ValueError):
    """An operation was called outside its documented preconditions"""


class InstanceParseError(DifactorError, ValueError):
    """Malformed instance text, always tied to a line"""

    def __init__(self, line_number: int, detail: str):
        self.line_number = line_number
        self.detail = detail
        super().__init__(f"line {line_number}: {detail}")


class BudgetExceeded(DifactorError):
    """An exhaustive search ran out of nodes or time"""

    def __init__(self, nodes_expanded: int, reason: str):
        self.nodes_expanded = nodes_expanded
        self.reason = reason
        super().__init__(f"budget exceeded after {nodes_expanded} nodes ({reason})")


class SearchInconclusive(DifactorError):
    """A constructive stage found no move and its fallbacks were exhausted"""


class CommandError(DifactorError):
    """Command-line failure with the exit code to report"""

    def __init__(self, exit_code: int, detail: str):
        self.exit_code = exit_code
        self.detail = detail
        super().__init__(detail)
