"""Exception hierarchy shared by every itlrev module."""


class ItlError(Exception):
    """Base class for all itlrev errors."""


class UnsortedVariable(ItlError):
    """A variable name is used with two different sorts."""


class SortError(ItlError):
    """An operator or predicate is applied to arguments of the wrong sort."""


class UnknownVariable(ItlError):
    pass


class IndexOutOfRange(ItlError):
    pass


class FusionMismatch(ItlError):
    """The last state of the left interval differs from the first of the right."""


class EvaluationError(ItlError):
    pass


class DivisionByZero(EvaluationError):
    pass


class Overflow(EvaluationError):
    pass


class NotExecutable(ItlError):
    """The formula falls outside the fragment the execution engine handles."""


class Contradiction(ItlError):
    """The constraints on the current state cannot all hold."""


class PremiseFailed(ItlError):
    def __init__(self, premise, message=""):
        self.premise = premise
        super().__init__(message or f"premise failed: {premise}")


class ParseError(ItlError):
    def __init__(self, message, line, column):
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}")


class AuditFailure(ItlError):
    """A trace the engine reported as completed does not satisfy its formula."""
