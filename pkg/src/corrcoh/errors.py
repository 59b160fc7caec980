"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: ParseError -> 2, EnumerationCapExceeded
-> 3, UndecidedClassEquality -> 4.
"""


class CorrError(Exception):
    """Base class for engine errors."""


class ParseError(CorrError):
    def __init__(self, reason, line=None, path=None):
        self.reason = reason
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += str(path)
        if line is not None:
            where += f":{line}"
        super().__init__(f"{where}: {reason}" if where else reason)


class ModelError(CorrError):
    """A space, marked space or map violates its invariants."""


class EnumerationCapExceeded(CorrError):
    pass


class SearchBoundExceeded(CorrError):
    pass


class UndecidedClassEquality(CorrError):
    pass


class MismatchedSpaces(CorrError):
    pass


class InvariantViolated(CorrError):
    pass


class NotAComplex(CorrError):
    pass


class NotLevelZero(CorrError):
    pass


class HypothesisNotSatisfied(CorrError):
    pass
