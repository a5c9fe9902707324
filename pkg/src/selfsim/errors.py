"""Exception hierarchy shared by every module."""


class SelfSimError(Exception):
    """Base class for all errors raised by the package."""


class NotABijection(SelfSimError, ValueError):
    pass


class ClosureCapExceeded(SelfSimError):
    pass


class EnumerationCapExceeded(SelfSimError):
    pass


class NotAPGroup(SelfSimError, ValueError):
    pass


class NotNormal(SelfSimError, ValueError):
    pass


class NotPowerful(SelfSimError, ValueError):
    pass


class BasisSearchFailed(SelfSimError, RuntimeError):
    pass


class LemmaViolation(SelfSimError, AssertionError):
    pass


class OrderTooSmall(SelfSimError, ValueError):
    pass


class NotMaximalClass(SelfSimError, ValueError):
    pass


class GeneratorsDontGenerate(SelfSimError, ValueError):
    pass


class NotSimple(SelfSimError, ValueError):
    pass


class LevelTooLarge(SelfSimError, ValueError):
    pass


class NotFaithful(SelfSimError, RuntimeError):
    pass


class NotSelfSimilar(SelfSimError):
    pass


class OrderMismatch(SelfSimError, ValueError):
    pass


class ParseError(SelfSimError, ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class BudgetExceeded(SelfSimError):
    """Raised when a search runs past its time budget; carries partial stats."""

    def __init__(self, message: str, stats=None):
        super().__init__(message)
        self.stats = stats
