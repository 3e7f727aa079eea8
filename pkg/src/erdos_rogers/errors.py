"""Exception types raised across the package."""


class NotPrimePower(ValueError):
    def __init__(self, q):
        super().__init__(f"{q} is not a prime power")
        self.q = q


class UnsupportedFieldSize(ValueError):
    pass


class DivisionByZero(ZeroDivisionError):
    pass


class BudgetExceeded(RuntimeError):
    """An exact search ran out of its node/quadruple budget before finishing."""

    def __init__(self, message, explored=None):
        super().__init__(message)
        self.explored = explored


class UnknownLineId(KeyError):
    pass


class LinesDisjoint(ValueError):
    pass


class NotLinear(ValueError):
    """Two lines share two or more points."""


class MissingColor(KeyError):
    pass


class VertexMismatch(ValueError):
    pass


class TooLarge(ValueError):
    pass


class EpsilonOutOfRange(ValueError):
    pass


class RhoExceedsOne(ValueError):
    pass


class RetriesExhausted(RuntimeError):
    def __init__(self, message, report=None, attempts=0):
        super().__init__(message)
        self.report = report
        self.attempts = attempts
