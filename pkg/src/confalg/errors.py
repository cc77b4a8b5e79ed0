"""Exception types shared across the package."""


class ConfalgError(Exception):
    pass


class NonRationalScalarError(ConfalgError, TypeError):
    """A float, complex or otherwise inexact scalar reached exact arithmetic."""


class IndexOutOfRank(ConfalgError, IndexError):
    pass


class RankMismatch(ConfalgError, ValueError):
    pass


class NotUnimodular(ConfalgError, ValueError):
    pass


class NotAnIdeal(ConfalgError, ValueError):
    pass


class NonFreeQuotient(ConfalgError, ValueError):
    pass


class WindowTooSmall(ConfalgError, ValueError):
    pass


class IrrationalRoots(ConfalgError, ValueError):
    """A recursion certificate exists but its characteristic polynomial
    does not split over the rationals."""

    def __init__(self, message, certificate=None, residual=None):
        super().__init__(message)
        self.certificate = certificate
        self.residual = residual


class DslSyntaxError(ConfalgError, SyntaxError):
    def __init__(self, message, line=0, col=0, expected=()):
        self.line = line
        self.col = col
        self.expected = tuple(expected)
        detail = f"{message} at line {line}, column {col}"
        if self.expected:
            detail += f" (expected {', '.join(self.expected)})"
        super().__init__(detail)


class UnknownBasisSymbol(ConfalgError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown basis symbol"


class DuplicateName(ConfalgError, ValueError):
    pass
