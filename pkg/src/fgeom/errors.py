"""Exception types shared across the package."""


class FGeomError(Exception):
    """Base class for all package errors."""


class DegeneracyError(FGeomError):
    """A linear-algebra step hit a (near-)rank-deficient input."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ContractViolationError(FGeomError):
    """A documented precondition was violated by the caller."""


class EvalDomainError(FGeomError):
    """Evaluation left the domain of a function (log/sqrt/division)."""

    def __init__(self, message, expression=None):
        super().__init__(message)
        self.expression = expression


class ExprSyntaxError(FGeomError):
    """Expression source failed to parse."""

    def __init__(self, message, line, column, expected=()):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column
        self.expected = tuple(expected)


class ScenarioError(FGeomError):
    """A scenario file is malformed or references unknown names."""
