"""Exception hierarchy shared across the package."""


class ArborError(Exception):
    """Base class for every error raised by arborhyp."""


class ZeroZero(ArborError, ValueError):
    pass


class EqualSlopes(ArborError, ValueError):
    pass


class InvalidPresentation(ArborError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations) or "invalid presentation")


class NotReduced(ArborError):
    pass


class NotCandidate(ArborError):
    pass


class UnsupportedRegion(ArborError):
    pass


class Infeasible(ArborError):
    pass


class ParseError(ArborError):
    def __init__(self, message, line=1, column=1):
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")


class SemanticError(ArborError):
    pass
