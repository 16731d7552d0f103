"""Exception hierarchy.

Domain errors (bad parameters, infeasible requests) derive from
:class:`DomainError`; the CLI maps them to exit code 2. Input problems
derive from :class:`InputError` and map to exit code 1.
"""


class LevSelectError(Exception):
    """Base class for every error raised by this package."""


class DomainError(LevSelectError, ValueError):
    pass


class InputError(LevSelectError):
    pass


class ZeroMatrix(DomainError):
    pass


class NotOrthonormal(DomainError):
    pass


class InsufficientData(DomainError):
    pass


class InfeasibleThreshold(DomainError):
    pass


class RankDeficient(DomainError):
    pass


class InfeasibleTargets(DomainError):
    pass


class EmptyComplement(DomainError):
    pass


class InvalidRank(DomainError):
    pass


class InvalidEpsilon(DomainError):
    pass


class ParseError(InputError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class TooLarge(InputError):
    pass
