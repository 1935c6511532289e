"""Exception hierarchy shared by all modules."""


class CircleStabError(Exception):
    """Base class for every error raised by circlestab."""


class DomainError(CircleStabError, ValueError):
    """Input outside the mathematical domain of an operation."""


class PreconditionError(CircleStabError, ValueError):
    """An operation was called on an input that violates its contract."""


class ResolutionError(CircleStabError):
    """The sampling grid is too coarse to separate neighbouring zeros."""

    def __init__(self, message, locations=()):
        super().__init__(message)
        self.locations = tuple(locations)


class AmbiguousNeighborhoodError(CircleStabError):
    """Probe points around a zero are themselves numerically zero."""


class DegenerateAtomError(CircleStabError, ValueError):
    pass


class ConstructionFailedError(CircleStabError):
    """A perturbation was built but failed its verification scan."""


class ImpossibleStateError(CircleStabError):
    pass


class DensityFailedError(CircleStabError):
    pass


class InvalidHomeomorphismError(CircleStabError, ValueError):
    pass


class NotEquivalentError(CircleStabError):
    pass


class UndecidedError(CircleStabError):
    """Equivalence was requested for fields that are not structurally stable."""


class ParseError(CircleStabError, ValueError):
    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
        self.line = line
        self.column = column
