"""Exception taxonomy shared across the package.

Expected failures raise DomainError (or a subclass) carrying the name of the
violated precondition, so callers and the CLI can report them without stack
traces.  ResourceBoundError marks size guards; InconsistencyError marks
internal invariants that must never fail on valid input.
"""


class SpheckeError(Exception):
    """Base class for all package errors."""


class DomainError(SpheckeError):
    """A documented precondition was violated."""

    def __init__(self, message, precondition="unspecified"):
        super().__init__(message)
        self.precondition = precondition


class DimensionError(DomainError):
    """Coordinate vectors of mismatched length."""

    def __init__(self, message):
        super().__init__(message, precondition="matching_dimensions")


class ParseError(DomainError):
    """Malformed JSON input; carries the offending field."""

    def __init__(self, message, field="?"):
        super().__init__(message, precondition="well_formed_input")
        self.field = field


class ResourceBoundError(SpheckeError):
    """A configured size bound would be exceeded."""


class InconsistencyError(SpheckeError):
    """An internal invariant failed; signals a bug, not bad input."""


class FieldSplitError(DomainError):
    """A recovery polynomial does not split over the working field.

    Carries the monic polynomial (as a coefficient list, constant term
    first) and the total extension degree over the prime field that would
    make it split.
    """

    def __init__(self, message, polynomial, recommended_ext_degree):
        super().__init__(message, precondition="polynomial_splits")
        self.polynomial = polynomial
        self.recommended_ext_degree = recommended_ext_degree
