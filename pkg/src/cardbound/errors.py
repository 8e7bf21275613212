"""Exception hierarchy shared by all cardbound modules."""


class CardboundError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(CardboundError):
    """Dimension/extent mismatch between tensors, sequences or vectors."""


class DomainShrinkError(CardboundError):
    """Attempt to pad a degree sequence to a shorter length."""


class SortError(CardboundError):
    """A vector that must be non-increasing (or non-negative) is not."""


class UnsupportedConstruction(CardboundError):
    """The requested worst-case tensor construction does not apply."""


class UnsupportedMaterialization(CardboundError):
    """Worst-case instances can only be materialized with unbounded multiplicity."""


class UnsupportedForFdsb(CardboundError):
    """The functional bound is only defined for unbounded tuple multiplicity."""


class BudgetError(CardboundError):
    """A configured size/effort budget would be exceeded."""


class NotCyclic(CardboundError):
    """A cyclic-query operation was invoked on an acyclic query."""


class RangeError(CardboundError):
    """Argument outside the domain of a piecewise-linear function."""


class FeasibilityError(CardboundError):
    """Requested statistics admit no instance."""


class QuerySyntaxError(CardboundError):
    """Query text rejected; carries 1-based line/column of the offending token."""

    def __init__(self, message, line, column):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class DuplicateVariableInAtom(QuerySyntaxError):
    pass


class DuplicateAlias(QuerySyntaxError):
    pass


class ParseError(CardboundError):
    """Malformed tabular input; carries the 1-based data line number."""

    def __init__(self, message, line):
        super().__init__(f"{message} (line {line})")
        self.line = line


class CatalogError(CardboundError):
    """Statistics catalog cannot serve a request."""


class MissingFullSequence(CatalogError):
    """Operation needs a full degree sequence but only a staircase is stored."""


class CatalogFormatError(CatalogError):
    """Catalog file malformed; message names the offending location."""
