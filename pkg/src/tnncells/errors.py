"""Exception hierarchy shared by all modules."""


class TnnCellsError(Exception):
    pass


class EnumerationTooLarge(TnnCellsError):
    """An exhaustive enumeration would exceed the configured cap."""


class CartanTypeError(TnnCellsError, ValueError):
    pass


class GroupMismatchError(TnnCellsError, ValueError):
    pass


class InvalidWordError(TnnCellsError, ValueError):
    pass


class NoSubexpressionError(TnnCellsError, ValueError):
    pass


class ParameterError(TnnCellsError, ValueError):
    pass


class SingularMatrixError(TnnCellsError, ValueError):
    pass


class ReductionError(TnnCellsError, ValueError):
    pass


class ClassificationError(TnnCellsError):
    """Internal consistency failure while classifying a flag; indicates a bug."""
