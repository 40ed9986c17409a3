"""Exception types shared across the library."""


class SupercurvesError(Exception):
    """Base class for all library errors."""


class DimensionError(SupercurvesError):
    """Operands live over different algebras or have incompatible shapes."""


class ParityError(SupercurvesError):
    """An entry or index violates the required Z2-grading."""


class NotInvertibleError(SupercurvesError):
    """Inversion requested for an element/matrix with non-invertible body."""


class DomainError(SupercurvesError):
    """Input outside the mathematical domain of the operation."""


class BigCellError(DomainError):
    """A frame is not in the big cell (its minus block is not invertible)."""
